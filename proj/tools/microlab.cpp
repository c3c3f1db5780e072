// microlab: command-line front end for the energy evaluators, constructions, sweeps and
// coverings. One subcommand per invocation; artifacts go to --out together with a manifest.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "microlab/constructions.hpp"
#include "microlab/covering.hpp"
#include "microlab/energy.hpp"
#include "microlab/json_io.hpp"
#include "microlab/minimizer.hpp"
#include "microlab/sbv_limit.hpp"
#include "microlab/scaling_lab.hpp"

namespace fs = std::filesystem;
using namespace microlab;

namespace {

constexpr const char* kVersion = "0.1.0";

// Bad user input (exit 2) vs. runtime failure (exit 1).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

json default_config() {
  return {
      {"params", {{"p", 2.0}, {"theta", 0.25}, {"form", "unrescaled"}}},
      {"grid", {{"nx", 64}, {"ny", 64}}},
      {"sweep", {{"constructions", {"constant", "branching"}}, {"refine_with_minimizer", false}}},
      {"minimize",
       {{"max_iter", 500},
        {"deltas", {1e-1, 1e-2, 1e-3}},
        {"armijo", 1e-4},
        {"shrink", 0.5},
        {"max_backtracks", 40},
        {"initial_step", 1.0},
        {"rel_tol", 1e-9},
        {"random_amplitude", 0.1},
        {"init", "constant"}}},
      {"construct", {{"kind", "constant"}, {"alpha", 0.9}, {"ell", 1.0}, {"h", 1.0}}},
      {"cover", {{"domain", "square"}, {"delta", 1.0}, {"min_side", 0.0}, {"samples", 10000}}},
      {"output", "microlab_out"},
  };
}

void validate_config(const json& c) {
  check_keys(c, {"params", "grid", "sweep", "minimize", "construct", "cover", "recover", "output", "input"},
             "config");
  if (c.contains("params")) check_keys(c["params"], {"p", "theta", "epsilon", "sigma", "form"}, "config.params");
  if (c.contains("grid")) check_keys(c["grid"], {"nx", "ny"}, "config.grid");
  if (c.contains("sweep")) {
    check_keys(c["sweep"], {"epsilons", "log_range", "constructions", "refine_with_minimizer"}, "config.sweep");
    if (c["sweep"].contains("log_range")) check_keys(c["sweep"]["log_range"], {"lo", "hi", "n"}, "config.sweep.log_range");
  }
  if (c.contains("minimize"))
    check_keys(c["minimize"],
               {"max_iter", "deltas", "armijo", "shrink", "max_backtracks", "initial_step", "rel_tol",
                "random_amplitude", "init"},
               "config.minimize");
  if (c.contains("construct")) check_keys(c["construct"], {"kind", "alpha", "ell", "h"}, "config.construct");
  if (c.contains("cover"))
    check_keys(c["cover"], {"domain", "rects", "delta", "min_side", "samples"}, "config.cover");
  if (c.contains("recover")) check_keys(c["recover"], {"theta"}, "config.recover");
  if (c.contains("output") && !c["output"].is_string()) throw InputError("config.output must be a string");
  if (c.contains("input") && !c["input"].is_string()) throw InputError("config.input must be a string");
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

EnergyParams params_of(const json& cfg) {
  json p = cfg.at("params");
  if (!p.contains("epsilon") && !p.contains("sigma")) {
    // Default to the crossover epsilon = theta^p.
    p["epsilon"] = std::pow(p.at("theta").get<double>(), p.at("p").get<double>());
  }
  return params_from_json(p);
}

MinimizeOptions minimize_options_of(const json& cfg, std::uint64_t seed) {
  const json& m = cfg.at("minimize");
  MinimizeOptions o;
  o.nx = cfg.at("grid").at("nx").get<int>();
  o.ny = cfg.at("grid").at("ny").get<int>();
  o.max_iter = m.at("max_iter").get<int>();
  o.deltas = m.at("deltas").get<std::vector<double>>();
  o.armijo = m.at("armijo").get<double>();
  o.shrink = m.at("shrink").get<double>();
  o.max_backtracks = m.at("max_backtracks").get<int>();
  o.initial_step = m.at("initial_step").get<double>();
  o.rel_tol = m.at("rel_tol").get<double>();
  o.random_amplitude = m.at("random_amplitude").get<double>();
  o.seed = seed;
  o.validate();
  return o;
}

std::string input_path(const json& cfg, const char* what) {
  if (!cfg.contains("input")) throw InputError(std::string(what) + " requires --input");
  return cfg.at("input").get<std::string>();
}

bool is_microfield(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::string first;
  in >> first;
  return first == "MICROFIELD";
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << s;
}

struct Context {
  json cfg;
  fs::path out;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::vector<std::string> artifacts;

  void write_json(const std::string& name, const json& j) {
    write_json_file((out / name).string(), j);
    artifacts.push_back(name);
  }
  void write_field(const std::string& name, const GridField& f) {
    save_microfield((out / name).string(), f);
    artifacts.push_back(name);
  }
  void write_file(const std::string& name, const std::string& text) {
    write_text(out / name, text);
    artifacts.push_back(name);
  }
};

json run_energy(Context& ctx) {
  const auto params = params_of(ctx.cfg);
  json result;
  if (ctx.cfg.contains("input")) {
    const std::string path = input_path(ctx.cfg, "energy");
    if (is_microfield(path)) {
      const GridField f = load_microfield(path);
      result["source"] = "grid";
      result["energy"] = to_json(energy_grid(f, params));
    } else {
      const auto prof = profile_from_json(read_json_file(path));
      result["source"] = "profile";
      result["energy"] = to_json(energy_analytic(prof, params));
    }
  } else {
    const std::string kind = ctx.cfg.at("construct").at("kind").get<std::string>();
    AnalyticProfile prof = constant_profile();
    if (kind == "branching") prof = branching_profile(params.with_form(EnergyForm::Unrescaled)).first;
    else if (kind != "constant") throw InputError("energy: construction must be constant or branching without --input");
    const auto form_params = params;
    if (params.form == EnergyForm::Rescaled) prof = rescale_v_to_u(prof, params.theta);
    result["source"] = kind;
    result["energy"] = to_json(energy_analytic(prof, form_params));
  }
  ctx.write_json("energy.json", result);
  return result;
}

json run_construct(Context& ctx) {
  const auto params = params_of(ctx.cfg);
  const json& c = ctx.cfg.at("construct");
  const std::string kind = c.at("kind").get<std::string>();
  const int nx = ctx.cfg.at("grid").at("nx").get<int>(), ny = ctx.cfg.at("grid").at("ny").get<int>();
  json result{{"kind", kind}};
  std::optional<AnalyticProfile> prof;
  std::optional<EnergyParams> eval;
  if (kind == "constant") {
    prof = constant_profile();
    eval = params.with_form(EnergyForm::Unrescaled);
  } else if (kind == "identity") {
    prof = identity_profile();
    eval = params.with_form(EnergyForm::Rescaled);
  } else if (kind == "branching") {
    auto [b, spec] = branching_profile(params);
    prof = std::move(b);
    eval = params;
    result["assembly"] = {{"alpha", spec.alpha}, {"N", spec.N}, {"I", spec.I}};
  } else if (kind == "branch-cell") {
    auto spec = BranchCellSpec::symmetric(c.at("ell").get<double>(), c.at("h").get<double>(), params.theta);
    prof = branch_cell(spec);
  } else if (kind == "example") {
    prof = example_sequence(params.theta, c.at("alpha").get<double>(), params.p);
    eval = params.with_form(EnergyForm::Rescaled);
  } else if (kind == "recovery") {
    const auto u = sbv_from_json(read_json_file(input_path(ctx.cfg, "construct recovery")));
    prof = recovery_sequence(u, params.theta);
    eval = EnergyParams::rescaled(u.p, params.theta, u.sigma);
  } else {
    throw InputError("construct: unknown kind '" + kind + "'");
  }
  ctx.write_json("profile.json", to_json(*prof));
  if (eval) result["energy"] = to_json(energy_analytic(*prof, *eval));
  const Rect& d = prof->domain();
  if (d.x_lo == 0.0 && d.x_hi == 1.0 && d.y_lo == 0.0 && d.y_hi == 1.0) {
    ctx.write_field("field.microfield", sample_profile(*prof, nx, ny));
  }
  result["cells"] = prof->cell_count();
  result["interfaces"] = prof->interfaces().size();
  ctx.write_json("construct.json", result);
  return result;
}

json run_limit_energy(Context& ctx) {
  const auto u = sbv_from_json(read_json_file(input_path(ctx.cfg, "limit-energy")));
  const auto report = validate(u);
  json result{{"validation", to_json(report)}};
  if (!report.ok()) {
    ctx.write_json("limit.json", result);
    throw InputError("limit-energy: invalid input: " + report.summary());
  }
  result["energy"] = to_json(limit_energy(u));
  result["jump_length"] = jump_length(u);
  ctx.write_json("limit.json", result);
  return result;
}

json run_recover(Context& ctx) {
  const auto u = sbv_from_json(read_json_file(input_path(ctx.cfg, "recover")));
  const auto report = validate(u);
  if (!report.ok()) throw InputError("recover: invalid input: " + report.summary());
  double theta = ctx.cfg.at("params").at("theta").get<double>();
  if (ctx.cfg.contains("recover") && ctx.cfg["recover"].contains("theta"))
    theta = ctx.cfg["recover"]["theta"].get<double>();
  const auto prof = recovery_sequence(u, theta);
  const auto params = EnergyParams::rescaled(u.p, theta, u.sigma);
  json result{{"theta", theta},
              {"rho", recovery_rho(u)},
              {"energy", to_json(energy_analytic(prof, params))},
              {"limit_energy", to_json(limit_energy(u))},
              {"l1_error", recovery_l1_error(u, theta)}};
  ctx.write_json("profile.json", to_json(prof));
  ctx.write_json("recover.json", result);
  return result;
}

json run_minimize(Context& ctx) {
  const auto params = params_of(ctx.cfg);
  const auto opts = minimize_options_of(ctx.cfg, ctx.seed);
  const auto init = init_kind_from_string(ctx.cfg.at("minimize").at("init").get<std::string>());
  std::optional<GridField> given;
  if (init == InitKind::Given) given = load_microfield(input_path(ctx.cfg, "minimize init=given"));
  const auto res = minimize(params, opts, init, given);
  std::ostringstream csv;
  csv << "iter,delta_s,E_smooth,E_exact\n";
  for (const auto& r : res.trace)
    csv << r.iter << ',' << format_double(r.delta_s) << ',' << format_double(r.e_smooth) << ','
        << format_double(r.e_exact) << '\n';
  ctx.write_file("trace.csv", csv.str());
  ctx.write_field("field.microfield", res.field);
  json result{{"status", res.status},
              {"init", to_string(init)},
              {"initial_exact", res.initial_exact},
              {"best_exact", res.best_exact},
              {"iterations", res.trace.empty() ? 0 : res.trace.back().iter},
              {"energy", to_json(energy_grid(res.field, params))}};
  ctx.write_json("minimize.json", result);
  return result;
}

std::vector<double> epsilons_of(const json& cfg, double p, double theta) {
  const json& s = cfg.at("sweep");
  if (s.contains("epsilons")) return s.at("epsilons").get<std::vector<double>>();
  const double tp = std::pow(theta, p);
  double lo = tp * 1e-5, hi = tp * 1e-1;
  int n = 9;
  if (s.contains("log_range")) {
    const json& r = s.at("log_range");
    lo = r.value("lo", lo);
    hi = r.value("hi", hi);
    n = r.value("n", n);
  }
  return log_space(lo, hi, n);
}

json run_sweep(Context& ctx) {
  const auto params = params_of(ctx.cfg);
  SweepOptions o;
  o.p = params.p;
  o.theta = params.theta;
  o.epsilons = epsilons_of(ctx.cfg, o.p, o.theta);
  o.constructions = ctx.cfg.at("sweep").at("constructions").get<std::vector<std::string>>();
  o.refine_with_minimizer = ctx.cfg.at("sweep").at("refine_with_minimizer").get<bool>();
  if (o.refine_with_minimizer) o.minimize = minimize_options_of(ctx.cfg, ctx.seed);
  o.threads = ctx.threads;
  const auto recs = sweep(o);
  std::ostringstream csv;
  write_sweep_csv(csv, recs);
  ctx.write_file("sweep.csv", csv.str());
  json errors = json::array();
  for (const auto& r : recs)
    if (!r.error.empty()) errors.push_back({{"epsilon", r.epsilon}, {"construction", r.construction}, {"error", r.error}});
  json result{{"rows", recs.size()}, {"errors", errors}};
  try {
    const auto fit = fit_exponent(recs);
    result["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"residual", fit.residual}, {"points", fit.points}};
  } catch (const std::invalid_argument& e) {
    result["fit"] = {{"error", e.what()}};
  }
  ctx.write_json("sweep.json", result);
  return result;
}

std::vector<SweepRecord> read_csv_input(const json& cfg, const char* what) {
  const std::string path = input_path(cfg, what);
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_sweep_csv(in);
}

json run_fit(Context& ctx) {
  const auto fit = fit_exponent(read_csv_input(ctx.cfg, "fit"));
  json result{{"slope", fit.slope}, {"intercept", fit.intercept}, {"residual", fit.residual}, {"points", fit.points}};
  ctx.write_json("fit.json", result);
  return result;
}

json run_sandwich(Context& ctx) {
  const auto rep = sandwich_check(read_csv_input(ctx.cfg, "sandwich"));
  json result{{"min_ratio", rep.min_ratio},
              {"max_ratio", rep.max_ratio},
              {"band", rep.band},
              {"points", rep.points},
              {"passed", rep.passed},
              {"note", "best is an upper bound on the infimum; only the upper ratio is rigorous"}};
  ctx.write_json("sandwich.json", result);
  return result;
}

RectUnion domain_of(const json& c) {
  if (c.contains("rects")) {
    std::vector<Rect> rs;
    for (const auto& r : c.at("rects")) {
      const auto v = r.get<std::vector<double>>();
      if (v.size() != 4) throw InputError("cover.rects entries are [x_lo, x_hi, y_lo, y_hi]");
      rs.push_back({v[0], v[1], v[2], v[3]});
    }
    return RectUnion(rs);
  }
  const std::string d = c.at("domain").get<std::string>();
  if (d == "square") return RectUnion({{0, 1, 0, 1}});
  if (d == "L") return RectUnion({{0, 1, 0, 0.5}, {0, 0.5, 0.5, 1}});
  if (d == "slab") return RectUnion({{0, 1, 0, 0.01}});
  throw InputError("cover: unknown domain '" + d + "' (square, L, slab or rects)");
}

json run_cover(Context& ctx) {
  const json& c = ctx.cfg.at("cover");
  const auto omega = domain_of(c);
  const auto cover = whitney_cover(omega, c.at("delta").get<double>(), c.at("min_side").get<double>());
  const auto rep = verify_cover(cover, c.at("samples").get<std::size_t>(), ctx.seed);
  const json full = to_json(cover, rep);
  ctx.write_json("cover.json", full);
  json summary{{"constants", full.at("constants")}, {"checks", full.at("checks")}};
  return summary;
}

void set_path(json& cfg, const std::vector<std::string>& path, const json& v) {
  json* node = &cfg;
  for (const auto& k : path) node = &(*node)[k];
  *node = v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"microlab: energy scaling laboratory for twinned martensite near austenite interfaces"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = -1;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker threads (0 = auto); falls back to MICROLAB_THREADS");

  // Overrides mirroring config keys.
  std::optional<double> p, theta, epsilon, sigma, alpha, ell, h, delta, min_side;
  std::optional<int> nx, ny, max_iter;
  std::optional<std::string> form, input, kind, init, domain;
  std::optional<std::size_t> samples;
  app.add_option("--p", p, "exponent p > 1");
  app.add_option("--theta", theta, "volume fraction in (0, 1/2]");
  app.add_option("--epsilon", epsilon, "interfacial coefficient (unrescaled)");
  app.add_option("--sigma", sigma, "interfacial coefficient (rescaled)");
  app.add_option("--form", form, "unrescaled or rescaled");
  app.add_option("--nx", nx, "grid nodes in x1");
  app.add_option("--ny", ny, "grid nodes in x2");
  app.add_option("--input", input, "input file (MICROFIELD, profile/SBV JSON or sweep CSV)");

  auto* energy = app.add_subcommand("energy", "evaluate a field or profile");
  energy->add_option("--construction", kind, "constant or branching when no --input is given");
  auto* construct = app.add_subcommand("construct", "emit a construction as profile JSON and MICROFIELD");
  construct->add_option("--kind", kind, "constant, identity, branching, branch-cell, example, recovery");
  construct->add_option("--alpha", alpha, "example sequence exponent");
  construct->add_option("--ell", ell, "branch cell length");
  construct->add_option("--height", h, "branch cell height");
  auto* limit = app.add_subcommand("limit-energy", "validate an SBV limit object and evaluate its energy");
  auto* recover = app.add_subcommand("recover", "recovery profile for an SBV limit object");
  auto* mini = app.add_subcommand("minimize", "gradient descent on the smoothed grid energy");
  mini->add_option("--init", init, "constant, branching, random or given");
  mini->add_option("--max-iter", max_iter, "iterations per continuation stage");
  auto* sweep_cmd = app.add_subcommand("sweep", "energy sweep over epsilon");
  auto* fit = app.add_subcommand("fit", "fit the scaling exponent of a sweep CSV");
  auto* sandwich = app.add_subcommand("sandwich", "scaling-law ratio band of a sweep CSV");
  auto* cover = app.add_subcommand("cover", "Whitney-type square covering");
  cover->add_option("--domain", domain, "square, L or slab");
  cover->add_option("--delta", delta, "maximal square side");
  cover->add_option("--min-side", min_side, "refinement floor near the boundary (0 = automatic)");
  cover->add_option("--samples", samples, "coverage sample points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump() << '\n';
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    json cfg = default_config();
    if (!config_path.empty()) {
      json user = read_json_file(config_path);
      validate_config(user);
      if (user.contains("params") && (user["params"].contains("epsilon") || user["params"].contains("sigma"))) {
        cfg["params"].erase("epsilon");
        cfg["params"].erase("sigma");
      }
      cfg.merge_patch(user);
    }
    if (p) set_path(cfg, {"params", "p"}, *p);
    if (theta) set_path(cfg, {"params", "theta"}, *theta);
    if (epsilon) {
      cfg["params"].erase("sigma");
      set_path(cfg, {"params", "epsilon"}, *epsilon);
    }
    if (sigma) {
      if (!epsilon) cfg["params"].erase("epsilon");
      set_path(cfg, {"params", "sigma"}, *sigma);
    }
    if (form) set_path(cfg, {"params", "form"}, *form);
    if (nx) set_path(cfg, {"grid", "nx"}, *nx);
    if (ny) set_path(cfg, {"grid", "ny"}, *ny);
    if (input) set_path(cfg, {"input"}, *input);
    if (kind) set_path(cfg, {"construct", "kind"}, *kind);
    if (alpha) set_path(cfg, {"construct", "alpha"}, *alpha);
    if (ell) set_path(cfg, {"construct", "ell"}, *ell);
    if (h) set_path(cfg, {"construct", "h"}, *h);
    if (init) set_path(cfg, {"minimize", "init"}, *init);
    if (max_iter) set_path(cfg, {"minimize", "max_iter"}, *max_iter);
    if (domain) {
      cfg["cover"].erase("rects");
      set_path(cfg, {"cover", "domain"}, *domain);
    }
    if (delta) set_path(cfg, {"cover", "delta"}, *delta);
    if (min_side) set_path(cfg, {"cover", "min_side"}, *min_side);
    if (samples) set_path(cfg, {"cover", "samples"}, *samples);
    if (!out_dir.empty()) cfg["output"] = out_dir;
    validate_config(cfg);

    if (threads < 0) {
      const char* env = std::getenv("MICROLAB_THREADS");
      threads = env ? std::stoi(env) : 0;
      if (threads < 0) throw InputError("MICROLAB_THREADS must be >= 0");
    }

    Context ctx;
    ctx.cfg = cfg;
    ctx.out = cfg.at("output").get<std::string>();
    ctx.seed = seed;
    ctx.threads = static_cast<unsigned>(threads);
    fs::create_directories(ctx.out);

    std::string command;
    json result;
    if (energy->parsed()) command = "energy", result = run_energy(ctx);
    else if (construct->parsed()) command = "construct", result = run_construct(ctx);
    else if (limit->parsed()) command = "limit-energy", result = run_limit_energy(ctx);
    else if (recover->parsed()) command = "recover", result = run_recover(ctx);
    else if (mini->parsed()) command = "minimize", result = run_minimize(ctx);
    else if (sweep_cmd->parsed()) command = "sweep", result = run_sweep(ctx);
    else if (fit->parsed()) command = "fit", result = run_fit(ctx);
    else if (sandwich->parsed()) command = "sandwich", result = run_sandwich(ctx);
    else if (cover->parsed()) command = "cover", result = run_cover(ctx);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json manifest{{"command", command},
                  {"config", cfg},
                  {"config_hash", hex64(fnv1a(cfg.dump()))},
                  {"seed", seed},
                  {"threads", threads},
                  {"artifacts", ctx.artifacts},
                  {"versions",
                   {{"microlab", kVersion},
                    {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                          std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                          std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                    {"cli11", CLI11_VERSION},
                    {"compiler", __VERSION__}}},
                  {"timings", {{"wall_seconds", wall}}}};
    write_json_file((ctx.out / "manifest.json").string(), manifest);
    std::cout << result.dump(2) << '\n';
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << json{{"error", {{"type", "invalid_input"}, {"message", e.what()}}}}.dump() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << json{{"error", {{"type", "invalid_input"}, {"message", e.what()}}}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"type", "runtime"}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  }
}
