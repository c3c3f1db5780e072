#include "microlab/scaling_lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "microlab/constructions.hpp"

namespace microlab {

void SweepOptions::validate() const {
  EnergyParams::unrescaled(p, theta, std::pow(theta, p)).validate();
  if (epsilons.empty()) throw std::invalid_argument("sweep: empty epsilon list");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0) || !std::isfinite(epsilons[k]))
      throw std::invalid_argument("sweep: epsilon must be positive");
    if (k > 0 && !(epsilons[k] > epsilons[k - 1])) throw std::invalid_argument("sweep: epsilons must increase");
  }
  if (constructions.empty()) throw std::invalid_argument("sweep: empty construction set");
  for (const auto& c : constructions)
    if (c != "constant" && c != "branching") throw std::invalid_argument("sweep: unknown construction " + c);
  if (refine_with_minimizer) minimize.validate();
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi >= lo) || n < 1) throw std::invalid_argument("log_space: need 0 < lo <= hi, n >= 1");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int k = 0; k < n; ++k) out[k] = std::exp(a + (b - a) * k / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {

SweepRecord evaluate_one(const SweepOptions& opts, double eps, const std::string& what) {
  const auto params = EnergyParams::unrescaled(opts.p, opts.theta, eps);
  SweepRecord rec;
  rec.p = opts.p;
  rec.theta = opts.theta;
  rec.epsilon = eps;
  rec.sigma = params.sigma;
  rec.construction = what;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (what == "constant") {
      rec.energy = energy_analytic(constant_profile(), params);
    } else {
      rec.energy = energy_analytic(branching_profile(params).first, params);
    }
  } catch (const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.energy = EnergyBreakdown{nan, nan, nan, nan, params};
    rec.error = e.what();
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

SweepRecord refine_one(const SweepOptions& opts, double eps, bool branching) {
  const auto params = EnergyParams::unrescaled(opts.p, opts.theta, eps);
  SweepRecord rec;
  rec.p = opts.p;
  rec.theta = opts.theta;
  rec.epsilon = eps;
  rec.sigma = params.sigma;
  rec.construction = "minimizer";
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto res = minimize(params, opts.minimize, branching ? InitKind::Branching : InitKind::Constant);
    rec.energy = energy_grid(res.field, params);
  } catch (const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.energy = EnergyBreakdown{nan, nan, nan, nan, params};
    rec.error = e.what();
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<SweepRecord> rows_for(const SweepOptions& opts, double eps) {
  std::vector<SweepRecord> rows;
  const double tp = std::pow(opts.theta, opts.p);
  for (const auto& c : opts.constructions) {
    if (c == "branching" && eps > tp) continue;
    rows.push_back(evaluate_one(opts, eps, c));
  }
  if (opts.refine_with_minimizer) {
    bool branching_won = false;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : rows)
      if (r.error.empty() && r.energy.total < best) {
        best = r.energy.total;
        branching_won = r.construction == "branching";
      }
    rows.push_back(refine_one(opts, eps, branching_won));
  }
  std::size_t best_idx = rows.size();
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (rows[k].error.empty() && (best_idx == rows.size() || rows[k].energy.total < rows[best_idx].energy.total))
      best_idx = k;
  if (best_idx < rows.size()) rows[best_idx].best = true;
  return rows;
}

}  // namespace

std::vector<SweepRecord> sweep(const SweepOptions& opts) {
  opts.validate();
  const std::size_t n = opts.epsilons.size();
  std::vector<std::vector<SweepRecord>> per(n);
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) per[k] = rows_for(opts, opts.epsilons[k]);
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  std::vector<SweepRecord> out;
  for (auto& rows : per)
    for (auto& r : rows) out.push_back(std::move(r));
  return out;
}

FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("fit: insufficient points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw std::invalid_argument("fit: zero or negative value");
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit: abscissae are all equal");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.points = n;
  for (std::size_t k = 0; k < n; ++k)
    r.residual = std::max(r.residual, std::abs(ly[k] - (r.slope * lx[k] + r.intercept)));
  return r;
}

FitResult fit_exponent(const std::vector<SweepRecord>& records) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (!r.best) continue;
    if (r.epsilon > std::pow(r.theta, r.p) / 16.0) continue;
    if (!(r.energy.total > 0.0)) throw std::invalid_argument("fit: zero or negative energy");
    x.push_back(r.epsilon);
    y.push_back(r.energy.total);
  }
  if (x.size() < 4)
    throw std::invalid_argument("fit: insufficient points (" + std::to_string(x.size()) +
                                " best rows with epsilon <= theta^p/16, need 4)");
  return fit_power_law(x, y);
}

SandwichReport sandwich_check(const std::vector<SweepRecord>& records) {
  SandwichReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  for (const auto& r : records) {
    if (!r.best) continue;
    const double tp = std::pow(r.theta, r.p);
    const double ref = tp * std::min(1.0, std::pow(r.epsilon / tp, r.p / (r.p + 1.0)));
    const double ratio = r.energy.total / ref;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    ++rep.points;
  }
  if (rep.points == 0) {
    rep.min_ratio = rep.max_ratio = rep.band = 0.0;
    rep.passed = true;
    return rep;
  }
  rep.band = rep.max_ratio / rep.min_ratio;
  rep.passed = rep.min_ratio > 0.0 && rep.band <= 100.0 && rep.max_ratio <= 100.0;
  return rep;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << "p,theta,epsilon,sigma,construction,elastic_d1,elastic_d2,interfacial,total,best_flag\n";
  for (const auto& r : records) {
    os << format_double(r.p) << ',' << format_double(r.theta) << ',' << format_double(r.epsilon) << ','
       << format_double(r.sigma) << ',' << r.construction << ',' << format_double(r.energy.elastic_d1) << ','
       << format_double(r.energy.elastic_d2) << ',' << format_double(r.energy.interfacial) << ','
       << format_double(r.energy.total) << ',' << (r.best ? 1 : 0) << '\n';
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("sweep csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "p,theta,epsilon,sigma,construction,elastic_d1,elastic_d2,interfacial,total,best_flag")
    throw std::invalid_argument("sweep csv: unexpected header '" + line + "'");
  std::vector<SweepRecord> out;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 10) throw std::invalid_argument("sweep csv: line " + std::to_string(lineno) + " has " +
                                                    std::to_string(f.size()) + " fields");
    try {
      SweepRecord r;
      r.p = std::stod(f[0]);
      r.theta = std::stod(f[1]);
      r.epsilon = std::stod(f[2]);
      r.sigma = std::stod(f[3]);
      r.construction = f[4];
      r.energy.elastic_d1 = std::stod(f[5]);
      r.energy.elastic_d2 = std::stod(f[6]);
      r.energy.interfacial = std::stod(f[7]);
      r.energy.total = std::stod(f[8]);
      if (f[9] != "0" && f[9] != "1") throw std::invalid_argument("best_flag must be 0 or 1");
      r.best = f[9] == "1";
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::invalid_argument("sweep csv: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace microlab
