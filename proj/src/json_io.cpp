#include "microlab/json_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace microlab {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, val] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

namespace {

double num(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw std::invalid_argument(where + ": missing '" + key + "'");
  if (!j.at(key).is_number()) throw std::invalid_argument(where + ": '" + key + "' must be a number");
  return j.at(key).get<double>();
}

Poly1 poly1_from(const json& j, const std::string& where) {
  if (!j.is_array()) throw std::invalid_argument(where + ": polynomial must be a coefficient array");
  return Poly1(j.get<std::vector<double>>());
}

Poly2 poly2_from(const json& j, const std::string& where) {
  if (!j.is_array()) throw std::invalid_argument(where + ": value must be a nested coefficient array");
  return Poly2(j.get<std::vector<std::vector<double>>>());
}

json rect_json(const Rect& r) { return {{"x_lo", r.x_lo}, {"x_hi", r.x_hi}, {"y_lo", r.y_lo}, {"y_hi", r.y_hi}}; }

}  // namespace

json to_json(const EnergyParams& p) {
  return {{"p", p.p}, {"theta", p.theta}, {"epsilon", p.epsilon}, {"sigma", p.sigma}, {"form", to_string(p.form)}};
}

EnergyParams params_from_json(const json& j) {
  check_keys(j, {"p", "theta", "epsilon", "sigma", "form"}, "params");
  const double p = num(j, "p", "params"), theta = num(j, "theta", "params");
  const EnergyForm form = j.contains("form") ? energy_form_from_string(j.at("form").get<std::string>())
                                             : EnergyForm::Unrescaled;
  EnergyParams out;
  if (j.contains("epsilon") && j.contains("sigma")) {
    out = EnergyParams::unrescaled(p, theta, num(j, "epsilon", "params"));
    out.sigma = num(j, "sigma", "params");
  } else if (j.contains("epsilon")) {
    out = EnergyParams::unrescaled(p, theta, num(j, "epsilon", "params"));
  } else if (j.contains("sigma")) {
    out = EnergyParams::rescaled(p, theta, num(j, "sigma", "params"));
  } else {
    throw std::invalid_argument("params: need epsilon or sigma");
  }
  out.form = form;
  out.validate();
  return out;
}

json to_json(const EnergyBreakdown& e) {
  return {{"elastic_d1", e.elastic_d1},
          {"elastic_d2", e.elastic_d2},
          {"interfacial", e.interfacial},
          {"total", e.total},
          {"params", e.params ? to_json(*e.params) : json(nullptr)}};
}

json to_json(const Cell& c) {
  return {{"x_lo", c.x_lo},
          {"x_hi", c.x_hi},
          {"lower", c.lower.coeffs()},
          {"upper", c.upper.coeffs()},
          {"value", c.value.coeffs()}};
}

Cell cell_from_json(const json& j) {
  check_keys(j, {"x_lo", "x_hi", "lower", "upper", "value", "y_lo", "y_hi"}, "cell");
  Cell c;
  c.x_lo = num(j, "x_lo", "cell");
  c.x_hi = num(j, "x_hi", "cell");
  // Rectangles may give y_lo / y_hi instead of boundary polynomials.
  if (j.contains("lower")) c.lower = poly1_from(j.at("lower"), "cell.lower");
  else c.lower = Poly1::constant(num(j, "y_lo", "cell"));
  if (j.contains("upper")) c.upper = poly1_from(j.at("upper"), "cell.upper");
  else c.upper = Poly1::constant(num(j, "y_hi", "cell"));
  if (!j.contains("value")) throw std::invalid_argument("cell: missing 'value'");
  c.value = poly2_from(j.at("value"), "cell.value");
  return c;
}

json to_json(const AnalyticProfile& prof) {
  json blocks = json::array();
  for (const auto& b : prof.blocks()) {
    json cells = json::array();
    for (const auto& c : b.cells) cells.push_back(to_json(c));
    blocks.push_back({{"x_lo", b.x_lo},
                      {"x_hi", b.x_hi},
                      {"y0", b.y0},
                      {"period", b.period},
                      {"count", b.count},
                      {"drift", b.drift},
                      {"cells", cells}});
  }
  json ifaces = json::array();
  for (const auto& f : prof.interfaces()) {
    const auto& e = f.edge;
    json je{{"kind", e.kind == SharedEdge::Kind::Curve ? "curve" : "vertical"},
            {"block_a", e.block_a},
            {"cell_a", e.cell_a},
            {"block_b", e.block_b},
            {"cell_b", e.cell_b},
            {"x_lo", e.x_lo},
            {"x_hi", e.x_hi},
            {"multiplicity", e.multiplicity},
            {"length", e.length},
            {"grad_a", f.grad_a},
            {"grad_b", f.grad_b},
            {"jump_integral", f.jump_integral}};
    if (e.kind == SharedEdge::Kind::Curve) {
      je["curve"] = e.curve.coeffs();
    } else {
      je["y_lo"] = e.y_lo;
      je["y_hi"] = e.y_hi;
    }
    ifaces.push_back(std::move(je));
  }
  return {{"domain", rect_json(prof.domain())},
          {"bc", to_string(prof.bc())},
          {"blocks", blocks},
          {"interfaces", ifaces}};
}

AnalyticProfile profile_from_json(const json& j) {
  check_keys(j, {"domain", "bc", "blocks", "interfaces"}, "profile");
  Rect dom;
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    check_keys(d, {"x_lo", "x_hi", "y_lo", "y_hi"}, "profile.domain");
    dom = Rect{num(d, "x_lo", "domain"), num(d, "x_hi", "domain"), num(d, "y_lo", "domain"),
               num(d, "y_hi", "domain")};
  }
  const BoundaryCondition bc =
      j.contains("bc") ? boundary_condition_from_string(j.at("bc").get<std::string>()) : BoundaryCondition::None;
  if (!j.contains("blocks") || !j.at("blocks").is_array()) throw std::invalid_argument("profile: missing 'blocks'");
  std::vector<Block> blocks;
  for (const auto& jb : j.at("blocks")) {
    check_keys(jb, {"x_lo", "x_hi", "y0", "period", "count", "drift", "cells"}, "block");
    Block b;
    b.x_lo = num(jb, "x_lo", "block");
    b.x_hi = num(jb, "x_hi", "block");
    b.y0 = jb.value("y0", dom.y_lo);
    b.period = num(jb, "period", "block");
    b.count = jb.value("count", std::int64_t{1});
    b.drift = jb.value("drift", 0.0);
    if (!jb.contains("cells") || !jb.at("cells").is_array()) throw std::invalid_argument("block: missing 'cells'");
    for (const auto& jc : jb.at("cells")) b.cells.push_back(cell_from_json(jc));
    blocks.push_back(std::move(b));
  }
  return AnalyticProfile(dom, bc, std::move(blocks));
}

json to_json(const PiecewiseSBV& u) {
  json cells = json::array();
  for (const auto& c : u.cells) cells.push_back(to_json(c));
  json segs = json::array();
  for (const auto& s : u.segments) {
    json pieces = json::array();
    for (const auto& p : s.h.pieces) pieces.push_back(p.coeffs());
    segs.push_back({{"y", s.y}, {"a", s.a}, {"b", s.b}, {"h", {{"breaks", s.h.breaks}, {"pieces", pieces}}}});
  }
  return {{"p", u.p}, {"sigma", u.sigma}, {"gap_min", u.gap_min}, {"cells", cells}, {"segments", segs}};
}

PiecewiseSBV sbv_from_json(const json& j) {
  check_keys(j, {"p", "sigma", "gap_min", "cells", "segments"}, "sbv");
  PiecewiseSBV u;
  u.p = j.value("p", 2.0);
  u.sigma = j.value("sigma", 1.0);
  u.gap_min = j.value("gap_min", 1e-3);
  if (!j.contains("cells") || !j.at("cells").is_array()) throw std::invalid_argument("sbv: missing 'cells'");
  for (const auto& jc : j.at("cells")) u.cells.push_back(cell_from_json(jc));
  if (j.contains("segments")) {
    for (const auto& js : j.at("segments")) {
      check_keys(js, {"y", "a", "b", "h"}, "segment");
      JumpSegment s;
      s.y = num(js, "y", "segment");
      s.a = num(js, "a", "segment");
      s.b = num(js, "b", "segment");
      if (!js.contains("h")) throw std::invalid_argument("segment: missing 'h'");
      const auto& jh = js.at("h");
      if (jh.is_array()) {
        s.h = JumpProfile::single(s.a, s.b, poly1_from(jh, "segment.h"));
      } else {
        check_keys(jh, {"breaks", "pieces"}, "segment.h");
        s.h.breaks = jh.at("breaks").get<std::vector<double>>();
        for (const auto& jp : jh.at("pieces")) s.h.pieces.push_back(poly1_from(jp, "segment.h.pieces"));
      }
      u.segments.push_back(std::move(s));
    }
  }
  return u;
}

json to_json(const ValidationReport& r) {
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"kind", x.kind}, {"message", x.message}, {"x1", x.x1}, {"x2", x.x2}});
  return {{"ok", r.ok()}, {"violations", v}};
}

json to_json(const SquareCover& cover, const CoverReport& report) {
  json fams = json::array();
  for (const auto& fam : cover.families()) {
    json jf = json::array();
    for (const auto& q : fam) jf.push_back({{"cx", q.cx}, {"cy", q.cy}, {"l", q.l}});
    fams.push_back(std::move(jf));
  }
  return {{"families", fams},
          {"constants", {{"c", report.c}, {"N", report.N}, {"a", report.a}, {"b", report.b}}},
          {"checks",
           {{"passed", report.passed},
            {"containment", report.containment_ok},
            {"side", report.side_ok},
            {"disjoint", report.disjoint_ok},
            {"comparable", report.comparable_ok},
            {"coverage", report.coverage_ok},
            {"squares", report.squares},
            {"nonempty_families", report.nonempty_families},
            {"samples", report.samples},
            {"uncovered", report.uncovered},
            {"failures", report.failures}}},
          {"delta", cover.delta},
          {"min_side", cover.min_side}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace microlab
