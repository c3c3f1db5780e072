#include "microlab/sbv_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "microlab/quadrature.hpp"

namespace microlab {

JumpProfile JumpProfile::single(double a, double b, Poly1 p) { return JumpProfile{{a, b}, {std::move(p)}}; }

double JumpProfile::operator()(double x) const {
  if (pieces.empty()) throw std::logic_error("empty jump profile");
  std::size_t k = 0;
  while (k + 1 < pieces.size() && x > breaks[k + 1]) ++k;
  return pieces[k](x);
}

double JumpProfile::sup_norm() const {
  double m = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k)
    m = std::max({m, std::abs(pieces[k].max_on(breaks[k], breaks[k + 1])),
                  std::abs(pieces[k].min_on(breaks[k], breaks[k + 1]))});
  return m;
}

double JumpProfile::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pieces.size(); ++k) m = std::min(m, pieces[k].min_on(breaks[k], breaks[k + 1]));
  return m;
}

double JumpProfile::positive_measure() const {
  double total = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const double lo = breaks[k];
    const double hi = breaks[k + 1];
    std::vector<double> knots{lo};
    if (!pieces[k].is_constant())
      for (double r : pieces[k].real_roots(lo, hi)) knots.push_back(r);
    knots.push_back(hi);
    std::sort(knots.begin(), knots.end());
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      const double w = knots[i + 1] - knots[i];
      if (w > 0.0 && pieces[k](0.5 * (knots[i] + knots[i + 1])) > 0.0) total += w;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------

std::size_t PiecewiseSBV::locate(double x1, double x2) const {
  bool found = false;
  std::size_t best = 0;
  double ox = 0.0, oy = 0.0;
  const double tol = 1e-12;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    if (!c.contains(x1, x2, tol)) continue;
    const double cx = c.x_lo;
    const double cy = c.lower(c.x_lo);
    if (!found || cx < ox || (cx == ox && cy < oy)) {
      found = true;
      best = i;
      ox = cx;
      oy = cy;
    }
  }
  if (!found) throw std::out_of_range("point outside the limit object");
  return best;
}

double PiecewiseSBV::value(double x1, double x2) const { return cells[locate(x1, x2)].value(x1, x2); }

bool ValidationReport::has(const std::string& kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "valid";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    if (i) os << "; ";
    os << v.kind << " at (" << v.x1 << ", " << v.x2 << "): " << v.message;
  }
  return os.str();
}

namespace {

constexpr double kTol = 1e-12;

double segment_distance(const JumpSegment& s, const JumpSegment& t) {
  const double dx = std::max({0.0, t.a - s.b, s.a - t.b});
  return std::hypot(dx, s.y - t.y);
}

// Jump expected across a horizontal edge at (x, y): h(x) on a segment, else 0.
double expected_jump(const PiecewiseSBV& u, double x, double y) {
  for (const auto& s : u.segments)
    if (std::abs(s.y - y) <= kTol && x >= s.a - kTol && x <= s.b + kTol) return s.h(std::clamp(x, s.a, s.b));
  return 0.0;
}

}  // namespace

ValidationReport validate(const PiecewiseSBV& u) {
  ValidationReport rep;
  auto add = [&](std::string kind, std::string msg, double x1, double x2) {
    rep.violations.push_back(Violation{std::move(kind), std::move(msg), x1, x2});
  };

  if (!(u.p > 1.0)) add("parameters", "p must exceed 1", 0, 0);
  if (!(u.sigma > 0.0)) add("parameters", "sigma must be positive", 0, 0);
  if (!(u.gap_min > 0.0)) add("parameters", "gap_min must be positive", 0, 0);

  // Partition of the unit square.
  CompensatedSum area;
  for (const Cell& c : u.cells) {
    if (!(c.x_hi > c.x_lo) || c.x_lo < -kTol || c.x_hi > 1.0 + kTol) {
      add("partition", "cell x1-range outside [0,1]", c.x_lo, 0);
      continue;
    }
    if ((c.upper - c.lower).min_on(c.x_lo, c.x_hi) < -kTol) add("partition", "cell upper below lower", c.x_lo, 0);
    if (c.lower.min_on(c.x_lo, c.x_hi) < -kTol || c.upper.max_on(c.x_lo, c.x_hi) > 1.0 + kTol)
      add("partition", "cell outside the unit square", c.x_lo, 0);
    area += c.area();
  }
  if (u.cells.empty() || std::abs(area.value() - 1.0) > 1e-10) {
    add("partition", "cell areas sum to " + format_double(area.value()), 0, 0);
    return rep;  // further checks need a partition
  }

  // Segments.
  for (const auto& s : u.segments) {
    if (!(s.y > 0.0 && s.y < 1.0) || !(s.a >= 0.0 && s.a < s.b && s.b <= 1.0)) {
      add("segment", "segment outside (0,1)^2", s.a, s.y);
      continue;
    }
    const auto& h = s.h;
    if (h.pieces.empty() || h.breaks.size() != h.pieces.size() + 1 || std::abs(h.breaks.front() - s.a) > kTol ||
        std::abs(h.breaks.back() - s.b) > kTol) {
      add("segment", "jump profile does not span [a,b]", s.a, s.y);
      continue;
    }
    for (std::size_t k = 0; k + 1 < h.breaks.size(); ++k)
      if (!(h.breaks[k + 1] > h.breaks[k])) add("segment", "jump profile breaks not increasing", h.breaks[k], s.y);
    for (std::size_t k = 1; k < h.pieces.size(); ++k) {
      const double x = h.breaks[k];
      if (std::abs(h.pieces[k - 1](x) - h.pieces[k](x)) > 1e-12) add("jump profile", "jump profile discontinuous", x, s.y);
    }
    if (h.min_value() < -kTol) add("negative jump", "jump profile takes negative values", s.a, s.y);
    if (s.a <= kTol && std::abs(h(s.a)) > kTol)
      add("trace", "nonzero jump at the Dirichlet edge x1 = 0", s.a, s.y);
  }
  if (rep.has("segment")) return rep;
  for (std::size_t i = 0; i < u.segments.size(); ++i) {
    const double dy = std::min(u.segments[i].y, 1.0 - u.segments[i].y);
    if (dy < u.gap_min) add("segment gap", "segment closer than gap_min to the boundary", u.segments[i].a, u.segments[i].y);
    for (std::size_t j = i + 1; j < u.segments.size(); ++j)
      if (segment_distance(u.segments[i], u.segments[j]) < u.gap_min)
        add("segment gap", "segments closer than gap_min", u.segments[j].a, u.segments[j].y);
  }

  // Every segment must lie on cell edges: a cell ending at y below and one starting above.
  for (const auto& s : u.segments) {
    for (int k = 0; k < 9; ++k) {
      const double x = s.a + (s.b - s.a) * (k + 0.5) / 9.0;
      bool below = false, above = false;
      for (const Cell& c : u.cells) {
        if (x < c.x_lo || x > c.x_hi) continue;
        if (std::abs(c.upper(x) - s.y) <= kTol && c.lower(x) < s.y) below = true;
        if (std::abs(c.lower(x) - s.y) <= kTol && c.upper(x) > s.y) above = true;
      }
      if (!below || !above) {
        add("segment off edges", "jump segment does not lie on a cell edge", x, s.y);
        break;
      }
    }
  }

  // Continuity off the jump set, and jump = h on it.
  Block blk;
  blk.x_lo = 0.0;
  blk.x_hi = 1.0;
  blk.y0 = 0.0;
  blk.period = 1.0;
  blk.cells = u.cells;
  const std::vector<Block> blocks{blk};
  for (const SharedEdge& e : find_shared_edges(blocks)) {
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      double x, y;
      if (e.kind == SharedEdge::Kind::Vertical) {
        x = e.x_lo;
        y = e.y_lo + t * (e.y_hi - e.y_lo);
      } else {
        x = e.x_lo + t * (e.x_hi - e.x_lo);
        y = e.curve(x);
      }
      const double va = edge_side_value(blocks, e, false, x, y);
      const double vb = edge_side_value(blocks, e, true, x, y);
      const bool horizontal = e.kind == SharedEdge::Kind::Curve && e.curve.is_constant();
      const double want = horizontal ? expected_jump(u, x, y) : 0.0;
      if (std::abs((vb - va) - want) > 1e-9 * std::max({1.0, std::abs(va), std::abs(vb)})) {
        const bool on_segment = horizontal && std::any_of(u.segments.begin(), u.segments.end(), [&](const auto& s) {
                                  return std::abs(s.y - y) <= kTol && x >= s.a - kTol && x <= s.b + kTol;
                                });
        add(on_segment ? "jump mismatch" : "discontinuity",
            "value jump " + format_double(vb - va) + ", expected " + format_double(want), x, y);
        break;
      }
    }
  }

  // Trace u(0, x2) = x2.
  for (int k = 0; k <= 64; ++k) {
    const double y = k / 64.0;
    const bool on_segment = std::any_of(u.segments.begin(), u.segments.end(),
                                        [&](const auto& s) { return s.a <= kTol && std::abs(s.y - y) <= kTol; });
    if (on_segment) continue;
    double v;
    try {
      v = u.value(0.0, y);
    } catch (const std::out_of_range&) {
      add("partition", "left edge not covered", 0.0, y);
      continue;
    }
    if (std::abs(v - y) > 1e-12 * std::max(1.0, std::abs(y))) {
      add("trace", "u(0, x2) = " + format_double(v) + " != x2", 0.0, y);
      break;
    }
  }
  return rep;
}

double jump_length(const PiecewiseSBV& u) {
  CompensatedSum total;
  for (const auto& s : u.segments) total += s.h.positive_measure();
  return total.value();
}

EnergyBreakdown limit_energy(const PiecewiseSBV& u) {
  const auto rep = validate(u);
  if (!rep.ok()) throw std::invalid_argument("limit_energy: invalid limit object: " + rep.summary());
  const DoubleWell power(0.0, 0.0, u.p);
  CompensatedSum e1, e2;
  for (const Cell& c : u.cells) {
    e1 += integrate_cell_density(c, c.value.d1(), power);
    e2 += integrate_cell_density(c, c.value.d2(), power);
  }
  return EnergyBreakdown::make(e1.value(), e2.value(), 2.0 * u.sigma * jump_length(u), std::nullopt);
}

}  // namespace microlab
