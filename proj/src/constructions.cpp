#include "microlab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "microlab/quadrature.hpp"

namespace microlab {

BranchCellSpec BranchCellSpec::symmetric(double ell, double h, double theta) {
  BranchCellSpec s{ell, h, theta, {}};
  const double half = theta * h / 4.0;             // half-width of each child stripe
  const double travel = (h / 4.0 - theta * h / 4.0) / ell;  // centre speed
  const Poly1 c1 = Poly1::linear(h / 4.0, travel);
  const Poly1 c2 = Poly1::linear(3.0 * h / 4.0, -travel);
  s.stripes.push_back({c1 - Poly1::constant(half), c1 + Poly1::constant(half)});
  s.stripes.push_back({c2 - Poly1::constant(half), c2 + Poly1::constant(half)});
  return s;
}

void BranchCellSpec::validate() const {
  if (!(ell > 0.0) || !(h > 0.0)) throw std::invalid_argument("branch cell: l and h must be positive");
  if (!(theta > 0.0 && theta <= 0.5)) throw std::invalid_argument("branch cell: theta must lie in (0, 1/2]");
  if (stripes.empty()) throw std::invalid_argument("branch cell: no stripes");
  const double tol = 1e-12 * h;
  Poly1 total;
  for (std::size_t k = 0; k < stripes.size(); ++k) {
    const Stripe& s = stripes[k];
    if ((s.upper - s.lower).min_on(0.0, ell) < -tol) throw std::invalid_argument("branch cell: inverted stripe");
    if (s.lower.min_on(0.0, ell) < -tol || s.upper.max_on(0.0, ell) > h + tol)
      throw std::invalid_argument("branch cell: stripe leaves the period");
    if (k + 1 < stripes.size() && (stripes[k + 1].lower - s.upper).min_on(0.0, ell) < -tol)
      throw std::invalid_argument("branch cell: crossing interfaces");
    total += s.upper - s.lower;
  }
  for (int k = 0; k <= 8; ++k) {
    const double x = ell * k / 8.0;
    if (std::abs(total(x) - theta * h) > tol)
      throw std::invalid_argument("branch cell: |S(x1)| != theta h at x1 = " + format_double(x));
  }
}

std::vector<Cell> branch_cell_cells(const BranchCellSpec& spec, double dx) {
  spec.validate();
  const double th = spec.theta;
  std::vector<Cell> cells;
  auto emit = [&](const Poly1& lo, const Poly1& hi, Poly2 value) {
    if ((hi - lo).max_on(0.0, spec.ell) <= 1e-12 * spec.h) return;
    Cell c{dx, dx + spec.ell, lo.shifted(dx), hi.shifted(dx), value.shifted(dx, 0.0)};
    cells.push_back(std::move(c));
  };
  Poly1 below;  // |S(x1) cap (0, lower_k)|
  Poly1 floor = Poly1::constant(0.0);
  for (const Stripe& s : spec.stripes) {
    emit(floor, s.lower, Poly2::affine(0.0, 0.0, -th) + Poly2::in_x1(below));
    emit(s.lower, s.upper, Poly2::affine(0.0, 0.0, 1.0 - th) + Poly2::in_x1(below - s.lower));
    below += s.upper - s.lower;
    floor = s.upper;
  }
  emit(floor, Poly1::constant(spec.h), Poly2::affine(0.0, 0.0, -th) + Poly2::in_x1(below));
  return cells;
}

AnalyticProfile branch_cell(const BranchCellSpec& spec) {
  return AnalyticProfile::single_block(Rect{0.0, spec.ell, 0.0, spec.h}, BoundaryCondition::None,
                                       branch_cell_cells(spec));
}

double default_alpha(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("p must be > 1");
  const double lo = std::pow(2.0, -p / (p - 1.0));
  return lo + 0.25 * (0.5 - lo);
}

AnalyticProfile constant_profile() {
  return AnalyticProfile::single_block(Rect{}, BoundaryCondition::DirichletLeftZero,
                                       {Cell::rectangle(0.0, 1.0, 0.0, 1.0, Poly2())});
}

AnalyticProfile identity_profile() {
  return AnalyticProfile::single_block(Rect{}, BoundaryCondition::DirichletLeftIdentity,
                                       {Cell::rectangle(0.0, 1.0, 0.0, 1.0, Poly2::affine(0.0, 0.0, 1.0))});
}

std::pair<AnalyticProfile, BranchingAssemblySpec> branching_profile(const EnergyParams& params,
                                                                    std::optional<double> alpha_opt) {
  params.validate();
  const double p = params.p;
  const double theta = params.theta;
  const double tp = std::pow(theta, p);
  if (params.epsilon > tp * (1.0 + 1e-12))
    throw std::invalid_argument("branching requires epsilon <= theta^p; use the constant profile");
  const double alpha = alpha_opt.value_or(default_alpha(p));
  const double alpha_lo = std::pow(2.0, -p / (p - 1.0));
  if (!(alpha > alpha_lo && alpha < 0.5))
    throw std::invalid_argument("alpha must lie in (2^{-p/(p-1)}, 1/2), got " + format_double(alpha));

  const double n_real = std::pow(tp / params.epsilon, 1.0 / (p + 1.0));
  if (!(n_real <= 1e8)) throw std::overflow_error("branching: base period count exceeds 1e8");
  const std::int64_t N = std::max<std::int64_t>(1, std::llround(n_real));
  const double i_real = std::floor(std::log(theta / static_cast<double>(N)) / std::log(2.0 * alpha));
  if (!(i_real <= 60.0)) throw std::overflow_error("branching: more than 60 generations");
  const int I = std::max(0, static_cast<int>(i_real));
  if (static_cast<double>(N) * std::ldexp(1.0, I) > std::ldexp(1.0, 62))
    throw std::overflow_error("branching: period count overflows");

  std::vector<double> xs(I + 2);
  for (int i = 0; i <= I + 1; ++i) xs[i] = std::pow(alpha, i);

  std::vector<Block> blocks;
  // Interpolation layer on (0, alpha^{I+1}): v = (x1 / lambda) b_I(0, x2).
  {
    const double lambda = xs[I + 1];
    const double hI = 1.0 / std::ldexp(static_cast<double>(N), I);
    const auto spec = BranchCellSpec::symmetric(xs[I] - xs[I + 1], hI, theta);
    const auto local = branch_cell_cells(spec);
    std::vector<double> ys{0.0, hI};
    for (const Stripe& s : spec.stripes) {
      ys.push_back(s.lower(0.0));
      ys.push_back(s.upper(0.0));
    }
    std::sort(ys.begin(), ys.end());
    Block b;
    b.x_lo = 0.0;
    b.x_hi = lambda;
    b.period = hI;
    b.count = N << I;
    for (std::size_t k = 0; k + 1 < ys.size(); ++k) {
      const double ya = ys[k], yb = ys[k + 1];
      if (yb - ya <= 1e-12 * hI) continue;
      const double mid = 0.5 * (ya + yb);
      const auto it = std::find_if(local.begin(), local.end(), [&](const Cell& c) { return c.contains(0.0, mid, 0.0); });
      if (it == local.end()) throw std::logic_error("branching: trace lookup failed");
      const Poly1 g = it->value.at_x1(0.0);  // affine in x2
      b.cells.push_back(
          Cell::rectangle(0.0, lambda, ya, yb, Poly2({{}, {g.coeff(0) / lambda, g.coeff(1) / lambda}})));
    }
    blocks.push_back(std::move(b));
  }
  for (int i = I; i >= 0; --i) {
    const double hi = 1.0 / std::ldexp(static_cast<double>(N), i);
    Block b;
    b.x_lo = xs[i + 1];
    b.x_hi = xs[i];
    b.period = hi;
    b.count = N << i;
    b.cells = branch_cell_cells(BranchCellSpec::symmetric(xs[i] - xs[i + 1], hi, theta), xs[i + 1]);
    for (Cell& c : b.cells) {
      c.x_lo = xs[i + 1];
      c.x_hi = xs[i];
    }
    blocks.push_back(std::move(b));
  }
  AnalyticProfile v(Rect{}, BoundaryCondition::DirichletLeftZero, std::move(blocks));
  BranchingAssemblySpec spec{alpha, N, I, params};
  if (params.form == EnergyForm::Rescaled) return {rescale_v_to_u(v, theta), spec};
  return {std::move(v), spec};
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kTol = 1e-12;

bool sits_on(const Cell& c, const JumpSegment& s, double& lo, double& hi) {
  if (!c.lower.is_constant() || std::abs(c.lower(0.0) - s.y) > kTol) return false;
  lo = std::max(c.x_lo, s.a);
  hi = std::min(c.x_hi, s.b);
  return hi - lo > kTol;
}

std::size_t piece_index(const JumpProfile& h, double x) {
  std::size_t k = 0;
  while (k + 1 < h.pieces.size() && x > h.breaks[k + 1]) ++k;
  return k;
}

}  // namespace

double recovery_rho(const PiecewiseSBV& u) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.segments.size(); ++i) {
    const auto& s = u.segments[i];
    m = std::min({m, s.y, 1.0 - s.y});
    for (std::size_t j = i + 1; j < u.segments.size(); ++j) {
      const auto& t = u.segments[j];
      const double dx = std::max({0.0, t.a - s.b, s.a - t.b});
      m = std::min(m, std::hypot(dx, s.y - t.y));
    }
    for (const Cell& c : u.cells) {
      double lo, hi;
      if (sits_on(c, s, lo, hi)) m = std::min(m, (c.upper - c.lower).min_on(lo, hi));
    }
  }
  return 0.5 * m;
}

AnalyticProfile recovery_sequence(const PiecewiseSBV& u, double theta) {
  const auto rep = validate(u);
  if (!rep.ok()) throw std::invalid_argument("recovery_sequence: invalid limit object: " + rep.summary());
  if (!(theta > 0.0 && theta <= 0.5)) throw std::invalid_argument("recovery_sequence: theta must lie in (0, 1/2]");
  if (u.segments.empty())
    return AnalyticProfile::single_block(Rect{}, BoundaryCondition::DirichletLeftIdentity, u.cells);

  double hmax = 0.0;
  for (const auto& s : u.segments) hmax = std::max(hmax, s.h.sup_norm());
  if (theta * hmax > recovery_rho(u)) return identity_profile();

  const Poly2 ramp_y = Poly2::affine(0.0, 0.0, 1.0 / theta);
  std::vector<Cell> out;
  for (const Cell& c : u.cells) {
    std::vector<double> knots{c.x_lo, c.x_hi};
    bool under = false;
    for (const auto& s : u.segments) {
      double lo, hi;
      if (!sits_on(c, s, lo, hi)) continue;
      under = true;
      knots.push_back(lo);
      knots.push_back(hi);
      for (double b : s.h.breaks)
        if (b > lo && b < hi) knots.push_back(b);
    }
    if (!under) {
      out.push_back(c);
      continue;
    }
    std::sort(knots.begin(), knots.end());
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      const double a = knots[k], b = knots[k + 1];
      if (b - a <= kTol) continue;
      const double mid = 0.5 * (a + b);
      const JumpSegment* seg = nullptr;
      for (const auto& s : u.segments) {
        double lo, hi;
        if (sits_on(c, s, lo, hi) && mid >= lo && mid <= hi) seg = &s;
      }
      if (seg == nullptr || seg->h.pieces[piece_index(seg->h, mid)].max_on(a, b) <= 0.0) {
        out.push_back(Cell{a, b, c.lower, c.upper, c.value});
        continue;
      }
      const Poly1& hp = seg->h.pieces[piece_index(seg->h, mid)];
      const Poly1 top = Poly1::constant(seg->y) + hp * theta;
      // u + (x2 - y)/theta - h(x1)
      Poly2 strip_value = c.value + ramp_y - Poly2::in_x1(hp);
      strip_value += Poly2::affine(-seg->y / theta, 0.0, 0.0);
      out.push_back(Cell{a, b, c.lower, top, std::move(strip_value)});
      out.push_back(Cell{a, b, top, c.upper, c.value});
    }
  }
  return AnalyticProfile::single_block(Rect{}, BoundaryCondition::DirichletLeftIdentity, std::move(out));
}

double recovery_l1_error(const PiecewiseSBV& u, double theta) {
  double hmax = 0.0;
  for (const auto& s : u.segments) hmax = std::max(hmax, s.h.sup_norm());
  if (u.segments.empty()) return 0.0;
  if (theta * hmax > recovery_rho(u)) {
    CompensatedSum acc;
    for (const Cell& c : u.cells)
      acc += integrate_graph_region([&](double x1, double x2) { return std::abs(c.value(x1, x2) - x2); }, c.x_lo,
                                    c.x_hi, [&](double x) { return c.lower(x); }, [&](double x) { return c.upper(x); });
    return acc.value();
  }
  CompensatedSum acc;
  for (const auto& s : u.segments)
    for (std::size_t k = 0; k < s.h.pieces.size(); ++k)
      acc += 0.5 * theta * (s.h.pieces[k] * s.h.pieces[k]).integrate(s.h.breaks[k], s.h.breaks[k + 1]);
  return acc.value();
}

AnalyticProfile example_sequence(double theta, double alpha, double p) {
  if (!(theta > 0.0 && theta <= 0.5)) throw std::invalid_argument("example_sequence: theta must lie in (0, 1/2]");
  if (!(p > 1.0)) throw std::invalid_argument("example_sequence: p must be > 1");
  if (!(alpha > p / (p + 1.0) && alpha < 1.0))
    throw std::invalid_argument("example_sequence: alpha must lie in (p/(p+1), 1)");
  const double s = std::pow(theta, alpha);
  const Poly1 line = Poly1::linear(1.0, -s);
  const double k = 1.0 - 1.0 / theta;
  std::vector<Cell> cells{
      Cell{0.0, 1.0, Poly1::constant(0.0), line, Poly2::affine(0.0, 0.0, 1.0)},
      Cell{0.0, 1.0, line, Poly1::constant(1.0), Poly2::affine(k, -k * s, 1.0 / theta)},
  };
  return AnalyticProfile::single_block(Rect{}, BoundaryCondition::DirichletLeftIdentity, std::move(cells));
}

double l1_norm_d2(const AnalyticProfile& prof) {
  const DoubleWell abs1(0.0, 0.0, 1.0);
  CompensatedSum acc;
  for (const Block& b : prof.blocks())
    for (const Cell& c : b.cells) acc += static_cast<double>(b.count) * integrate_cell_density(c, c.value.d2(), abs1);
  return acc.value();
}

}  // namespace microlab
