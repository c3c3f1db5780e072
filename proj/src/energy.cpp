#include "microlab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "microlab/quadrature.hpp"

namespace microlab {

std::string to_string(EnergyForm f) { return f == EnergyForm::Unrescaled ? "Unrescaled" : "Rescaled"; }

EnergyForm energy_form_from_string(std::string_view name) {
  if (name == "Unrescaled" || name == "unrescaled") return EnergyForm::Unrescaled;
  if (name == "Rescaled" || name == "rescaled") return EnergyForm::Rescaled;
  throw std::invalid_argument("unknown energy form: " + std::string(name));
}

EnergyParams EnergyParams::unrescaled(double p, double theta, double epsilon) {
  EnergyParams e{p, theta, epsilon, epsilon / std::pow(theta, p), EnergyForm::Unrescaled};
  e.validate();
  return e;
}

EnergyParams EnergyParams::rescaled(double p, double theta, double sigma) {
  EnergyParams e{p, theta, sigma * std::pow(theta, p), sigma, EnergyForm::Rescaled};
  e.validate();
  return e;
}

void EnergyParams::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must be > 1");
  if (!(theta > 0.0 && theta <= 0.5)) throw std::invalid_argument("theta must lie in (0, 1/2]");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be > 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be > 0");
  const double expect = sigma * std::pow(theta, p);
  if (std::abs(epsilon - expect) > 1e-12 * std::max(epsilon, expect))
    throw std::invalid_argument("epsilon and sigma * theta^p disagree");
}

EnergyParams EnergyParams::with_form(EnergyForm f) const {
  EnergyParams e = *this;
  e.form = f;
  return e;
}

double EnergyParams::interfacial_weight() const {
  return form == EnergyForm::Unrescaled ? epsilon : sigma * theta;
}

BoundaryCondition EnergyParams::required_bc() const {
  return form == EnergyForm::Unrescaled ? BoundaryCondition::DirichletLeftZero
                                        : BoundaryCondition::DirichletLeftIdentity;
}

EnergyBreakdown EnergyBreakdown::make(double e1, double e2, double inter, std::optional<EnergyParams> params) {
  CompensatedSum s;
  s += e1;
  s += e2;
  s += inter;
  return EnergyBreakdown{e1, e2, inter, s.value(), params};
}

// ---------------------------------------------------------------------------

DoubleWell::DoubleWell(double a, double b, double p) : a_(a), b_(b), p_(p) {
  if (a > b) throw std::invalid_argument("double well: wells out of order");
}

DoubleWell DoubleWell::for_params(const EnergyParams& params) {
  if (params.form == EnergyForm::Unrescaled) return DoubleWell(-params.theta, 1.0 - params.theta, params.p);
  return DoubleWell(0.0, 1.0 / params.theta, params.p);
}

double DoubleWell::operator()(double t) const {
  if (t <= crossover()) return std::pow(std::abs(t - a_), p_);
  return std::pow(std::abs(t - b_), p_);
}

double DoubleWell::antiderivative(double t) const {
  auto F = [this](double s) { return std::copysign(std::pow(std::abs(s), p_ + 1.0), s) / (p_ + 1.0); };
  const double m = crossover();
  if (t <= m) return F(t - a_);
  return F(m - a_) + F(t - b_) - F(m - b_);
}

double DoubleWell::mean_on_segment(double t0, double t1) const {
  const double d = t1 - t0;
  if (d == 0.0) return (*this)(t0);
  const double scale = std::max({1.0, std::abs(t0), std::abs(t1)});
  if (std::abs(d) > 1e-4 * scale) return (antiderivative(t1) - antiderivative(t0)) / d;
  // Short segment: the difference of antiderivatives would cancel; integrate piecewise.
  const double lo = std::min(t0, t1);
  const double hi = std::max(t0, t1);
  std::vector<double> knots{lo};
  for (double k : {a_, crossover(), b_})
    if (k > lo && k < hi) knots.push_back(k);
  knots.push_back(hi);
  std::sort(knots.begin(), knots.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    acc += boost::math::quadrature::gauss<double, 7>::integrate([this](double t) { return (*this)(t); },
                                                                 knots[i], knots[i + 1]);
  return acc / (hi - lo);
}

double double_well_unrescaled(double t, const EnergyParams& params) {
  return DoubleWell::for_params(params.with_form(EnergyForm::Unrescaled))(t);
}

double double_well_rescaled(double t, const EnergyParams& params) {
  return DoubleWell::for_params(params.with_form(EnergyForm::Rescaled))(t);
}

// ---------------------------------------------------------------------------

EnergyBreakdown energy_grid(const GridField& f, const EnergyParams& params) {
  params.validate();
  if (f.bc() != params.required_bc())
    throw std::invalid_argument("energy_grid: field carries " + to_string(f.bc()) + ", " + to_string(params.form) +
                                " form requires " + to_string(params.required_bc()));
  if (f.nx() < 3 || f.ny() < 3) throw std::invalid_argument("energy_grid: grid too small");
  const DoubleWell W = DoubleWell::for_params(params);
  const double sx = f.nx() - 1.0;
  const double sy = f.ny() - 1.0;
  const double area = f.hx() * f.hy();
  CompensatedSum e1, e2;
  for (int j = 0; j + 1 < f.ny(); ++j) {
    for (int i = 0; i + 1 < f.nx(); ++i) {
      const double g1 = 0.5 * ((f(i + 1, j) - f(i, j)) + (f(i + 1, j + 1) - f(i, j + 1))) * sx;
      const double g2 = 0.5 * ((f(i, j + 1) - f(i, j)) + (f(i + 1, j + 1) - f(i + 1, j))) * sy;
      e1 += std::pow(std::abs(g1), params.p) * area;
      e2 += W(g2) * area;
    }
  }
  return EnergyBreakdown::make(e1.value(), e2.value(), params.interfacial_weight() * second_total_variation(f),
                               params);
}

// ---------------------------------------------------------------------------

namespace {
const QuadratureOptions kCellQuad{1e-10, 1e-15, 40};
}  // namespace

double integrate_cell_density(const Cell& c, const Poly2& q, const DoubleWell& g) {
  const double area = c.area();
  if (q.degree_x1() <= 0 && q.degree_x2() <= 0) return g(q.coeff(0, 0)) * area;
  // Depends on x2 only, linearly, on a rectangle.
  if (q.degree_x1() <= 0 && q.degree_x2() == 1 && c.is_rectangle()) {
    const double y0 = c.lower(0.0);
    const double y1 = c.upper(0.0);
    const double a = q.coeff(0, 0);
    const double b = q.coeff(0, 1);
    return g.mean_on_segment(a + b * y0, a + b * y1) * area;
  }
  // Depends on x1 only, linearly.
  if (q.degree_x2() <= 0 && q.degree_x1() == 1) {
    const double a = q.coeff(0, 0);
    const double b = q.coeff(1, 0);
    if (c.is_rectangle()) return g.mean_on_segment(a + b * c.x_lo, a + b * c.x_hi) * area;
    const Poly1 height = c.upper - c.lower;
    std::vector<double> knots;
    for (double k : {g.left(), g.crossover(), g.right()}) {
      const double x = (k - a) / b;
      if (x > c.x_lo && x < c.x_hi) knots.push_back(x);
    }
    std::sort(knots.begin(), knots.end());
    return integrate_1d([&](double x) { return g(a + b * x) * height(x); }, c.x_lo, c.x_hi, kCellQuad, knots);
  }
  return integrate_graph_region([&](double x1, double x2) { return g(q(x1, x2)); }, c.x_lo, c.x_hi,
                                [&](double x) { return c.lower(x); }, [&](double x) { return c.upper(x); },
                                kCellQuad);
}

namespace {

double hessian_norm_integral(const Cell& c) {
  const Poly2 h11 = c.value.d1().d1();
  const Poly2 h12 = c.value.d1().d2();
  const Poly2 h22 = c.value.d2().d2();
  auto is_const = [](const Poly2& q) { return q.degree_x1() <= 0 && q.degree_x2() <= 0; };
  if (is_const(h11) && is_const(h12) && is_const(h22)) {
    const double a = h11.coeff(0, 0), b = h12.coeff(0, 0), d = h22.coeff(0, 0);
    return std::sqrt(a * a + 2.0 * b * b + d * d) * c.area();
  }
  return integrate_graph_region(
      [&](double x1, double x2) {
        const double a = h11(x1, x2), b = h12(x1, x2), d = h22(x1, x2);
        return std::sqrt(a * a + 2.0 * b * b + d * d);
      },
      c.x_lo, c.x_hi, [&](double x) { return c.lower(x); }, [&](double x) { return c.upper(x); }, kCellQuad);
}

}  // namespace

EnergyBreakdown energy_analytic(const AnalyticProfile& prof, const EnergyParams& params) {
  params.validate();
  if (prof.bc() != BoundaryCondition::None && prof.bc() != params.required_bc())
    throw std::invalid_argument("energy_analytic: profile carries " + to_string(prof.bc()) + ", " +
                                to_string(params.form) + " form requires " + to_string(params.required_bc()));
  const DoubleWell W = DoubleWell::for_params(params);
  const DoubleWell power(0.0, 0.0, params.p);
  CompensatedSum e1, e2, hess;
  for (const Block& b : prof.blocks()) {
    const double n = static_cast<double>(b.count);
    for (const Cell& c : b.cells) {
      e1 += n * integrate_cell_density(c, c.value.d1(), power);
      e2 += n * integrate_cell_density(c, c.value.d2(), W);
      hess += n * hessian_norm_integral(c);
    }
  }
  for (const Interface& itf : prof.interfaces()) hess += itf.jump_integral * itf.edge.multiplicity;
  return EnergyBreakdown::make(e1.value(), e2.value(), params.interfacial_weight() * hess.value(), params);
}

// ---------------------------------------------------------------------------

namespace {

BoundaryCondition swap_bc(BoundaryCondition bc, bool to_u) {
  using BC = BoundaryCondition;
  if (to_u) return bc == BC::DirichletLeftZero ? BC::DirichletLeftIdentity : BC::None;
  return bc == BC::DirichletLeftIdentity ? BC::DirichletLeftZero : BC::None;
}

void check_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("rescaling requires theta > 0");
}

}  // namespace

GridField rescale_v_to_u(const GridField& v, double theta) {
  check_theta(theta);
  GridField u(v.nx(), v.ny());
  for (int j = 0; j < v.ny(); ++j)
    for (int i = 0; i < v.nx(); ++i) u(i, j) = v.x2(j) + v(i, j) / theta;
  const BoundaryCondition bc = swap_bc(v.bc(), true);
  if (bc != BoundaryCondition::None) u.impose(bc);
  return u;
}

GridField rescale_u_to_v(const GridField& u, double theta) {
  check_theta(theta);
  GridField v(u.nx(), u.ny());
  for (int j = 0; j < u.ny(); ++j)
    for (int i = 0; i < u.nx(); ++i) v(i, j) = theta * (u(i, j) - u.x2(j));
  const BoundaryCondition bc = swap_bc(u.bc(), false);
  if (bc != BoundaryCondition::None) v.impose(bc);
  return v;
}

AnalyticProfile rescale_v_to_u(const AnalyticProfile& v, double theta) {
  check_theta(theta);
  std::vector<Block> blocks = v.blocks();
  const Poly2 x2 = Poly2::affine(0.0, 0.0, 1.0);
  for (Block& b : blocks) {
    b.drift = b.period + b.drift / theta;
    for (Cell& c : b.cells) c.value = x2 + c.value * (1.0 / theta);
  }
  return AnalyticProfile(v.domain(), swap_bc(v.bc(), true), std::move(blocks));
}

AnalyticProfile rescale_u_to_v(const AnalyticProfile& u, double theta) {
  check_theta(theta);
  std::vector<Block> blocks = u.blocks();
  const Poly2 x2 = Poly2::affine(0.0, 0.0, 1.0);
  for (Block& b : blocks) {
    b.drift = theta * (b.drift - b.period);
    for (Cell& c : b.cells) c.value = (c.value - x2) * theta;
  }
  return AnalyticProfile(u.domain(), swap_bc(u.bc(), false), std::move(blocks));
}

}  // namespace microlab
