#include "microlab/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "microlab/constructions.hpp"
#include "microlab/quadrature.hpp"

namespace microlab {

void MinimizeOptions::validate() const {
  if (nx < 3 || ny < 3) throw std::invalid_argument("minimize: grid must be at least 3x3");
  if (max_iter < 0) throw std::invalid_argument("minimize: max_iter must be >= 0");
  if (deltas.empty()) throw std::invalid_argument("minimize: empty continuation schedule");
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (!(deltas[k] > 0.0)) throw std::invalid_argument("minimize: delta_s must be positive");
    if (k > 0 && !(deltas[k] < deltas[k - 1])) throw std::invalid_argument("minimize: delta_s must decrease");
  }
  if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("minimize: armijo must lie in (0,1)");
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("minimize: shrink must lie in (0,1)");
  if (max_backtracks < 1) throw std::invalid_argument("minimize: max_backtracks must be >= 1");
  if (!(initial_step > 0.0)) throw std::invalid_argument("minimize: initial_step must be positive");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("minimize: rel_tol must be positive");
  if (!(random_amplitude >= 0.0)) throw std::invalid_argument("minimize: random_amplitude must be >= 0");
}

std::string to_string(InitKind k) {
  switch (k) {
    case InitKind::Constant: return "constant";
    case InitKind::Branching: return "branching";
    case InitKind::Random: return "random";
    case InitKind::Given: return "given";
  }
  return "?";
}

InitKind init_kind_from_string(const std::string& name) {
  if (name == "constant") return InitKind::Constant;
  if (name == "branching") return InitKind::Branching;
  if (name == "random") return InitKind::Random;
  if (name == "given") return InitKind::Given;
  throw std::invalid_argument("unknown init kind: " + name);
}

namespace {

double huber(double t, double d) { return std::abs(t) <= d ? 0.5 * t * t / d : std::abs(t) - 0.5 * d; }
double huber_d(double t, double d) { return std::abs(t) <= d ? t / d : (t > 0.0 ? 1.0 : -1.0); }

double pow_abs_d(double t, double p) {
  if (t == 0.0) return 0.0;
  return p * std::pow(std::abs(t), p - 1.0) * (t > 0.0 ? 1.0 : -1.0);
}

}  // namespace

SmoothedEnergy smoothed_energy(const GridField& f, const EnergyParams& params, double delta) {
  params.validate();
  if (!(delta > 0.0)) throw std::invalid_argument("smoothed_energy: delta must be positive");
  if (f.bc() != params.required_bc())
    throw std::invalid_argument("smoothed_energy: field carries " + to_string(f.bc()) + ", expected " +
                                to_string(params.required_bc()));
  const int nx = f.nx(), ny = f.ny();
  if (nx < 3 || ny < 3) throw std::invalid_argument("smoothed_energy: grid too small");
  const DoubleWell W = DoubleWell::for_params(params);
  const double a = W.left(), b = W.right(), p = params.p;
  const double sx = nx - 1.0, sy = ny - 1.0;
  const double hx = f.hx(), hy = f.hy();
  const double A = hx * hy;
  const double w = params.interfacial_weight();
  const double log2 = std::log(2.0);

  GridField g(nx, ny);
  CompensatedSum e1, e2, tv;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double f00 = f(i, j), f10 = f(i + 1, j), f01 = f(i, j + 1), f11 = f(i + 1, j + 1);
      const double g1 = 0.5 * ((f10 - f00) + (f11 - f01)) * sx;
      const double g2 = 0.5 * ((f01 - f00) + (f11 - f10)) * sy;
      e1 += A * std::pow(std::abs(g1), p);
      const double d1 = A * pow_abs_d(g1, p);

      const double x = std::pow(std::abs(g2 - a), p);
      const double y = std::pow(std::abs(g2 - b), p);
      const double m = std::min(x, y);
      const double ex = std::exp(-(x - m) / delta);
      const double ey = std::exp(-(y - m) / delta);
      e2 += A * (m - delta * (std::log(ex + ey) - log2));
      const double d2 = A * (ex * pow_abs_d(g2 - a, p) + ey * pow_abs_d(g2 - b, p)) / (ex + ey);

      g(i, j) += -0.5 * sx * d1 - 0.5 * sy * d2;
      g(i + 1, j) += 0.5 * sx * d1 - 0.5 * sy * d2;
      g(i, j + 1) += -0.5 * sx * d1 + 0.5 * sy * d2;
      g(i + 1, j + 1) += 0.5 * sx * d1 + 0.5 * sy * d2;
    }
  }

  // Huberised second total variation, same stencils and weights as second_total_variation.
  auto wx = [&](int i) { return (i == 0 || i == nx - 1) ? 0.5 * hx : hx; };
  auto wy = [&](int j) { return (j == 0 || j == ny - 1) ? 0.5 * hy : hy; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i + 1 < nx; ++i) {
      const double t = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (hx * hx);
      tv += huber(t, delta) * hx * wy(j);
      const double dd = w * huber_d(t, delta) * wy(j) / hx;
      g(i + 1, j) += dd;
      g(i, j) -= 2.0 * dd;
      g(i - 1, j) += dd;
    }
  }
  for (int j = 1; j + 1 < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double t = (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / (hy * hy);
      tv += huber(t, delta) * hy * wx(i);
      const double dd = w * huber_d(t, delta) * wx(i) / hy;
      g(i, j + 1) += dd;
      g(i, j) -= 2.0 * dd;
      g(i, j - 1) += dd;
    }
  }
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double t = (f(i + 1, j + 1) - f(i + 1, j) - f(i, j + 1) + f(i, j)) / A;
      tv += 2.0 * huber(t, delta) * A;
      const double dd = w * 2.0 * huber_d(t, delta);
      g(i + 1, j + 1) += dd;
      g(i + 1, j) -= dd;
      g(i, j + 1) -= dd;
      g(i, j) += dd;
    }
  }
  if (f.bc() != BoundaryCondition::None)
    for (int j = 0; j < ny; ++j) g(0, j) = 0.0;

  CompensatedSum total;
  total += e1.value();
  total += e2.value();
  total += w * tv.value();
  return SmoothedEnergy{total.value(), std::move(g)};
}

GridField initial_field(const EnergyParams& params, const MinimizeOptions& opts, InitKind init,
                        const std::optional<GridField>& given) {
  params.validate();
  opts.validate();
  const BoundaryCondition bc = params.required_bc();
  const bool rescaled = params.form == EnergyForm::Rescaled;
  switch (init) {
    case InitKind::Constant: {
      return GridField::from_function(
          opts.nx, opts.ny, [&](double, double x2) { return rescaled ? x2 : 0.0; }, bc);
    }
    case InitKind::Branching: {
      const auto [prof, spec] = branching_profile(params);
      return sample_profile(prof, opts.nx, opts.ny, bc);
    }
    case InitKind::Random: {
      std::mt19937_64 rng(opts.seed);
      std::uniform_real_distribution<double> U(-1.0, 1.0);
      // Perturbation of the constant state; amplitude in units of the unrescaled slope theta.
      const double amp = opts.random_amplitude * (rescaled ? 1.0 : params.theta);
      GridField f(opts.nx, opts.ny);
      for (int j = 0; j < opts.ny; ++j)
        for (int i = 0; i < opts.nx; ++i) f(i, j) = (rescaled ? f.x2(j) : 0.0) + (i == 0 ? 0.0 : amp * U(rng));
      f.impose(bc);
      return f;
    }
    case InitKind::Given: {
      if (!given) throw std::invalid_argument("minimize: init=given requires a field");
      if (given->nx() != opts.nx || given->ny() != opts.ny)
        throw std::invalid_argument("minimize: given field does not match the grid size");
      GridField f = *given;
      f.set_bc(bc);  // throws if the Dirichlet column is violated
      return f;
    }
  }
  throw std::logic_error("unreachable");
}

MinimizeResult minimize(const EnergyParams& params, const MinimizeOptions& opts, InitKind init,
                        const std::optional<GridField>& given) {
  GridField u = initial_field(params, opts, init, given);
  const double area = u.hx() * u.hy();

  MinimizeResult res{u, {}, "max_iter", 0.0, 0.0};
  res.initial_exact = energy_grid(u, params).total;
  res.best_exact = res.initial_exact;
  int iter = 0;
  bool any_stall = false;
  bool all_converged = true;

  for (double delta : opts.deltas) {
    auto cur = smoothed_energy(u, params, delta);
    res.trace.push_back({iter, delta, cur.value, energy_grid(u, params).total});
    double step = opts.initial_step;
    bool converged = false;
    for (int it = 0; it < opts.max_iter; ++it) {
      // L2-scaled steepest descent direction.
      double gg = 0.0;
      for (double v : cur.gradient.values()) gg += v * v;
      if (gg == 0.0) {
        converged = true;
        break;
      }
      const double slope = -gg / area;  // directional derivative along d = -g / area
      bool accepted = false;
      GridField trial = u;
      std::optional<SmoothedEnergy> next;
      for (int bt = 0; bt < opts.max_backtracks; ++bt) {
        auto tv = trial.values();
        const auto uv = u.values();
        const auto gv = cur.gradient.values();
        for (std::size_t k = 0; k < tv.size(); ++k) tv[k] = uv[k] - step * gv[k] / area;
        trial.impose(params.required_bc());
        next = smoothed_energy(trial, params, delta);
        if (next->value <= cur.value + opts.armijo * step * slope) {
          accepted = true;
          break;
        }
        step *= opts.shrink;
      }
      if (!accepted) {
        any_stall = true;
        break;
      }
      const double decrease = cur.value - next->value;
      u = std::move(trial);
      cur = std::move(*next);
      ++iter;
      const double exact = energy_grid(u, params).total;
      res.trace.push_back({iter, delta, cur.value, exact});
      if (exact < res.best_exact) {
        res.best_exact = exact;
        res.field = u;
      }
      step = std::min(step * 2.0, 1e6 * opts.initial_step);
      if (decrease <= opts.rel_tol * std::max(std::abs(cur.value), 1e-300)) {
        converged = true;
        break;
      }
    }
    all_converged = all_converged && converged;
  }
  res.status = any_stall ? "stalled" : (all_converged ? "converged" : "max_iter");
  return res;
}

}  // namespace microlab
