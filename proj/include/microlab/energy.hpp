#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "microlab/fields.hpp"
#include "microlab/profile.hpp"

namespace microlab {

enum class EnergyForm { Unrescaled, Rescaled };

std::string to_string(EnergyForm f);
EnergyForm energy_form_from_string(std::string_view name);

/// (p, theta, epsilon, sigma) with epsilon = sigma * theta^p kept in sync.
struct EnergyParams {
  double p = 2.0;
  double theta = 0.25;
  double epsilon = 0.0625;
  double sigma = 1.0;
  EnergyForm form = EnergyForm::Unrescaled;

  static EnergyParams unrescaled(double p, double theta, double epsilon);
  static EnergyParams rescaled(double p, double theta, double sigma);

  /// Throws std::invalid_argument unless p > 1, 0 < theta <= 1/2, epsilon, sigma > 0 and
  /// epsilon = sigma theta^p within 1e-12 relative.
  void validate() const;
  EnergyParams with_form(EnergyForm f) const;
  /// epsilon (unrescaled) or sigma * theta (rescaled).
  double interfacial_weight() const;
  BoundaryCondition required_bc() const;
};

struct EnergyBreakdown {
  double elastic_d1 = 0.0;
  double elastic_d2 = 0.0;
  double interfacial = 0.0;
  double total = 0.0;
  std::optional<EnergyParams> params;  // empty for the limit functional

  static EnergyBreakdown make(double e1, double e2, double inter, std::optional<EnergyParams> params);
};

/// min{|t - a|^p, |t - b|^p}; ties at the midpoint take the first branch.
class DoubleWell {
 public:
  DoubleWell(double a, double b, double p);
  static DoubleWell for_params(const EnergyParams& params);

  double operator()(double t) const;
  /// Mean of W(t0 + s (t1 - t0)) over s in [0, 1], exact.
  double mean_on_segment(double t0, double t1) const;
  double left() const { return a_; }
  double right() const { return b_; }
  double crossover() const { return 0.5 * (a_ + b_); }

 private:
  double antiderivative(double t) const;
  double a_, b_, p_;
};

/// Integral over the cell of g(q(x1, x2)); closed form when q is constant or linear in a
/// single variable, adaptive quadrature otherwise.
double integrate_cell_density(const Cell& c, const Poly2& q, const DoubleWell& g);

double double_well_unrescaled(double t, const EnergyParams& params);
double double_well_rescaled(double t, const EnergyParams& params);

/// Midpoint rule on grid cells with averaged forward differences, plus the weighted
/// discrete second total variation. The field's bc must match the form.
EnergyBreakdown energy_grid(const GridField& f, const EnergyParams& params);

/// Exact energy of a piecewise-polynomial profile: closed forms on affine and separable
/// cells, adaptive quadrature otherwise; the interfacial term sums declared interface
/// jumps and the Hessian norm on smooth cells.
EnergyBreakdown energy_analytic(const AnalyticProfile& prof, const EnergyParams& params);

/// u = x2 + v / theta and back; bc tags DirichletLeftZero <-> DirichletLeftIdentity.
GridField rescale_v_to_u(const GridField& v, double theta);
GridField rescale_u_to_v(const GridField& u, double theta);
AnalyticProfile rescale_v_to_u(const AnalyticProfile& v, double theta);
AnalyticProfile rescale_u_to_v(const AnalyticProfile& u, double theta);

}  // namespace microlab
