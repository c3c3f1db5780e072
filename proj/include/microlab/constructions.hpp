#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "microlab/energy.hpp"
#include "microlab/profile.hpp"
#include "microlab/sbv_limit.hpp"

namespace microlab {

/// Minority-variant stripe {lower(x1) < x2 < upper(x1)} inside one period of a branch cell,
/// in local coordinates x1 in [0, l].
struct Stripe {
  Poly1 lower;
  Poly1 upper;
};

struct BranchCellSpec {
  double ell = 1.0;
  double h = 1.0;
  double theta = 0.25;
  std::vector<Stripe> stripes;  // bottom to top, non-crossing

  /// Two children of width theta*h/2 whose centres move affinely from h/4, 3h/4 (x1 = 0)
  /// to h/2 -+ theta*h/4 (x1 = l), where they merge into one stripe.
  static BranchCellSpec symmetric(double ell, double h, double theta);
  /// Throws std::invalid_argument on crossing stripes or a wrong volume fraction.
  void validate() const;
};

/// Cells of b(x1, x2) = -theta x2 + |S(x1) cap (0, x2)| on [0, l] x [0, h], shifted by
/// (dx, 0). The value is h-periodic in x2 with zero drift.
std::vector<Cell> branch_cell_cells(const BranchCellSpec& spec, double dx = 0.0);

/// The branch cell on (0, l) x (0, h) with bc None.
AnalyticProfile branch_cell(const BranchCellSpec& spec);

struct BranchingAssemblySpec {
  double alpha = 0.3125;
  std::int64_t N = 1;
  int I = 0;
  EnergyParams params;
};

/// Admissible refinement ratios are (2^{-p/(p-1)}, 1/2); the default sits a quarter of the
/// way into the interval.
double default_alpha(double p);

/// Self-similar branching construction on (0,1)^2 with a linear interpolation layer on
/// (0, alpha^{I+1}). Requires epsilon <= theta^p. Rescaled params yield the u-profile.
std::pair<AnalyticProfile, BranchingAssemblySpec> branching_profile(const EnergyParams& params,
                                                                    std::optional<double> alpha = std::nullopt);

/// v = 0 (bc DirichletLeftZero).
AnalyticProfile constant_profile();
/// u = x2 (bc DirichletLeftIdentity).
AnalyticProfile identity_profile();

/// Strip height guard: half the smallest of pairwise segment distances, segment
/// distances to {x2 = 0, 1} and clearances of the cells directly above each segment.
double recovery_rho(const PiecewiseSBV& u);

/// Replaces the jump across each segment by a steep ramp of slope 1/theta in the strip
/// {y < x2 < y + theta h(x1)} above it. Falls back to u = x2 when theta*|h|_inf > rho.
AnalyticProfile recovery_sequence(const PiecewiseSBV& u, double theta);

/// Closed-form L1 distance between u and its recovery profile: sum_k int theta h_k^2 / 2.
double recovery_l1_error(const PiecewiseSBV& u, double theta);

/// u = x2/theta + (1 - 1/theta)(1 - theta^alpha x1) above x2 = 1 - theta^alpha x1, x2 below.
/// Requires alpha in (p/(p+1), 1).
AnalyticProfile example_sequence(double theta, double alpha, double p);

/// Exact integral of |d2 u| over the profile (affine cells only, else quadrature).
double l1_norm_d2(const AnalyticProfile& prof);

}  // namespace microlab
