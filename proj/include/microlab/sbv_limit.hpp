#pragma once

#include <string>
#include <vector>

#include "microlab/energy.hpp"
#include "microlab/profile.hpp"

namespace microlab {

/// Continuous piecewise polynomial on [breaks.front(), breaks.back()].
struct JumpProfile {
  std::vector<double> breaks;
  std::vector<Poly1> pieces;

  static JumpProfile single(double a, double b, Poly1 p);
  double operator()(double x) const;
  double sup_norm() const;
  double min_value() const;
  /// Lebesgue measure of {h > 0}, from the polynomial roots.
  double positive_measure() const;
};

/// Horizontal jump segment {a < x1 < b, x2 = y} with jump [u](x1, y) = h(x1).
struct JumpSegment {
  double y = 0.5;
  double a = 0.0;
  double b = 1.0;
  JumpProfile h;
};

/// Limit object: graph cells on the unit square with polynomial values, discontinuous
/// only across the declared horizontal jump segments.
struct PiecewiseSBV {
  std::vector<Cell> cells;
  std::vector<JumpSegment> segments;
  double p = 2.0;
  double sigma = 1.0;
  double gap_min = 1e-3;

  /// Value at a point; boundary points resolve to the cell with smallest origin.
  double value(double x1, double x2) const;
  std::size_t locate(double x1, double x2) const;
};

struct Violation {
  std::string kind;  // "partition", "trace", "negative jump", "jump mismatch", "discontinuity", ...
  std::string message;
  double x1 = 0.0;
  double x2 = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& kind) const;
  std::string summary() const;
};

ValidationReport validate(const PiecewiseSBV& u);

/// Sum over segments of |{h > 0}|.
double jump_length(const PiecewiseSBV& u);

/// Limit energy: elastic_d1 = int |d1 u|^p, elastic_d2 = int |d2 u|^p,
/// interfacial = 2 sigma H^1(J_u). `params` is left empty. Throws on invalid input.
EnergyBreakdown limit_energy(const PiecewiseSBV& u);

}  // namespace microlab
