#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace microlab {

/// Raised when adaptive quadrature does not reach its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  unsigned max_depth = 15;
};

/// Adaptive Gauss-Kronrod on [a, b], split at the given interior breakpoints.
/// Throws QuadratureError when the error estimate exceeds the tolerance.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadratureOptions& opts = {}, std::span<const double> breakpoints = {});

/// Integral of f over {a < x1 < b, lower(x1) < x2 < upper(x1)}.
double integrate_graph_region(const std::function<double(double, double)>& f, double a, double b,
                              const std::function<double(double)>& lower,
                              const std::function<double(double)>& upper,
                              const QuadratureOptions& opts = {},
                              std::span<const double> x1_breakpoints = {});

}  // namespace microlab
