#include "microlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace microlab {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadratureOptions& opts, std::span<const double> breakpoints) {
  if (!(b > a)) return 0.0;
  std::vector<double> knots{a};
  for (double x : breakpoints)
    if (x > a && x < b) knots.push_back(x);
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());

  CompensatedSum total;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double lo = knots[k];
    const double hi = knots[k + 1];
    if (!(hi > lo)) continue;
    double err = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, lo, hi, opts.max_depth, opts.rel_tol, &err, &l1);
    if (!std::isfinite(value)) throw QuadratureError("non-finite integrand on [" + std::to_string(lo) +
                                                     ", " + std::to_string(hi) + "]");
    if (err > std::max(opts.rel_tol * l1, opts.abs_tol * (hi - lo)) * 10.0) {
      throw QuadratureError("adaptive quadrature did not converge on [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "], error estimate " + std::to_string(err));
    }
    total += value;
  }
  return total.value();
}

double integrate_graph_region(const std::function<double(double, double)>& f, double a, double b,
                              const std::function<double(double)>& lower,
                              const std::function<double(double)>& upper,
                              const QuadratureOptions& opts, std::span<const double> x1_breakpoints) {
  QuadratureOptions inner = opts;
  inner.rel_tol = opts.rel_tol * 0.1;
  auto column = [&](double x1) {
    const double lo = lower(x1);
    const double hi = upper(x1);
    if (!(hi > lo)) return 0.0;
    return integrate_1d([&](double x2) { return f(x1, x2); }, lo, hi, inner);
  };
  return integrate_1d(column, a, b, opts, x1_breakpoints);
}

}  // namespace microlab
