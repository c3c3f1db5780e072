#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "microlab/polynomial.hpp"
#include "microlab/quadrature.hpp"

using namespace microlab;

TEST_CASE("poly1 evaluation, calculus and roots") {
  const Poly1 p({1.0, -3.0, 2.0});  // (1 - x)(1 - 2x)
  CHECK(p(0.5) == doctest::Approx(0.0));
  CHECK(p.degree() == 2);
  CHECK(p.derivative()(1.0) == doctest::Approx(1.0));
  CHECK(p.integrate(0.0, 1.0) == doctest::Approx(1.0 - 1.5 + 2.0 / 3.0));
  const auto r = p.real_roots(0.0, 2.0);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(0.5));
  CHECK(r[1] == doctest::Approx(1.0));
  CHECK(p.min_on(0.0, 1.0) == doctest::Approx(-0.125));
  CHECK(p.shifted(1.0)(1.5) == doctest::Approx(p(0.5)));
  CHECK((p * Poly1::linear(0.0, 1.0))(2.0) == doctest::Approx(2.0 * p(2.0)));
  CHECK(Poly1({0.0, 0.0}).is_zero());
}

TEST_CASE("poly2 derivatives, curves and shifts") {
  const Poly2 q({{1.0, 2.0}, {3.0, 4.0}});  // 1 + 2 x2 + 3 x1 + 4 x1 x2
  CHECK(q(1.0, 1.0) == doctest::Approx(10.0));
  const auto g = q.gradient(0.5, 0.25);
  CHECK(g[0] == doctest::Approx(3.0 + 4.0 * 0.25));
  CHECK(g[1] == doctest::Approx(2.0 + 4.0 * 0.5));
  const auto h = q.hessian(0.3, 0.7);
  CHECK(h[0] == 0.0);
  CHECK(h[1] == doctest::Approx(4.0));
  CHECK(q.is_bilinear());
  CHECK_FALSE(q.is_affine());
  CHECK(q.total_degree() == 2);
  const Poly1 c = q.on_curve(Poly1::linear(0.0, 1.0));
  CHECK(c(0.5) == doctest::Approx(q(0.5, 0.5)));
  CHECK(q.shifted(0.1, 0.2)(0.6, 0.9) == doctest::Approx(q(0.5, 0.7)));
  CHECK(Poly2::affine(1.0, 2.0, 3.0)(1.0, 1.0) == doctest::Approx(6.0));
}

TEST_CASE("adaptive quadrature and compensated summation") {
  CHECK(integrate_1d([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  const double tri = integrate_graph_region([](double, double) { return 1.0; }, 0.0, 1.0,
                                            [](double) { return 0.0; }, [](double x) { return x; });
  CHECK(tri == doctest::Approx(0.5).epsilon(1e-12));
  CompensatedSum s;
  s += 1.0;
  for (int k = 0; k < 1000; ++k) s += 1e-16;
  CHECK(s.value() - 1.0 == doctest::Approx(1e-13).epsilon(1e-6));
}
