#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "microlab/constructions.hpp"
#include "microlab/energy.hpp"

using namespace microlab;

namespace {
// Midpoint-rule oracle for the mean of W over a linear argument.
double mean_oracle(const DoubleWell& w, double t0, double t1) {
  const int n = 200000;
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += w(t0 + (t1 - t0) * (k + 0.5) / n);
  return s / n;
}
}  // namespace

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS(EnergyParams::unrescaled(1.0, 0.25, 0.1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(EnergyParams::unrescaled(2.0, 0.6, 0.1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(EnergyParams::unrescaled(2.0, 0.25, 0.0).validate(), std::invalid_argument);
  const auto p = EnergyParams::unrescaled(2.0, 0.25, 0.01);
  CHECK(p.sigma == doctest::Approx(0.16));
  CHECK(p.with_form(EnergyForm::Rescaled).interfacial_weight() == doctest::Approx(0.04));
  CHECK(energy_form_from_string("rescaled") == EnergyForm::Rescaled);
}

TEST_CASE("double well exact segment mean") {
  for (double p : {1.5, 2.0, 3.0}) {
    const DoubleWell w(-0.25, 0.75, p);
    CHECK(w(0.25) == doctest::Approx(std::pow(0.5, p)));
    for (auto [a, b] : {std::pair{-1.0, 1.5}, std::pair{0.1, 0.2}, std::pair{0.7, -0.4}, std::pair{0.3, 0.3}})
      CHECK(w.mean_on_segment(a, b) == doctest::Approx(mean_oracle(w, a, b)).epsilon(1e-8));
  }
}

TEST_CASE("constant profile energy is theta^p") {
  for (double theta : {0.1, 0.25, 0.5})
    for (double p : {1.5, 2.0, 3.0}) {
      const auto params = EnergyParams::unrescaled(p, theta, 0.3 * std::pow(theta, p));
      const auto e = energy_analytic(constant_profile(), params);
      CHECK(std::abs(e.total / std::pow(theta, p) - 1.0) <= 1e-12);
      CHECK(e.interfacial == 0.0);
    }
}

TEST_CASE("rescaling identity I(v) = theta^p E(u)") {
  const auto pv = EnergyParams::unrescaled(2.0, 0.25, 1e-3);
  const auto pu = pv.with_form(EnergyForm::Rescaled);
  const auto v = branching_profile(pv).first;
  const auto u = rescale_v_to_u(v, pv.theta);
  const double iv = energy_analytic(v, pv).total;
  const double eu = energy_analytic(u, pu).total;
  CHECK(iv == doctest::Approx(std::pow(pv.theta, 2.0) * eu).epsilon(1e-10));
  const auto gv = GridField::from_function(
      33, 33, [](double x1, double x2) { return 0.1 * x1 * std::sin(3.0 * x2); }, BoundaryCondition::DirichletLeftZero);
  const auto gu = rescale_v_to_u(gv, pv.theta);
  CHECK(energy_grid(gv, pv).total == doctest::Approx(std::pow(pv.theta, 2.0) * energy_grid(gu, pu).total));
  const auto back = rescale_u_to_v(gu, pv.theta);
  CHECK(l1_distance(back, gv) < 1e-14);
}

TEST_CASE("grid energy of the constant field and bc mismatch") {
  const auto params = EnergyParams::unrescaled(2.0, 0.25, 0.0625);
  const GridField zero(17, 17, BoundaryCondition::DirichletLeftZero);
  CHECK(energy_grid(zero, params).total == doctest::Approx(0.0625));
  CHECK_THROWS_AS(energy_grid(GridField(17, 17), params), std::invalid_argument);
  CHECK_THROWS_AS(energy_analytic(identity_profile(), params), std::invalid_argument);
}

TEST_CASE("grid and analytic energies of an affine ramp agree") {
  // v = s x1 on (0,1)^2: elastic |s|^p + W(0), no interfaces.
  const auto params = EnergyParams::unrescaled(2.0, 0.25, 0.01);
  const double s = 0.3;
  const auto prof = AnalyticProfile::single_block(
      Rect{}, BoundaryCondition::DirichletLeftZero, {Cell::rectangle(0, 1, 0, 1, Poly2::affine(0.0, s, 0.0))});
  const auto ea = energy_analytic(prof, params);
  CHECK(ea.total == doctest::Approx(s * s + 0.0625));
  const auto eg = energy_grid(sample_profile(prof, 33, 33), params);
  CHECK(eg.total == doctest::Approx(ea.total).epsilon(1e-12));
}

TEST_CASE("interfaces carry the gradient jump") {
  // Kink along x2 = 1/2: v = 0 below, (x2 - 1/2) s above; jump |s| over length 1.
  const auto params = EnergyParams::unrescaled(2.0, 0.25, 0.01);
  const double s = 0.75;
  const auto prof = AnalyticProfile::single_block(
      Rect{}, BoundaryCondition::None,
      {Cell::rectangle(0, 1, 0, 0.5, Poly2()), Cell::rectangle(0, 1, 0.5, 1, Poly2::affine(-0.5 * s, 0.0, s))});
  REQUIRE(prof.interfaces().size() == 1);
  const auto e = energy_analytic(prof, params);
  CHECK(e.interfacial == doctest::Approx(0.01 * s));
  CHECK(e.elastic_d2 == doctest::Approx(0.5 * 0.0625));  // the upper slope sits in a well
}

TEST_CASE("discontinuous profiles are rejected") {
  CHECK_THROWS_AS(AnalyticProfile::single_block(Rect{}, BoundaryCondition::None,
                                                {Cell::rectangle(0, 1, 0, 0.5, Poly2()),
                                                 Cell::rectangle(0, 1, 0.5, 1, Poly2::affine(1.0, 0.0, 0.0))}),
                  std::invalid_argument);
  CHECK_THROWS_AS(AnalyticProfile::single_block(Rect{}, BoundaryCondition::None,
                                                {Cell::rectangle(0, 1, 0, 0.5, Poly2())}),
                  std::invalid_argument);
}
