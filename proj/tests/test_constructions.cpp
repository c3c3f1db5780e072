#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "microlab/constructions.hpp"
#include "microlab/scaling_lab.hpp"

using namespace microlab;

namespace {

// b(l, x2) written out directly from the stripe S(l) = (h(1-theta)/2, h(1+theta)/2).
double trace_at_ell(double x2, double h, double theta) {
  const double lo = h * (1.0 - theta) / 2.0, hi = h * (1.0 + theta) / 2.0;
  if (x2 <= lo) return -theta * x2;
  if (x2 <= hi) return -theta * x2 + (x2 - lo);
  return -theta * x2 + theta * h;
}

PiecewiseSBV single_jump(double delta) {
  PiecewiseSBV u;
  u.cells = {Cell::rectangle(0, 1, 0, 0.5, Poly2::affine(0, 0, 1)),
             Cell::rectangle(0, 1, 0.5, 1, Poly2::affine(0, delta, 1))};
  u.segments = {JumpSegment{0.5, 0.0, 1.0, JumpProfile::single(0.0, 1.0, Poly1::linear(0.0, delta))}};
  return u;
}

}  // namespace

TEST_CASE("branch cell properties (i), (ii), (v) at random points") {
  for (double theta : {0.1, 0.25}) {
    const double ell = 0.7, h = 0.9;
    const auto b = branch_cell(BranchCellSpec::symmetric(ell, h, theta));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 10000; ++k) {
      const double x1 = ell * U(rng), x2 = h * U(rng);
      const double g2 = b.gradient(x1, x2)[1];
      const bool two_slopes = std::abs(g2 + theta) < 1e-12 || std::abs(g2 - (1.0 - theta)) < 1e-12;
      REQUIRE(two_slopes);
      REQUIRE(std::abs(b.value(x1, 0.0)) < 1e-12);
      REQUIRE(std::abs(b.value(x1, h)) < 1e-12);  // h-periodic with b(x1, 0) = 0
      REQUIRE(std::abs(b.value(ell, x2) - trace_at_ell(x2, h, theta)) < 1e-12);
      const double y = 0.5 * x2;  // (ii) on (0, h/2); the other half follows by periodicity
      REQUIRE(std::abs(b.value(0.0, y) - 0.5 * b.value(ell, 2.0 * y)) < 1e-12);
    }
  }
  const auto b = branch_cell(BranchCellSpec::symmetric(1.0, 1.0, 0.25));
  CHECK(b.value(1.0, 0.375) == doctest::Approx(-0.09375).epsilon(1e-14));
}

TEST_CASE("branch cell interfacial constant") {
  double cmax = 0.0;
  for (double ell : {0.5, 1.0})
    for (double h : {0.5, 1.0})
      for (double theta : {0.1, 0.25}) {
        const auto b = branch_cell(BranchCellSpec::symmetric(ell, h, theta));
        const auto params = EnergyParams::unrescaled(2.0, theta, 1.0);
        const double tv = energy_analytic(b, params).interfacial;  // epsilon = 1
        cmax = std::max(cmax, tv / (ell + theta * h));
      }
  CHECK(cmax <= 20.0);
  MESSAGE("branch cell |D^2 b| / (l + theta h) <= " << cmax);
}

TEST_CASE("branch cell elastic scaling exponents") {
  const double p = 2.0, theta = 0.25;
  const auto params = EnergyParams::unrescaled(p, theta, 1.0);
  std::vector<double> hs{0.25, 0.5, 1.0}, ls{0.25, 0.5, 1.0}, eh, el;
  for (double h : hs) eh.push_back(energy_analytic(branch_cell(BranchCellSpec::symmetric(1.0, h, theta)), params).elastic_d1);
  for (double l : ls) el.push_back(energy_analytic(branch_cell(BranchCellSpec::symmetric(l, 1.0, theta)), params).elastic_d1);
  CHECK(std::abs(fit_power_law(hs, eh).slope - (p + 1.0)) <= 0.1);
  CHECK(std::abs(fit_power_law(ls, el).slope + (p - 1.0)) <= 0.1);
}

TEST_CASE("branch cell rejects crossing stripes") {
  auto spec = BranchCellSpec::symmetric(1.0, 1.0, 0.25);
  std::swap(spec.stripes[0], spec.stripes[1]);
  CHECK_THROWS_AS(branch_cell(spec), std::invalid_argument);
  spec = BranchCellSpec::symmetric(1.0, 1.0, 0.25);
  spec.stripes.pop_back();
  CHECK_THROWS_AS(branch_cell(spec), std::invalid_argument);
}

TEST_CASE("branching assembly") {
  const double theta = 0.25, p = 2.0, tp = std::pow(theta, p);
  const auto params = EnergyParams::unrescaled(p, theta, tp * 1e-4);
  const auto [prof, spec] = branching_profile(params);
  CHECK(prof.bc() == BoundaryCondition::DirichletLeftZero);
  for (int k = 0; k <= 200; ++k) REQUIRE(prof.value(0.0, k / 200.0) == 0.0);
  const double e = energy_analytic(prof, params).total;
  const double ref = tp * std::pow(params.epsilon / tp, p / (p + 1.0));
  CHECK(e <= 50.0 * ref);
  MESSAGE("branching energy / reference = " << e / ref << " (N = " << spec.N << ", I = " << spec.I << ")");
  CHECK(spec.alpha > std::pow(2.0, -p / (p - 1.0)));
  CHECK(spec.alpha < 0.5);

  const auto coarse = branching_profile(EnergyParams::unrescaled(p, theta, tp)).second;
  CHECK(coarse.N == 1);
  CHECK_THROWS_AS(branching_profile(EnergyParams::unrescaled(p, theta, 2.0 * tp)), std::invalid_argument);
  CHECK_THROWS_AS(branching_profile(EnergyParams::unrescaled(p, theta, 1e-40)), std::overflow_error);
  CHECK_THROWS_AS(branching_profile(params, 0.6), std::invalid_argument);
}

TEST_CASE("branching beats the constant profile deep in the branching regime") {
  for (double p : {2.0, 3.0})
    for (double theta : {0.1, 0.25}) {
      const double tp = std::pow(theta, p);
      const auto params = EnergyParams::unrescaled(p, theta, tp * 1e-3);
      CHECK(energy_analytic(branching_profile(params).first, params).total <= tp);
    }
}

TEST_CASE("rescaled branching is the u-profile") {
  const auto pv = EnergyParams::unrescaled(2.0, 0.25, 1e-4);
  const auto u = branching_profile(pv.with_form(EnergyForm::Rescaled)).first;
  CHECK(u.bc() == BoundaryCondition::DirichletLeftIdentity);
  const double ev = energy_analytic(branching_profile(pv).first, pv).total;
  CHECK(energy_analytic(u, pv.with_form(EnergyForm::Rescaled)).total * 0.0625 == doctest::Approx(ev).epsilon(1e-10));
}

TEST_CASE("recovery sequence of a single jump") {
  const double delta = 1.0;
  const auto u = single_jump(delta);
  for (double theta : {0.1, 0.01}) {
    const auto ut = recovery_sequence(u, theta);
    CHECK(ut.bc() == BoundaryCondition::DirichletLeftIdentity);
    // Outside the strip the profile equals u.
    CHECK(ut.value(0.5, 0.25) == doctest::Approx(u.value(0.5, 0.25)));
    CHECK(ut.value(0.5, 0.9) == doctest::Approx(u.value(0.5, 0.9)));
    CHECK(ut.gradient(0.5, 0.5 + 0.25 * theta)[1] == doctest::Approx(1.0 + 1.0 / theta));
    // L1 error: midpoint oracle against the closed form theta delta^2 / 6, and the bound.
    const int n1 = 400, n2 = 400;
    double l1 = 0.0;
    for (int i = 0; i < n1; ++i) {
      const double x1 = (i + 0.5) / n1;
      const double top = 0.5 + theta * delta * x1;
      for (int j = 0; j < n2; ++j) {
        const double x2 = 0.5 + (top - 0.5) * (j + 0.5) / n2;
        l1 += std::abs(u.value(x1, x2) - ut.value(x1, x2)) * (top - 0.5) / n2 / n1;
      }
    }
    CHECK(recovery_l1_error(u, theta) == doctest::Approx(theta * delta * delta / 6.0));
    CHECK(l1 == doctest::Approx(theta * delta * delta / 6.0).epsilon(1e-4));
    CHECK(recovery_l1_error(u, theta) <= theta * delta * delta);
  }
  // theta too large for the guard: fall back to u = x2.
  const auto fallback = recovery_sequence(u, 0.5);
  CHECK(fallback.value(0.7, 0.8) == doctest::Approx(0.8));
}

TEST_CASE("recovery of a jump-free limit is the identity") {
  PiecewiseSBV u;
  u.cells = {Cell::rectangle(0, 1, 0, 1, Poly2::affine(0, 0, 1))};
  const auto ut = recovery_sequence(u, 0.01);
  const auto e = energy_analytic(ut, EnergyParams::rescaled(2.0, 0.01, 1.0));
  CHECK(e.total == doctest::Approx(1.0));
}

TEST_CASE("recovery rejects a jump at the Dirichlet edge") {
  auto u = single_jump(1.0);
  u.cells[1].value = Poly2::affine(0.2, 1.0, 1.0);
  u.segments[0].h = JumpProfile::single(0.0, 1.0, Poly1::linear(0.2, 1.0));
  CHECK_THROWS_AS(recovery_sequence(u, 0.01), std::invalid_argument);
}

TEST_CASE("example sequence") {
  const double alpha = 0.9, p = 2.0;
  for (int k = 1; k <= 12; ++k) {
    const double theta = std::ldexp(1.0, -k);
    const auto u = example_sequence(theta, alpha, p);
    for (int j = 0; j <= 20; ++j) REQUIRE(u.value(0.0, j / 20.0) == doctest::Approx(j / 20.0));
    CHECK(l1_norm_d2(u) >= 0.25 * std::pow(theta, alpha - 1.0));
    const auto e = energy_analytic(u, EnergyParams::rescaled(p, theta, 1.0));
    CHECK(std::isfinite(e.total));
  }
  CHECK_THROWS_AS(example_sequence(0.25, 0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(example_sequence(0.25, 1.0, 2.0), std::invalid_argument);
}
