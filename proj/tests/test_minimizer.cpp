#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "microlab/constructions.hpp"
#include "microlab/minimizer.hpp"

using namespace microlab;

namespace {

GridField random_field(int n, const EnergyParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const bool rescaled = params.form == EnergyForm::Rescaled;
  auto f = GridField::from_function(n, n, [&](double x1, double x2) {
    return (rescaled ? x2 : 0.0) + (x1 > 0.0 ? 0.1 * U(rng) : 0.0);
  });
  f.impose(params.required_bc());
  return f;
}

}  // namespace

TEST_CASE("smoothed energy gradient matches central differences") {
  for (auto form : {EnergyForm::Unrescaled, EnergyForm::Rescaled})
    for (double p : {1.5, 2.0, 3.0}) {
      const auto params = EnergyParams::unrescaled(p, 0.25, 0.01).with_form(form);
      const auto f = random_field(16, params, 11);
      const double delta = 1e-2;
      const auto s = smoothed_energy(f, params, delta);
      double err = 0.0, gmax = 0.0;
      for (int j = 0; j < 16; ++j)
        for (int i = 1; i < 16; ++i) {
          const double h = 1e-7;
          GridField a = f, b = f;
          a(i, j) += h;
          b(i, j) -= h;
          const double fd = (smoothed_energy(a, params, delta).value - smoothed_energy(b, params, delta).value) / (2 * h);
          err = std::max(err, std::abs(fd - s.gradient(i, j)));
          gmax = std::max(gmax, std::abs(s.gradient(i, j)));
        }
      CHECK(err / gmax <= 1e-5);
      for (int j = 0; j < 16; ++j) CHECK(s.gradient(0, j) == 0.0);
    }
}

TEST_CASE("smoothed energy is nonnegative and converges to the exact energy") {
  const auto params = EnergyParams::rescaled(2.0, 0.25, 1.0);
  const auto id = GridField::from_function(33, 33, [](double, double x2) { return x2; },
                                           BoundaryCondition::DirichletLeftIdentity);
  double prev = 1e300;
  for (double d : {1e-1, 1e-2, 1e-3, 1e-5}) {
    const double v = smoothed_energy(id, params, d).value;
    CHECK(v >= 0.0);
    CHECK(std::abs(v - 1.0) <= std::abs(prev - 1.0));
    prev = v;
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-4));
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    CHECK(smoothed_energy(random_field(12, params, seed), params, 1e-2).value >= 0.0);
  CHECK_THROWS_AS(smoothed_energy(GridField(8, 8), params, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(smoothed_energy(id, params, 0.0), std::invalid_argument);
}

TEST_CASE("options are validated") {
  MinimizeOptions o;
  o.deltas = {1e-2, 1e-1};
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
  o = MinimizeOptions{};
  o.rel_tol = 0.0;
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
  CHECK(init_kind_from_string("branching") == InitKind::Branching);
  CHECK_THROWS(init_kind_from_string("bogus"));
}

TEST_CASE("descent from the constant field at epsilon = theta^p") {
  const auto params = EnergyParams::unrescaled(2.0, 0.25, 0.0625);
  MinimizeOptions o;
  o.nx = o.ny = 24;
  o.max_iter = 60;
  const auto r = minimize(params, o, InitKind::Constant);
  CHECK(r.initial_exact == doctest::Approx(0.0625));
  CHECK(energy_grid(r.field, params).total <= 0.0625 + 1e-6);
  CHECK(r.best_exact == energy_grid(r.field, params).total);
  // Accepted steps never increase the smoothed energy at fixed delta.
  for (std::size_t k = 1; k < r.trace.size(); ++k)
    if (r.trace[k].delta_s == r.trace[k - 1].delta_s) CHECK(r.trace[k].e_smooth <= r.trace[k - 1].e_smooth);
  CHECK(r.field.satisfies(BoundaryCondition::DirichletLeftZero));
}

TEST_CASE("first step from u = x2 decreases the smoothed energy") {
  const auto params = EnergyParams::rescaled(2.0, 0.25, 1e-3);
  MinimizeOptions o;
  o.nx = o.ny = 32;
  o.max_iter = 1;
  const auto id = GridField::from_function(32, 32, [](double, double x2) { return x2; },
                                           BoundaryCondition::DirichletLeftIdentity);
  const auto r = minimize(params, o, InitKind::Given, id);
  REQUIRE(r.trace.size() >= 2);
  CHECK(r.trace[1].e_smooth < r.trace[0].e_smooth);
  CHECK_THROWS_AS(minimize(params, o, InitKind::Given), std::invalid_argument);
}

TEST_CASE("descent from the branching profile does not lose to it") {
  const auto params = EnergyParams::unrescaled(2.0, 0.25, 0.0625e-3);
  MinimizeOptions o;
  o.nx = o.ny = 128;
  o.max_iter = 20;
  const double start = energy_grid(initial_field(params, o, InitKind::Branching), params).total;
  const auto r = minimize(params, o, InitKind::Branching);
  CHECK(r.best_exact <= start);
  CHECK(r.best_exact >= 0.0);
}

TEST_CASE("random initialisation is seeded") {
  const auto params = EnergyParams::unrescaled(2.0, 0.25, 0.01);
  MinimizeOptions o;
  o.nx = o.ny = 9;
  o.seed = 42;
  const auto a = initial_field(params, o, InitKind::Random);
  const auto b = initial_field(params, o, InitKind::Random);
  o.seed = 43;
  const auto c = initial_field(params, o, InitKind::Random);
  CHECK(l1_distance(a, b) == 0.0);
  CHECK(l1_distance(a, c) > 0.0);
  CHECK(a.satisfies(BoundaryCondition::DirichletLeftZero));
}
