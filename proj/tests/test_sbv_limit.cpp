#include <doctest.h>

#include <stdexcept>

#include "microlab/sbv_limit.hpp"

using namespace microlab;

namespace {

PiecewiseSBV identity() {
  PiecewiseSBV u;
  u.cells = {Cell::rectangle(0, 1, 0, 1, Poly2::affine(0, 0, 1))};
  return u;
}

PiecewiseSBV single_jump(double delta) {
  PiecewiseSBV u;
  u.cells = {Cell::rectangle(0, 1, 0, 0.5, Poly2::affine(0, 0, 1)),
             Cell::rectangle(0, 1, 0.5, 1, Poly2::affine(0, delta, 1))};
  u.segments = {JumpSegment{0.5, 0.0, 1.0, JumpProfile::single(0.0, 1.0, Poly1::linear(0.0, delta))}};
  return u;
}

}  // namespace

TEST_CASE("validation") {
  CHECK(validate(identity()).ok());
  CHECK(validate(single_jump(1.0)).ok());

  auto neg = single_jump(-0.1);
  CHECK(validate(neg).has("negative jump"));

  auto tr = single_jump(1.0);
  tr.cells[1].value = Poly2::affine(0.2, 1.0, 1.0);
  tr.segments[0].h = JumpProfile::single(0.0, 1.0, Poly1::linear(0.2, 1.0));
  const auto rep = validate(tr);
  CHECK(rep.has("trace"));
  CHECK_FALSE(rep.summary().empty());

  auto mismatch = single_jump(1.0);
  mismatch.segments[0].h = JumpProfile::single(0.0, 1.0, Poly1::linear(0.0, 0.5));
  CHECK(validate(mismatch).has("jump mismatch"));

  auto missing = single_jump(1.0);
  missing.segments.clear();
  CHECK(validate(missing).has("discontinuity"));

  auto hole = identity();
  hole.cells[0] = Cell::rectangle(0, 1, 0, 0.9, Poly2::affine(0, 0, 1));
  CHECK(validate(hole).has("partition"));
}

TEST_CASE("limit energy") {
  const auto e0 = limit_energy(identity());
  CHECK(e0.total == doctest::Approx(1.0));
  CHECK_FALSE(e0.params.has_value());

  // 1 (d2) + 1/2 (d1 over the upper half) + 2 sigma (jump length 1).
  const auto e = limit_energy(single_jump(1.0));
  CHECK(e.elastic_d1 == doctest::Approx(0.5));
  CHECK(e.elastic_d2 == doctest::Approx(1.0));
  CHECK(e.interfacial == doctest::Approx(2.0));
  CHECK(e.total == doctest::Approx(3.5));

  auto u2 = single_jump(1.0);
  u2.sigma = 2.0;
  const auto e2 = limit_energy(u2);
  CHECK(e2.interfacial == doctest::Approx(2.0 * e.interfacial));
  CHECK(e2.elastic_d1 == e.elastic_d1);
  CHECK(e2.elastic_d2 == e.elastic_d2);

  CHECK_THROWS_AS(limit_energy(single_jump(-0.1)), std::invalid_argument);
}

TEST_CASE("jump length counts only where the jump is positive") {
  auto u = single_jump(1.0);
  CHECK(jump_length(u) == doctest::Approx(1.0));
  // h = (x1 - 1/2)^2 vanishes at one point only; the set {h > 0} still has length 1.
  JumpProfile h{{0.0, 1.0}, {Poly1({0.25, -1.0, 1.0})}};
  CHECK(h.positive_measure() == doctest::Approx(1.0));
  JumpProfile half{{0.0, 0.5, 1.0}, {Poly1::constant(0.0), Poly1::linear(-0.5, 1.0)}};
  CHECK(half.positive_measure() == doctest::Approx(0.5));
  CHECK(half(0.75) == doctest::Approx(0.25));
  CHECK(half.sup_norm() == doctest::Approx(0.5));
}
