#include <doctest.h>

#include <stdexcept>

#include "microlab/constructions.hpp"
#include "microlab/json_io.hpp"

using namespace microlab;

TEST_CASE("profile json round trip preserves energy") {
  const auto params = EnergyParams::unrescaled(2.0, 0.25, 1e-4);
  const auto prof = branching_profile(params).first;
  const json j = to_json(prof);
  CHECK(j.at("interfaces").size() == prof.interfaces().size());
  const auto back = profile_from_json(json::parse(j.dump()));
  CHECK(energy_analytic(back, params).total == energy_analytic(prof, params).total);
  json bad = j;
  bad["colour"] = "blue";
  CHECK_THROWS_AS(profile_from_json(bad), std::invalid_argument);
}

TEST_CASE("sbv json round trip") {
  PiecewiseSBV u;
  u.cells = {Cell::rectangle(0, 1, 0, 0.5, Poly2::affine(0, 0, 1)),
             Cell::rectangle(0, 1, 0.5, 1, Poly2::affine(0, 1, 1))};
  u.segments = {JumpSegment{0.5, 0.0, 1.0, JumpProfile::single(0.0, 1.0, Poly1::linear(0.0, 1.0))}};
  const auto back = sbv_from_json(json::parse(to_json(u).dump()));
  CHECK(limit_energy(back).total == doctest::Approx(3.5));
  // Short forms: rectangles by y_lo / y_hi, single-piece jump profiles as coefficient arrays.
  const auto shortform = sbv_from_json(json::parse(R"({
    "cells": [{"x_lo":0,"x_hi":1,"y_lo":0,"y_hi":0.5,"value":[[0,1]]},
              {"x_lo":0,"x_hi":1,"y_lo":0.5,"y_hi":1,"value":[[0,1],[1]]}],
    "segments": [{"y":0.5,"a":0,"b":1,"h":[0,1]}]})"));
  CHECK(limit_energy(shortform).total == doctest::Approx(3.5));
}

TEST_CASE("energy breakdown json") {
  const auto e = energy_analytic(constant_profile(), EnergyParams::unrescaled(2.0, 0.25, 0.01));
  const json j = to_json(e);
  for (const char* k : {"elastic_d1", "elastic_d2", "interfacial", "total", "params"}) CHECK(j.contains(k));
  CHECK(j["total"].get<double>() == doctest::Approx(0.0625));
  CHECK(j["params"]["form"] == "Unrescaled");
  const auto p = params_from_json(j["params"]);
  CHECK(p.epsilon == 0.01);
  CHECK_THROWS_AS(params_from_json(json{{"p", 2.0}, {"theta", 0.25}}), std::invalid_argument);
  CHECK_THROWS_AS(params_from_json(json{{"p", 2.0}, {"theta", 0.25}, {"eps", 1.0}}), std::invalid_argument);
}
