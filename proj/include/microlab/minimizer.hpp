#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "microlab/energy.hpp"
#include "microlab/fields.hpp"

namespace microlab {

struct MinimizeOptions {
  int nx = 64;
  int ny = 64;
  int max_iter = 500;                               // per continuation stage
  std::vector<double> deltas{1e-1, 1e-2, 1e-3};     // continuation schedule, decreasing
  double armijo = 1e-4;                             // sufficient-decrease constant
  double shrink = 0.5;                              // backtracking factor
  int max_backtracks = 40;
  double initial_step = 1.0;
  double rel_tol = 1e-9;                            // stage stops below this relative decrease
  std::uint64_t seed = 0;
  double random_amplitude = 0.1;

  void validate() const;
};

enum class InitKind { Constant, Branching, Random, Given };

std::string to_string(InitKind k);
InitKind init_kind_from_string(const std::string& name);

struct SmoothedEnergy {
  double value = 0.0;
  GridField gradient;  // zero on the Dirichlet column
};

/// Grid energy with the double-well min replaced by a normalised soft-min
/// -delta log((e^{-a/delta} + e^{-b/delta}) / 2) and |.| in the second total variation by
/// the Huber function of width delta. Bounded above by the exact grid energy plus
/// delta log 2 per cell, and nonnegative.
SmoothedEnergy smoothed_energy(const GridField& f, const EnergyParams& params, double delta);

struct TraceRow {
  int iter = 0;
  double delta_s = 0.0;
  double e_smooth = 0.0;
  double e_exact = 0.0;
};

struct MinimizeResult {
  GridField field;          // iterate with the lowest exact energy seen (including the start)
  std::vector<TraceRow> trace;
  std::string status;       // "converged", "max_iter" or "stalled"
  double initial_exact = 0.0;
  double best_exact = 0.0;
};

/// Gradient descent with Armijo backtracking on the smoothed energy, continuation in delta,
/// Dirichlet column held fixed. Works in the form given by params.
MinimizeResult minimize(const EnergyParams& params, const MinimizeOptions& opts, InitKind init,
                        const std::optional<GridField>& given = std::nullopt);

/// Initial field for the given kind (exposed for tests and the CLI).
GridField initial_field(const EnergyParams& params, const MinimizeOptions& opts, InitKind init,
                        const std::optional<GridField>& given = std::nullopt);

}  // namespace microlab
