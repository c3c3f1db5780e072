#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "microlab/energy.hpp"
#include "microlab/minimizer.hpp"

namespace microlab {

struct SweepRecord {
  double p = 2.0;
  double theta = 0.25;
  double epsilon = 0.0;
  double sigma = 0.0;
  std::string construction;  // "constant", "branching" or "minimizer"
  EnergyBreakdown energy;    // all NaN when error is set
  double wall_time = 0.0;    // seconds
  bool best = false;
  std::string error;
};

struct SweepOptions {
  double p = 2.0;
  double theta = 0.25;
  std::vector<double> epsilons;             // positive, increasing
  std::vector<std::string> constructions{"constant", "branching"};
  bool refine_with_minimizer = false;
  MinimizeOptions minimize;                 // used when refining
  unsigned threads = 0;                     // 0 = hardware concurrency

  void validate() const;
};

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, int n);

/// Evaluates each construction per epsilon (branching only where epsilon <= theta^p), in
/// parallel over epsilon. Rows are ordered by epsilon, then construction; the smallest
/// successful total per epsilon carries best = true.
std::vector<SweepRecord> sweep(const SweepOptions& opts);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |log E - fit|
  std::size_t points = 0;
};

/// Least-squares fit log y = slope log x + intercept. Requires >= 2 points, x, y > 0.
FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of log(best) against log(epsilon) over best rows with epsilon <= theta^p / 16.
/// Throws std::invalid_argument with fewer than 4 such rows or a nonpositive energy.
FitResult fit_exponent(const std::vector<SweepRecord>& records);

struct SandwichReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double band = 0.0;  // max / min
  std::size_t points = 0;
  bool passed = false;
};

/// Ratios best / (theta^p min{1, (eps/theta^p)^{p/(p+1)}}) over best rows. Passes when
/// max/min <= 100 and max <= 100. Only the upper side is rigorous: best is an upper bound.
SandwichReport sandwich_check(const std::vector<SweepRecord>& records);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_sweep_csv(std::istream& is);

}  // namespace microlab
