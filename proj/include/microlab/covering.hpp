#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "microlab/profile.hpp"

namespace microlab {

/// Open set given as the interior of a finite union of closed axis-aligned rectangles.
class RectUnion {
 public:
  explicit RectUnion(std::vector<Rect> rects);

  const std::vector<Rect>& rects() const { return rects_; }
  Rect bounding_box() const { return bbox_; }
  /// L-infinity distance to the complement; positive exactly on the open set.
  double distance_to_complement(double x, double y) const;
  bool contains(double x, double y) const { return distance_to_complement(x, y) > 0.0; }
  /// True when the open square of half-side l centred at (x, y) meets the set.
  bool meets_square(double x, double y, double l) const;
  double area() const;

 private:
  std::vector<Rect> rects_;
  Rect bbox_;
  std::vector<Rect> outside_;  // closed elementary cells of the bounding box not in the set
};

/// Open square (cx +- l) x (cy +- l); its half-square has the same centre and half-side l/2.
struct Square {
  double cx = 0.0;
  double cy = 0.0;
  double l = 0.0;
  int level = 0;  // dyadic generation of the half-square
  std::int64_t i = 0;
  std::int64_t j = 0;
  int family = 0;
};

struct SquareCover {
  RectUnion omega;
  double delta = 1.0;
  double min_side = 0.0;
  int family_palette = 12;  // families are indexed 0 .. family_palette - 1
  std::vector<Square> squares;

  /// Squares grouped by family, in palette order (possibly empty groups).
  std::vector<std::vector<Square>> families() const;
};

/// Dyadic Whitney squares Q with dist(Q, complement) >= 3 side(Q), maximal, refined down to
/// min_side (default: 2^-12 times the bounding-box size); each accepted Q contributes its
/// doubled square q with half-square Q, uniformly subdivided until side(q) <= delta. Families
/// are (level mod 3, i mod 2, j mod 2).
SquareCover whitney_cover(const RectUnion& omega, double delta, double min_side = 0.0);

/// Spatial index over a cover for intersection and neighbourhood queries.
class CoverIndex {
 public:
  explicit CoverIndex(const SquareCover& cover);
  ~CoverIndex();
  CoverIndex(const CoverIndex&) = delete;
  CoverIndex& operator=(const CoverIndex&) = delete;

  /// Indices of squares whose open square meets that of square q (q included).
  std::vector<std::size_t> intersecting(std::size_t q) const;
  /// k-step closure N_k(q), sorted. Throws std::out_of_range for a bad index, k < 1.
  std::vector<std::size_t> neighbours(std::size_t q, int k) const;
  std::size_t size() const;
  /// A square whose closed half-square contains (x, y), if any.
  std::optional<std::size_t> half_square_containing(double x, double y) const;

 private:
  struct Impl;
  const SquareCover& cover_;
  std::unique_ptr<Impl> impl_;
};

/// Convenience: locate q in the cover (exact centre and half-side) and return N_k(q).
/// Throws std::invalid_argument when q is not in the cover.
std::vector<Square> neighbours(const SquareCover& cover, const Square& q, int k);

struct CoverReport {
  bool containment_ok = true;  // every q inside omega
  bool side_ok = true;         // side(q) <= delta
  bool disjoint_ok = true;     // (iii)
  bool comparable_ok = true;   // (ii) with bound c_bound
  bool coverage_ok = true;     // (i) on samples
  bool passed = false;
  double c = 0.0;              // max l_q'/l_q over intersecting pairs
  double c_bound = 4.0;
  int N = 0;                   // palette size
  int nonempty_families = 0;
  double a = 0.0;
  double b = 0.0;
  std::size_t squares = 0;
  std::size_t samples = 0;
  std::size_t uncovered = 0;
  std::vector<std::string> failures;
};

/// Checks (i)-(iii) and measures c, a, b over k = 1..3. Coverage is tested on
/// `samples` uniform points of omega at distance >= 9 min_side from the complement.
CoverReport verify_cover(const SquareCover& cover, std::size_t samples = 10000, std::uint64_t seed = 1);

}  // namespace microlab
