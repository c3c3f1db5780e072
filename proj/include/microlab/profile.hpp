#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "microlab/fields.hpp"
#include "microlab/polynomial.hpp"

namespace microlab {

struct Rect {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y_lo = 0.0;
  double y_hi = 1.0;
  double area() const { return (x_hi - x_lo) * (y_hi - y_lo); }
};

/// Region {x_lo < x1 < x_hi, lower(x1) < x2 < upper(x1)} carrying a polynomial value map.
/// Rectangles, triangles and trapezoids are the affine-boundary special cases.
struct Cell {
  double x_lo = 0.0;
  double x_hi = 1.0;
  Poly1 lower;
  Poly1 upper = Poly1::constant(1.0);
  Poly2 value;

  static Cell rectangle(double x_lo, double x_hi, double y_lo, double y_hi, Poly2 value);

  bool is_rectangle() const { return lower.is_constant() && upper.is_constant(); }
  double area() const { return (upper - lower).integrate(x_lo, x_hi); }
  bool contains(double x1, double x2, double tol = 1e-12) const;
};

/// A column of cells on [x_lo, x_hi] x [y0, y0 + period], repeated `count` times
/// upward. Copy k takes the value cell.value(x1, x2 - k*period) + k*drift.
struct Block {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y0 = 0.0;
  double period = 1.0;
  std::int64_t count = 1;
  double drift = 0.0;
  std::vector<Cell> cells;

  double height() const { return period * static_cast<double>(count); }
};

/// A piece of cell boundary shared by two cells (or two periodic copies of cells).
/// Geometry is expressed in representative coordinates; a point Y on the edge maps to
/// Y - shift_{a,b} in the cell's own coordinates. `a` is the lower/left side.
struct SharedEdge {
  enum class Kind { Curve, Vertical };
  Kind kind = Kind::Curve;
  std::size_t block_a = 0, cell_a = 0, block_b = 0, cell_b = 0;
  double shift_a = 0.0, shift_b = 0.0;
  double x_lo = 0.0, x_hi = 0.0;  // Vertical: x_lo == x_hi
  Poly1 curve;                    // Curve: x2 = curve(x1)
  double y_lo = 0.0, y_hi = 0.0;  // Vertical only
  double multiplicity = 1.0;
  double length = 0.0;            // one instance

  /// Midpoint of the edge in representative coordinates.
  std::array<double, 2> midpoint() const;
};

/// A shared edge across which the gradient jumps.
struct Interface {
  SharedEdge edge;
  std::array<double, 2> grad_a{};  // two-sided gradients at the midpoint
  std::array<double, 2> grad_b{};
  double jump_integral = 0.0;  // integral of |grad_a - grad_b| along one instance
};

/// Exact piecewise-polynomial profile on a rectangle. Interfaces are derived from the cell
/// geometry on construction; continuity of the value across shared edges is enforced.
class AnalyticProfile {
 public:
  AnalyticProfile(Rect domain, BoundaryCondition bc, std::vector<Block> blocks);
  static AnalyticProfile single_block(Rect domain, BoundaryCondition bc, std::vector<Cell> cells);

  const Rect& domain() const { return domain_; }
  BoundaryCondition bc() const { return bc_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<Interface>& interfaces() const { return interfaces_; }

  struct Location {
    std::size_t block;
    std::size_t cell;
    std::int64_t copy;
  };
  /// Deterministic tie-break: the candidate with lexicographically smallest origin wins.
  Location locate(double x1, double x2) const;
  double value(double x1, double x2) const;
  std::array<double, 2> gradient(double x1, double x2) const;

  std::size_t cell_count() const;

 private:
  Rect domain_;
  BoundaryCondition bc_;
  std::vector<Block> blocks_;
  std::vector<Interface> interfaces_;
};

/// All edges shared between distinct cells, including periodic wrap-around inside a
/// block and vertical edges between adjacent blocks.
std::vector<SharedEdge> find_shared_edges(const std::vector<Block>& blocks);

/// Value and gradient of one side of a shared edge at representative point (x1, Y).
double edge_side_value(const std::vector<Block>& blocks, const SharedEdge& e, bool side_b, double x1,
                       double y);
std::array<double, 2> edge_side_gradient(const std::vector<Block>& blocks, const SharedEdge& e, bool side_b,
                                         double x1, double y);

/// Integral of |grad_a - grad_b| along one instance of the edge.
double edge_jump_integral(const std::vector<Block>& blocks, const SharedEdge& e);

/// Pointwise sum. Both profiles must share the block layout.
AnalyticProfile operator+(const AnalyticProfile& a, const AnalyticProfile& b);

/// Node-centred sampling on the unit square. The requested bc is attached only if the
/// sampled column satisfies it.
GridField sample_profile(const AnalyticProfile& prof, int nx, int ny, BoundaryCondition bc);
GridField sample_profile(const AnalyticProfile& prof, int nx, int ny);

}  // namespace microlab
