#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace microlab {

/// Dirichlet data on the austenite edge {x1 = 0}.
enum class BoundaryCondition {
  None,
  DirichletLeftZero,      // v(0, x2) = 0
  DirichletLeftIdentity,  // u(0, x2) = x2
};

std::string to_string(BoundaryCondition bc);
BoundaryCondition boundary_condition_from_string(std::string_view name);

/// Node-centred scalar field on [0,1]^2. Node (i, j) sits at (i/(nx-1), j/(ny-1));
/// storage is row-major with rows of constant x2, row j = 0 at the bottom.
class GridField {
 public:
  GridField(int nx, int ny, BoundaryCondition bc = BoundaryCondition::None);
  GridField(int nx, int ny, std::vector<double> values, BoundaryCondition bc = BoundaryCondition::None);

  template <class F>
  static GridField from_function(int nx, int ny, F&& f, BoundaryCondition bc = BoundaryCondition::None) {
    GridField g(nx, ny);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) g(i, j) = f(g.x1(i), g.x2(j));
    g.set_bc(bc);
    return g;
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return nx_ > 1 ? 1.0 / (nx_ - 1) : 0.0; }
  double hy() const { return ny_ > 1 ? 1.0 / (ny_ - 1) : 0.0; }
  double x1(int i) const { return nx_ > 1 ? static_cast<double>(i) / (nx_ - 1) : 0.0; }
  double x2(int j) const { return ny_ > 1 ? static_cast<double>(j) / (ny_ - 1) : 0.0; }

  double& operator()(int i, int j) { return values_[static_cast<std::size_t>(j) * nx_ + i]; }
  double operator()(int i, int j) const { return values_[static_cast<std::size_t>(j) * nx_ + i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  BoundaryCondition bc() const { return bc_; }
  /// Tags the field; throws std::invalid_argument if column 0 violates the condition.
  void set_bc(BoundaryCondition bc);
  /// Overwrites column 0 with the Dirichlet data and tags the field.
  void impose(BoundaryCondition bc);
  bool satisfies(BoundaryCondition bc, double tol = 1e-12) const;
  /// Throws if any value is not finite or the bc tag does not hold.
  void check_invariants() const;

 private:
  int nx_;
  int ny_;
  std::vector<double> values_;
  BoundaryCondition bc_ = BoundaryCondition::None;
};

/// Forward difference in x1 scaled by nx-1; last column copied. Requires nx >= 2.
GridField d1(const GridField& f);
/// Forward difference in x2 scaled by ny-1; last row copied. Requires ny >= 2.
GridField d2(const GridField& f);

/// Anisotropic discrete |D^2 f|((0,1)^2): l1 sum of the second differences
/// d11, d22 (node stencils, trapezoid weights) and twice the mixed difference d12
/// (cell stencil). Requires nx, ny >= 3.
double second_total_variation(const GridField& f);

/// Trapezoid-in-cells approximation of the L1 norm of f - g.
double l1_distance(const GridField& f, const GridField& g);

/// "MICROFIELD 1" text format.
void write_microfield(std::ostream& os, const GridField& f);
GridField read_microfield(std::istream& is);
void save_microfield(const std::string& path, const GridField& f);
GridField load_microfield(const std::string& path);

/// Fixed-format decimal with 17 significant digits.
std::string format_double(double x);

}  // namespace microlab
