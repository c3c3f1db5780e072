#include "microlab/fields.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "microlab/quadrature.hpp"

namespace microlab {

std::string to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::None:
      return "None";
    case BoundaryCondition::DirichletLeftZero:
      return "DirichletLeftZero";
    case BoundaryCondition::DirichletLeftIdentity:
      return "DirichletLeftIdentity";
  }
  return "None";
}

BoundaryCondition boundary_condition_from_string(std::string_view name) {
  if (name == "None") return BoundaryCondition::None;
  if (name == "DirichletLeftZero") return BoundaryCondition::DirichletLeftZero;
  if (name == "DirichletLeftIdentity") return BoundaryCondition::DirichletLeftIdentity;
  throw std::invalid_argument("unknown boundary condition '" + std::string(name) + "'");
}

GridField::GridField(int nx, int ny, BoundaryCondition bc) : nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid dimensions must be positive");
  values_.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  impose(bc);
}

GridField::GridField(int nx, int ny, std::vector<double> values, BoundaryCondition bc)
    : nx_(nx), ny_(ny), values_(std::move(values)) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid dimensions must be positive");
  if (values_.size() != static_cast<std::size_t>(nx) * ny)
    throw std::invalid_argument("value array does not match grid dimensions");
  set_bc(bc);
  check_invariants();
}

bool GridField::satisfies(BoundaryCondition bc, double tol) const {
  for (int j = 0; j < ny_; ++j) {
    const double v = (*this)(0, j);
    switch (bc) {
      case BoundaryCondition::None:
        return true;
      case BoundaryCondition::DirichletLeftZero:
        if (std::abs(v) > tol) return false;
        break;
      case BoundaryCondition::DirichletLeftIdentity:
        if (std::abs(v - x2(j)) > tol) return false;
        break;
    }
  }
  return true;
}

void GridField::set_bc(BoundaryCondition bc) {
  if (!satisfies(bc)) throw std::invalid_argument("column 0 violates " + to_string(bc));
  bc_ = bc;
}

void GridField::impose(BoundaryCondition bc) {
  for (int j = 0; j < ny_; ++j) {
    if (bc == BoundaryCondition::DirichletLeftZero) (*this)(0, j) = 0.0;
    if (bc == BoundaryCondition::DirichletLeftIdentity) (*this)(0, j) = x2(j);
  }
  bc_ = bc;
}

void GridField::check_invariants() const {
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("grid field holds a non-finite value");
  if (!satisfies(bc_)) throw std::invalid_argument("column 0 violates " + to_string(bc_));
}

GridField d1(const GridField& f) {
  if (f.nx() < 2) throw std::invalid_argument("d1: degenerate grid (nx < 2)");
  GridField out(f.nx(), f.ny());
  const double scale = f.nx() - 1;
  for (int j = 0; j < f.ny(); ++j) {
    for (int i = 0; i + 1 < f.nx(); ++i) out(i, j) = (f(i + 1, j) - f(i, j)) * scale;
    out(f.nx() - 1, j) = out(f.nx() - 2, j);
  }
  return out;
}

GridField d2(const GridField& f) {
  if (f.ny() < 2) throw std::invalid_argument("d2: degenerate grid (ny < 2)");
  GridField out(f.nx(), f.ny());
  const double scale = f.ny() - 1;
  for (int i = 0; i < f.nx(); ++i) {
    for (int j = 0; j + 1 < f.ny(); ++j) out(i, j) = (f(i, j + 1) - f(i, j)) * scale;
    out(i, f.ny() - 1) = out(i, f.ny() - 2);
  }
  return out;
}

double second_total_variation(const GridField& f) {
  const int nx = f.nx();
  const int ny = f.ny();
  if (nx < 3 || ny < 3) throw std::invalid_argument("second_total_variation: grid too small (need 3x3)");
  const double hx = f.hx();
  const double hy = f.hy();
  auto wx = [&](int i) { return (i == 0 || i == nx - 1) ? 0.5 * hx : hx; };
  auto wy = [&](int j) { return (j == 0 || j == ny - 1) ? 0.5 * hy : hy; };

  CompensatedSum total;
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i + 1 < nx; ++i)
      total += std::abs(f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / hx * wy(j);
  for (int j = 1; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i)
      total += std::abs(f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / hy * wx(i);
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i)
      total += 2.0 * std::abs(f(i + 1, j + 1) - f(i + 1, j) - f(i, j + 1) + f(i, j));
  return total.value();
}

double l1_distance(const GridField& f, const GridField& g) {
  if (f.nx() != g.nx() || f.ny() != g.ny()) throw std::invalid_argument("l1_distance: shape mismatch");
  if (f.nx() < 2 || f.ny() < 2) throw std::invalid_argument("l1_distance: degenerate grid");
  const double area = f.hx() * f.hy();
  CompensatedSum total;
  for (int j = 0; j + 1 < f.ny(); ++j) {
    for (int i = 0; i + 1 < f.nx(); ++i) {
      const double s = std::abs(f(i, j) - g(i, j)) + std::abs(f(i + 1, j) - g(i + 1, j)) +
                       std::abs(f(i, j + 1) - g(i, j + 1)) + std::abs(f(i + 1, j + 1) - g(i + 1, j + 1));
      total += 0.25 * s * area;
    }
  }
  return total.value();
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_microfield(std::ostream& os, const GridField& f) {
  os << "MICROFIELD 1\n" << f.nx() << ' ' << f.ny() << ' ' << to_string(f.bc()) << '\n';
  for (int j = 0; j < f.ny(); ++j) {
    for (int i = 0; i < f.nx(); ++i) {
      if (i) os << ' ';
      os << format_double(f(i, j));
    }
    os << '\n';
  }
}

GridField read_microfield(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "MICROFIELD" || version != 1)
    throw std::runtime_error("not a MICROFIELD 1 stream");
  int nx = 0;
  int ny = 0;
  std::string bc_name;
  if (!(is >> nx >> ny >> bc_name)) throw std::runtime_error("MICROFIELD: malformed header");
  if (nx < 1 || ny < 1) throw std::runtime_error("MICROFIELD: bad dimensions");
  std::vector<double> values(static_cast<std::size_t>(nx) * ny);
  std::string token;
  for (double& v : values) {
    if (!(is >> token)) throw std::runtime_error("MICROFIELD: truncated data");
    std::size_t used = 0;
    v = std::stod(token, &used);
    if (used != token.size()) throw std::runtime_error("MICROFIELD: bad number '" + token + "'");
  }
  return GridField(nx, ny, std::move(values), boundary_condition_from_string(bc_name));
}

void save_microfield(const std::string& path, const GridField& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_microfield(os, f);
}

GridField load_microfield(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_microfield(is);
}

}  // namespace microlab
