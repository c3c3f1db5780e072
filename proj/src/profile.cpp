#include "microlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "microlab/quadrature.hpp"

namespace microlab {

namespace {

constexpr double kGeomTol = 1e-12;

double curve_length(const Poly1& c, double a, double b) {
  if (c.degree() <= 1) {
    const double s = c.coeff(1);
    return (b - a) * std::sqrt(1.0 + s * s);
  }
  const Poly1 d = c.derivative();
  return integrate_1d(
      [&](double x) {
        const double s = d(x);
        return std::sqrt(1.0 + s * s);
      },
      a, b);
}

// Two boundary curves coincide on [lo, hi]; the tolerance scales with the block period so
// deep generations with tiny cells are not merged.
bool same_curve(const Poly1& p, const Poly1& q, double lo, double hi, double scale) {
  const Poly1 d = p - q;
  for (int k = 0; k <= 4; ++k)
    if (std::abs(d(lo + (hi - lo) * k / 4.0)) > 1e-11 * scale) return false;
  return d.degree() <= 4;
}

const Cell& side_cell(const std::vector<Block>& blocks, const SharedEdge& e, bool side_b) {
  const Block& b = blocks.at(side_b ? e.block_b : e.block_a);
  return b.cells.at(side_b ? e.cell_b : e.cell_a);
}

void finish_edge(SharedEdge& e) {
  if (e.kind == SharedEdge::Kind::Curve) {
    e.length = curve_length(e.curve, e.x_lo, e.x_hi);
  } else {
    e.length = e.y_hi - e.y_lo;
  }
}

// Edges between blocks A (left) and B (right) meeting at x = A.x_hi.
void between_blocks(const std::vector<Block>& blocks, std::size_t ia, std::size_t ib,
                    std::vector<SharedEdge>& out) {
  const Block& A = blocks[ia];
  const Block& B = blocks[ib];
  const double x = A.x_hi;
  const double H = A.height();
  const double P = std::max(A.period, B.period);
  const double ra = std::round(P / A.period);
  const double rb = std::round(P / B.period);
  if (std::abs(ra * A.period - P) > 1e-9 * P || std::abs(rb * B.period - P) > 1e-9 * P)
    throw std::invalid_argument("adjacent blocks have incommensurate periods");
  if (ra > 1e6 || rb > 1e6) throw std::invalid_argument("adjacent block periods differ by more than 1e6");

  struct Piece {
    std::size_t cell;
    double lo, hi, shift;
  };
  auto pieces = [&](const Block& blk, double r, bool right_edge) {
    std::vector<Piece> ps;
    for (std::size_t c = 0; c < blk.cells.size(); ++c) {
      const Cell& cell = blk.cells[c];
      const double cx = right_edge ? cell.x_hi : cell.x_lo;
      if (std::abs(cx - x) > kGeomTol * std::max(1.0, std::abs(x))) continue;
      for (std::int64_t k = 0; k < static_cast<std::int64_t>(r); ++k) {
        const double s = static_cast<double>(k) * blk.period;
        ps.push_back({c, cell.lower(cx) + s, cell.upper(cx) + s, s});
      }
    }
    return ps;
  };
  const auto pa = pieces(A, ra, true);
  const auto pb = pieces(B, rb, false);
  for (const auto& a : pa) {
    for (const auto& b : pb) {
      const double lo = std::max(a.lo, b.lo);
      const double hi = std::min(a.hi, b.hi);
      if (hi - lo <= kGeomTol * P) continue;
      SharedEdge e;
      e.kind = SharedEdge::Kind::Vertical;
      e.block_a = ia;
      e.cell_a = a.cell;
      e.block_b = ib;
      e.cell_b = b.cell;
      e.shift_a = a.shift;
      e.shift_b = b.shift;
      e.x_lo = e.x_hi = x;
      e.y_lo = lo;
      e.y_hi = hi;
      e.multiplicity = H / P;
      finish_edge(e);
      out.push_back(e);
    }
  }
}

void validate_blocks(const Rect& domain, const std::vector<Block>& blocks) {
  if (!(domain.x_hi > domain.x_lo) || !(domain.y_hi > domain.y_lo))
    throw std::invalid_argument("profile domain is empty");
  if (blocks.empty()) throw std::invalid_argument("profile has no blocks");
  const double H = domain.y_hi - domain.y_lo;
  double x = domain.x_lo;
  CompensatedSum area;
  for (const Block& b : blocks) {
    if (std::abs(b.x_lo - x) > 1e-12 * std::max(1.0, std::abs(x)))
      throw std::invalid_argument("blocks do not tile the domain in x1");
    if (!(b.x_hi > b.x_lo)) throw std::invalid_argument("block with empty x1 range");
    if (!(b.period > 0.0) || b.count < 1) throw std::invalid_argument("block with invalid period/count");
    if (std::abs(b.y0 - domain.y_lo) > 1e-12 || std::abs(b.height() - H) > 1e-10 * H)
      throw std::invalid_argument("block height does not match the domain");
    if (b.cells.empty()) throw std::invalid_argument("block has no cells");
    for (const Cell& c : b.cells) {
      const double tol = 1e-10 * b.period;
      if (!(c.x_hi > c.x_lo) || c.x_lo < b.x_lo - 1e-12 || c.x_hi > b.x_hi + 1e-12)
        throw std::invalid_argument("cell outside its block in x1");
      if ((c.upper - c.lower).min_on(c.x_lo, c.x_hi) < -tol)
        throw std::invalid_argument("cell with upper boundary below lower boundary");
      if (c.lower.min_on(c.x_lo, c.x_hi) < b.y0 - tol || c.upper.max_on(c.x_lo, c.x_hi) > b.y0 + b.period + tol)
        throw std::invalid_argument("cell outside its period strip");
      area += c.area() * static_cast<double>(b.count);
    }
    x = b.x_hi;
  }
  if (std::abs(x - domain.x_hi) > 1e-12 * std::max(1.0, std::abs(x)))
    throw std::invalid_argument("blocks do not reach the right edge of the domain");
  if (std::abs(area.value() - domain.area()) > 1e-10 * domain.area())
    throw std::invalid_argument("cells do not partition the domain (area " + format_double(area.value()) +
                                " vs " + format_double(domain.area()) + ")");
}

}  // namespace

Cell Cell::rectangle(double x_lo, double x_hi, double y_lo, double y_hi, Poly2 value) {
  return Cell{x_lo, x_hi, Poly1::constant(y_lo), Poly1::constant(y_hi), std::move(value)};
}

bool Cell::contains(double x1, double x2, double tol) const {
  if (x1 < x_lo - tol || x1 > x_hi + tol) return false;
  const double xc = std::clamp(x1, x_lo, x_hi);
  return x2 >= lower(xc) - tol && x2 <= upper(xc) + tol;
}

std::array<double, 2> SharedEdge::midpoint() const {
  if (kind == Kind::Vertical) return {x_lo, 0.5 * (y_lo + y_hi)};
  const double m = 0.5 * (x_lo + x_hi);
  return {m, curve(m)};
}

std::vector<SharedEdge> find_shared_edges(const std::vector<Block>& blocks) {
  std::vector<SharedEdge> out;
  for (std::size_t ib = 0; ib < blocks.size(); ++ib) {
    const Block& B = blocks[ib];
    const double xtol = kGeomTol * std::max(1.0, std::abs(B.x_hi));
    for (std::size_t i = 0; i < B.cells.size(); ++i) {
      const Cell& ci = B.cells[i];
      for (std::size_t j = 0; j < B.cells.size(); ++j) {
        const Cell& cj = B.cells[j];
        const double lo = std::max(ci.x_lo, cj.x_lo);
        const double hi = std::min(ci.x_hi, cj.x_hi);
        if (i != j && hi - lo > xtol && same_curve(ci.upper, cj.lower, lo, hi, B.period)) {
          SharedEdge e;
          e.block_a = e.block_b = ib;
          e.cell_a = i;
          e.cell_b = j;
          e.x_lo = lo;
          e.x_hi = hi;
          e.curve = ci.upper;
          e.multiplicity = static_cast<double>(B.count);
          finish_edge(e);
          out.push_back(e);
        }
        if (i != j && std::abs(ci.x_hi - cj.x_lo) <= xtol) {
          const double x = ci.x_hi;
          const double ylo = std::max(ci.lower(x), cj.lower(x));
          const double yhi = std::min(ci.upper(x), cj.upper(x));
          if (yhi - ylo > kGeomTol * B.period) {
            SharedEdge e;
            e.kind = SharedEdge::Kind::Vertical;
            e.block_a = e.block_b = ib;
            e.cell_a = i;
            e.cell_b = j;
            e.x_lo = e.x_hi = x;
            e.y_lo = ylo;
            e.y_hi = yhi;
            e.multiplicity = static_cast<double>(B.count);
            finish_edge(e);
            out.push_back(e);
          }
        }
        if (B.count > 1 && hi - lo > xtol && ci.upper.is_constant() && cj.lower.is_constant() &&
            std::abs(ci.upper(lo) - (B.y0 + B.period)) <= kGeomTol * B.period &&
            std::abs(cj.lower(lo) - B.y0) <= kGeomTol * B.period) {
          SharedEdge e;
          e.block_a = e.block_b = ib;
          e.cell_a = i;
          e.cell_b = j;
          e.shift_b = B.period;
          e.x_lo = lo;
          e.x_hi = hi;
          e.curve = Poly1::constant(B.y0 + B.period);
          e.multiplicity = static_cast<double>(B.count - 1);
          finish_edge(e);
          out.push_back(e);
        }
      }
    }
    if (ib + 1 < blocks.size()) between_blocks(blocks, ib, ib + 1, out);
  }
  return out;
}

double edge_side_value(const std::vector<Block>& blocks, const SharedEdge& e, bool side_b, double x1,
                       double y) {
  const Block& B = blocks.at(side_b ? e.block_b : e.block_a);
  const double shift = side_b ? e.shift_b : e.shift_a;
  return side_cell(blocks, e, side_b).value(x1, y - shift) + std::round(shift / B.period) * B.drift;
}

std::array<double, 2> edge_side_gradient(const std::vector<Block>& blocks, const SharedEdge& e, bool side_b,
                                         double x1, double y) {
  const double shift = side_b ? e.shift_b : e.shift_a;
  return side_cell(blocks, e, side_b).value.gradient(x1, y - shift);
}

namespace {

// Integral over s in [0, L] of |d0 + s d1| in closed form.
double affine_norm_integral(std::array<double, 2> d0, std::array<double, 2> d1, double L) {
  const double k2 = d1[0] * d1[0] + d1[1] * d1[1];
  if (k2 == 0.0) return std::hypot(d0[0], d0[1]) * L;
  const double k = std::sqrt(k2);
  const double ts = -(d0[0] * d1[0] + d0[1] * d1[1]) / k2;  // closest approach
  const double m = std::abs(d0[0] * d1[1] - d0[1] * d1[0]) / k;
  auto F = [&](double s) {
    const double r = std::sqrt(m * m + k2 * s * s);
    return 0.5 * (s * r + (m > 0.0 ? m * m / k * std::asinh(k * s / m) : 0.0));
  };
  return F(L - ts) - F(-ts);
}

}  // namespace

double edge_jump_integral(const std::vector<Block>& blocks, const SharedEdge& e) {
  const Cell& ca = side_cell(blocks, e, false);
  const Cell& cb = side_cell(blocks, e, true);
  auto jump_vec = [&](double x, double y) {
    const auto ga = edge_side_gradient(blocks, e, false, x, y);
    const auto gb = edge_side_gradient(blocks, e, true, x, y);
    return std::array<double, 2>{ga[0] - gb[0], ga[1] - gb[1]};
  };
  // Gradients are affine when both values have total degree <= 2; along a straight edge
  // the jump is then affine in arc length and integrates in closed form.
  const bool affine_jump = ca.value.total_degree() <= 2 && cb.value.total_degree() <= 2;
  if (e.kind == SharedEdge::Kind::Vertical) {
    if (affine_jump) {
      const auto d0 = jump_vec(e.x_lo, e.y_lo);
      const auto d1 = jump_vec(e.x_lo, e.y_hi);
      const double L = e.length;
      return affine_norm_integral(d0, {(d1[0] - d0[0]) / L, (d1[1] - d0[1]) / L}, L);
    }
    return integrate_1d(
        [&](double y) {
          const auto d = jump_vec(e.x_lo, y);
          return std::hypot(d[0], d[1]);
        },
        e.y_lo, e.y_hi);
  }
  if (affine_jump && e.curve.degree() <= 1) {
    const auto d0 = jump_vec(e.x_lo, e.curve(e.x_lo));
    const auto d1 = jump_vec(e.x_hi, e.curve(e.x_hi));
    const double L = e.length;
    return affine_norm_integral(d0, {(d1[0] - d0[0]) / L, (d1[1] - d0[1]) / L}, L);
  }
  const Poly1 slope = e.curve.derivative();
  return integrate_1d(
      [&](double x) {
        const double s = slope(x);
        const auto d = jump_vec(x, e.curve(x));
        return std::hypot(d[0], d[1]) * std::sqrt(1.0 + s * s);
      },
      e.x_lo, e.x_hi);
}

AnalyticProfile::AnalyticProfile(Rect domain, BoundaryCondition bc, std::vector<Block> blocks)
    : domain_(domain), bc_(bc), blocks_(std::move(blocks)) {
  validate_blocks(domain_, blocks_);

  for (const SharedEdge& e : find_shared_edges(blocks_)) {
    // Continuity of the value across the edge.
    for (double t : {0.25, 0.5, 0.75}) {
      double x, y;
      if (e.kind == SharedEdge::Kind::Vertical) {
        x = e.x_lo;
        y = e.y_lo + t * (e.y_hi - e.y_lo);
      } else {
        x = e.x_lo + t * (e.x_hi - e.x_lo);
        y = e.curve(x);
      }
      const double va = edge_side_value(blocks_, e, false, x, y);
      const double vb = edge_side_value(blocks_, e, true, x, y);
      if (std::abs(va - vb) > 1e-9 * std::max({1.0, std::abs(va), std::abs(vb)}))
        throw std::invalid_argument("profile is discontinuous across a cell edge at (" + format_double(x) +
                                    ", " + format_double(y) + "): " + format_double(va) + " vs " +
                                    format_double(vb));
    }
    Interface itf;
    itf.edge = e;
    const auto m = e.midpoint();
    itf.grad_a = edge_side_gradient(blocks_, e, false, m[0], m[1]);
    itf.grad_b = edge_side_gradient(blocks_, e, true, m[0], m[1]);
    itf.jump_integral = edge_jump_integral(blocks_, e);
    const double gscale = std::max({1.0, std::hypot(itf.grad_a[0], itf.grad_a[1]),
                                    std::hypot(itf.grad_b[0], itf.grad_b[1])});
    if (itf.jump_integral > 1e-13 * e.length * gscale) interfaces_.push_back(itf);
  }

  if (bc_ != BoundaryCondition::None) {
    const double H = domain_.y_hi - domain_.y_lo;
    for (int k = 0; k <= 64; ++k) {
      const double y = domain_.y_lo + H * k / 64.0;
      const double v = value(domain_.x_lo, y);
      const double want = bc_ == BoundaryCondition::DirichletLeftZero ? 0.0 : y;
      if (std::abs(v - want) > 1e-12 * std::max(1.0, std::abs(want)))
        throw std::invalid_argument("profile violates " + to_string(bc_) + " at x2 = " + format_double(y));
    }
  }
}

AnalyticProfile AnalyticProfile::single_block(Rect domain, BoundaryCondition bc, std::vector<Cell> cells) {
  Block b;
  b.x_lo = domain.x_lo;
  b.x_hi = domain.x_hi;
  b.y0 = domain.y_lo;
  b.period = domain.y_hi - domain.y_lo;
  b.count = 1;
  b.cells = std::move(cells);
  return AnalyticProfile(domain, bc, {std::move(b)});
}

std::size_t AnalyticProfile::cell_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.cells.size();
  return n;
}

AnalyticProfile::Location AnalyticProfile::locate(double x1, double x2) const {
  bool found = false;
  Location best{0, 0, 0};
  double ox = 0.0, oy = 0.0;
  for (std::size_t ib = 0; ib < blocks_.size(); ++ib) {
    const Block& B = blocks_[ib];
    const double xtol = kGeomTol * std::max(1.0, std::abs(x1));
    if (x1 < B.x_lo - xtol || x1 > B.x_hi + xtol) continue;
    const double ytol = kGeomTol * std::max(1.0, std::abs(x2));
    const auto k0 = static_cast<std::int64_t>(std::floor((x2 - B.y0) / B.period));
    for (std::int64_t k = k0 - 1; k <= k0 + 1; ++k) {
      if (k < 0 || k >= B.count) continue;
      const double shift = static_cast<double>(k) * B.period;
      const double y = x2 - shift;
      for (std::size_t ic = 0; ic < B.cells.size(); ++ic) {
        const Cell& c = B.cells[ic];
        if (!c.contains(x1, y, std::max(xtol, ytol))) continue;
        const double cx = c.x_lo;
        const double cy = c.lower(c.x_lo) + shift;
        if (!found || cx < ox || (cx == ox && cy < oy)) {
          found = true;
          best = {ib, ic, k};
          ox = cx;
          oy = cy;
        }
      }
    }
  }
  if (!found)
    throw std::out_of_range("point (" + format_double(x1) + ", " + format_double(x2) + ") outside the profile");
  return best;
}

double AnalyticProfile::value(double x1, double x2) const {
  const auto loc = locate(x1, x2);
  const Block& B = blocks_[loc.block];
  const double k = static_cast<double>(loc.copy);
  return B.cells[loc.cell].value(x1, x2 - k * B.period) + k * B.drift;
}

std::array<double, 2> AnalyticProfile::gradient(double x1, double x2) const {
  const auto loc = locate(x1, x2);
  const Block& B = blocks_[loc.block];
  return B.cells[loc.cell].value.gradient(x1, x2 - static_cast<double>(loc.copy) * B.period);
}

namespace {

BoundaryCondition sum_bc(BoundaryCondition a, BoundaryCondition b) {
  using BC = BoundaryCondition;
  if (a == BC::DirichletLeftZero) return b;
  if (b == BC::DirichletLeftZero) return a;
  return BC::None;
}

std::vector<Cell> overlay(const std::vector<Cell>& as, const std::vector<Cell>& bs, double scale) {
  std::vector<Cell> out;
  for (const Cell& a : as) {
    for (const Cell& b : bs) {
      const double s = std::max(a.x_lo, b.x_lo);
      const double t = std::min(a.x_hi, b.x_hi);
      if (t - s <= kGeomTol * std::max(1.0, std::abs(t))) continue;
      std::vector<double> knots{s, t};
      for (const Poly1& d : {a.lower - b.lower, a.upper - b.upper, a.upper - b.lower, b.upper - a.lower}) {
        if (d.is_constant()) continue;
        for (double r : d.real_roots(s, t)) knots.push_back(r);
      }
      std::sort(knots.begin(), knots.end());
      for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double u = knots[k];
        const double w = knots[k + 1];
        if (w - u <= kGeomTol * std::max(1.0, std::abs(w))) continue;
        const double m = 0.5 * (u + w);
        const Poly1& lo = a.lower(m) >= b.lower(m) ? a.lower : b.lower;
        const Poly1& hi = a.upper(m) <= b.upper(m) ? a.upper : b.upper;
        if (hi(m) - lo(m) <= 1e-12 * scale) continue;
        out.push_back(Cell{u, w, lo, hi, a.value + b.value});
      }
    }
  }
  return out;
}

}  // namespace

AnalyticProfile operator+(const AnalyticProfile& a, const AnalyticProfile& b) {
  const Rect& da = a.domain();
  const Rect& db = b.domain();
  if (da.x_lo != db.x_lo || da.x_hi != db.x_hi || da.y_lo != db.y_lo || da.y_hi != db.y_hi)
    throw std::invalid_argument("profile sum: domains differ");
  if (a.blocks().size() != b.blocks().size()) throw std::invalid_argument("profile sum: block layouts differ");
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < a.blocks().size(); ++i) {
    const Block& ba = a.blocks()[i];
    const Block& bb = b.blocks()[i];
    if (std::abs(ba.x_lo - bb.x_lo) > kGeomTol || std::abs(ba.x_hi - bb.x_hi) > kGeomTol ||
        std::abs(ba.period - bb.period) > kGeomTol * ba.period || ba.count != bb.count)
      throw std::invalid_argument("profile sum: block layouts differ");
    Block s = ba;
    s.drift = ba.drift + bb.drift;
    s.cells = overlay(ba.cells, bb.cells, ba.period);
    blocks.push_back(std::move(s));
  }
  return AnalyticProfile(da, sum_bc(a.bc(), b.bc()), std::move(blocks));
}

GridField sample_profile(const AnalyticProfile& prof, int nx, int ny, BoundaryCondition bc) {
  const Rect& d = prof.domain();
  if (d.x_lo != 0.0 || d.x_hi != 1.0 || d.y_lo != 0.0 || d.y_hi != 1.0)
    throw std::invalid_argument("sample_profile requires the unit square");
  GridField g(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) g(i, j) = prof.value(g.x1(i), g.x2(j));
  if (g.satisfies(bc)) g.set_bc(bc);
  return g;
}

GridField sample_profile(const AnalyticProfile& prof, int nx, int ny) {
  return sample_profile(prof, nx, ny, prof.bc());
}

}  // namespace microlab
