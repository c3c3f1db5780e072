#include "microlab/covering.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

namespace microlab {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

RectUnion::RectUnion(std::vector<Rect> rects) : rects_(std::move(rects)) {
  if (rects_.empty()) throw std::invalid_argument("rect union: empty");
  for (const auto& r : rects_) {
    if (!(std::isfinite(r.x_lo) && std::isfinite(r.x_hi) && std::isfinite(r.y_lo) && std::isfinite(r.y_hi)))
      throw std::invalid_argument("rect union: unbounded rectangle");
    if (!(r.x_lo < r.x_hi && r.y_lo < r.y_hi)) throw std::invalid_argument("rect union: degenerate rectangle");
  }
  bbox_ = rects_.front();
  std::vector<double> xs, ys;
  for (const auto& r : rects_) {
    bbox_.x_lo = std::min(bbox_.x_lo, r.x_lo);
    bbox_.x_hi = std::max(bbox_.x_hi, r.x_hi);
    bbox_.y_lo = std::min(bbox_.y_lo, r.y_lo);
    bbox_.y_hi = std::max(bbox_.y_hi, r.y_hi);
    xs.insert(xs.end(), {r.x_lo, r.x_hi});
    ys.insert(ys.end(), {r.y_lo, r.y_hi});
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  // Elementary cells are either inside one rectangle or outside all of them.
  for (std::size_t a = 0; a + 1 < xs.size(); ++a)
    for (std::size_t b = 0; b + 1 < ys.size(); ++b) {
      const double mx = 0.5 * (xs[a] + xs[a + 1]), my = 0.5 * (ys[b] + ys[b + 1]);
      bool in = false;
      for (const auto& r : rects_)
        if (r.x_lo < mx && mx < r.x_hi && r.y_lo < my && my < r.y_hi) in = true;
      if (!in) outside_.push_back({xs[a], xs[a + 1], ys[b], ys[b + 1]});
    }
}

double RectUnion::distance_to_complement(double x, double y) const {
  double d = std::min({x - bbox_.x_lo, bbox_.x_hi - x, y - bbox_.y_lo, bbox_.y_hi - y});
  if (d <= 0.0) return 0.0;
  for (const auto& c : outside_) {
    const double dx = std::max({0.0, c.x_lo - x, x - c.x_hi});
    const double dy = std::max({0.0, c.y_lo - y, y - c.y_hi});
    d = std::min(d, std::max(dx, dy));
    if (d <= 0.0) return 0.0;
  }
  return d;
}

bool RectUnion::meets_square(double x, double y, double l) const {
  for (const auto& r : rects_)
    if (r.x_lo < x + l && x - l < r.x_hi && r.y_lo < y + l && y - l < r.y_hi) return true;
  return false;
}

double RectUnion::area() const {
  double a = (bbox_.x_hi - bbox_.x_lo) * (bbox_.y_hi - bbox_.y_lo);
  for (const auto& c : outside_) a -= (c.x_hi - c.x_lo) * (c.y_hi - c.y_lo);
  return a;
}

std::vector<std::vector<Square>> SquareCover::families() const {
  std::vector<std::vector<Square>> out(family_palette);
  for (const auto& q : squares) out.at(q.family).push_back(q);
  return out;
}

namespace {

int family_of(int level, std::int64_t i, std::int64_t j) {
  const int k = ((level % 3) + 3) % 3;
  return k * 4 + static_cast<int>(((i % 2) + 2) % 2) * 2 + static_cast<int>(((j % 2) + 2) % 2);
}

}  // namespace

SquareCover whitney_cover(const RectUnion& omega, double delta, double min_side) {
  if (!(delta > 0.0)) throw std::invalid_argument("whitney_cover: delta must be positive");
  const Rect bb = omega.bounding_box();
  const double S0 = std::max(bb.x_hi - bb.x_lo, bb.y_hi - bb.y_lo);
  if (min_side == 0.0) min_side = std::ldexp(S0, -12);
  if (!(min_side > 0.0)) throw std::invalid_argument("whitney_cover: min_side must be positive");

  SquareCover cover{omega, delta, min_side, 12, {}};
  struct Node {
    int level;
    std::int64_t i, j;
  };
  std::vector<Node> stack{{0, 0, 0}};
  while (!stack.empty()) {
    const Node n = stack.back();
    stack.pop_back();
    const double s = std::ldexp(S0, -n.level);
    const double cx = bb.x_lo + (n.i + 0.5) * s, cy = bb.y_lo + (n.j + 0.5) * s;
    if (!omega.meets_square(cx, cy, 0.5 * s)) continue;
    const double dist = std::max(0.0, omega.distance_to_complement(cx, cy) - 0.5 * s);
    if (dist >= 3.0 * s) {
      // Accepted half-square Q; refine uniformly until the doubled square fits delta.
      int m = 0;
      while (std::ldexp(2.0 * s, -m) > delta) ++m;
      const std::int64_t k = std::int64_t{1} << m;
      for (std::int64_t a = 0; a < k; ++a)
        for (std::int64_t b = 0; b < k; ++b) {
          const int lev = n.level + m;
          const std::int64_t ii = n.i * k + a, jj = n.j * k + b;
          const double ss = std::ldexp(S0, -lev);
          cover.squares.push_back(Square{bb.x_lo + (ii + 0.5) * ss, bb.y_lo + (jj + 0.5) * ss, ss, lev, ii, jj,
                                         family_of(lev, ii, jj)});
        }
      continue;
    }
    if (0.5 * s < min_side) continue;  // truncated near the boundary
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) stack.push_back({n.level + 1, 2 * n.i + a, 2 * n.j + b});
  }
  std::sort(cover.squares.begin(), cover.squares.end(), [](const Square& p, const Square& q) {
    return std::tie(p.level, p.j, p.i) < std::tie(q.level, q.j, q.i);
  });
  return cover;
}

using BPoint = bg::model::point<double, 2, bg::cs::cartesian>;
using BBox = bg::model::box<BPoint>;
using Entry = std::pair<BBox, std::size_t>;

struct CoverIndex::Impl {
  bgi::rtree<Entry, bgi::quadratic<16>> tree;
};

CoverIndex::CoverIndex(const SquareCover& cover) : cover_(cover), impl_(std::make_unique<Impl>()) {
  std::vector<Entry> entries;
  entries.reserve(cover.squares.size());
  for (std::size_t k = 0; k < cover.squares.size(); ++k) {
    const auto& q = cover.squares[k];
    entries.emplace_back(BBox(BPoint(q.cx - q.l, q.cy - q.l), BPoint(q.cx + q.l, q.cy + q.l)), k);
  }
  impl_->tree = bgi::rtree<Entry, bgi::quadratic<16>>(entries.begin(), entries.end());
}

CoverIndex::~CoverIndex() = default;

std::size_t CoverIndex::size() const { return cover_.squares.size(); }

std::vector<std::size_t> CoverIndex::intersecting(std::size_t q) const {
  const auto& s = cover_.squares.at(q);
  std::vector<Entry> hits;
  impl_->tree.query(bgi::intersects(BBox(BPoint(s.cx - s.l, s.cy - s.l), BPoint(s.cx + s.l, s.cy + s.l))),
                    std::back_inserter(hits));
  std::vector<std::size_t> out;
  for (const auto& [box, k] : hits) {
    const auto& t = cover_.squares[k];
    // Open squares: touching boundaries do not count.
    if (std::abs(t.cx - s.cx) < t.l + s.l && std::abs(t.cy - s.cy) < t.l + s.l) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> CoverIndex::neighbours(std::size_t q, int k) const {
  if (q >= size()) throw std::out_of_range("neighbours: square index out of range");
  if (k < 1) throw std::out_of_range("neighbours: k must be >= 1");
  std::set<std::size_t> seen{q};
  std::vector<std::size_t> frontier{q};
  for (int step = 0; step < k; ++step) {
    std::vector<std::size_t> next;
    for (std::size_t f : frontier)
      for (std::size_t n : intersecting(f))
        if (seen.insert(n).second) next.push_back(n);
    frontier = std::move(next);
  }
  // q meets itself, so it is always part of N_1(q).
  return {seen.begin(), seen.end()};
}

std::optional<std::size_t> CoverIndex::half_square_containing(double x, double y) const {
  std::vector<Entry> hits;
  impl_->tree.query(bgi::intersects(BPoint(x, y)), std::back_inserter(hits));
  for (const auto& [box, k] : hits) {
    const auto& q = cover_.squares[k];
    if (std::abs(x - q.cx) <= 0.5 * q.l && std::abs(y - q.cy) <= 0.5 * q.l) return k;
  }
  return std::nullopt;
}

std::vector<Square> neighbours(const SquareCover& cover, const Square& q, int k) {
  std::size_t idx = cover.squares.size();
  for (std::size_t n = 0; n < cover.squares.size(); ++n) {
    const auto& s = cover.squares[n];
    if (s.cx == q.cx && s.cy == q.cy && s.l == q.l) {
      idx = n;
      break;
    }
  }
  if (idx == cover.squares.size()) throw std::invalid_argument("neighbours: square is not in the cover");
  CoverIndex index(cover);
  std::vector<Square> out;
  for (std::size_t n : index.neighbours(idx, k)) out.push_back(cover.squares[n]);
  return out;
}

CoverReport verify_cover(const SquareCover& cover, std::size_t samples, std::uint64_t seed) {
  CoverReport rep;
  rep.N = cover.family_palette;
  rep.squares = cover.squares.size();
  if (cover.squares.empty()) {
    rep.failures.push_back("empty cover");
    rep.coverage_ok = false;
  }
  {
    std::vector<int> used(cover.family_palette, 0);
    for (const auto& q : cover.squares) {
      if (q.family < 0 || q.family >= cover.family_palette) {
        rep.failures.push_back("family index out of palette");
        rep.disjoint_ok = false;
        continue;
      }
      used[q.family] = 1;
    }
    for (int u : used) rep.nonempty_families += u;
  }
  for (const auto& q : cover.squares) {
    if (cover.omega.distance_to_complement(q.cx, q.cy) < q.l) {
      if (rep.containment_ok)
        rep.failures.push_back("square at (" + std::to_string(q.cx) + ", " + std::to_string(q.cy) +
                               ") leaves omega");
      rep.containment_ok = false;
    }
    if (2.0 * q.l > cover.delta) {
      if (rep.side_ok) rep.failures.push_back("square side exceeds delta");
      rep.side_ok = false;
    }
  }

  CoverIndex index(cover);
  const std::size_t n = cover.squares.size();
  std::vector<std::vector<std::size_t>> n1(n);
  for (std::size_t k = 0; k < n; ++k) {
    n1[k] = index.intersecting(k);
    const auto& q = cover.squares[k];
    for (std::size_t m : n1[k]) {
      if (m == k) continue;
      const auto& r = cover.squares[m];
      rep.c = std::max(rep.c, r.l / q.l);
      if (r.family == q.family && rep.disjoint_ok) {
        rep.disjoint_ok = false;
        rep.failures.push_back("family " + std::to_string(q.family) + " has overlapping squares");
      }
    }
  }
  if (rep.c == 0.0 && n > 0) rep.c = 1.0;
  if (rep.c > rep.c_bound) {
    rep.comparable_ok = false;
    rep.failures.push_back("neighbour size ratio " + std::to_string(rep.c) + " exceeds " +
                           std::to_string(rep.c_bound));
  }

  // Constants a, b over N_1 .. N_3 via breadth-first closure of the intersection graph.
  for (std::size_t k = 0; k < n; ++k) {
    const auto& q = cover.squares[k];
    std::vector<std::size_t> layer{k};
    std::set<std::size_t> seen{k};
    for (int step = 1; step <= 3; ++step) {
      std::vector<std::size_t> next;
      for (std::size_t f : layer)
        for (std::size_t m : n1[f])
          if (seen.insert(m).second) next.push_back(m);
      layer = std::move(next);
      double reach = 0.0;
      for (std::size_t m : seen) {
        const auto& r = cover.squares[m];
        const double gap = std::max(0.0, std::max(std::abs(r.cx - q.cx), std::abs(r.cy - q.cy)) - r.l - q.l);
        reach = std::max(reach, (gap + r.l) / q.l);
      }
      rep.a = std::max(rep.a, std::pow(reach, 1.0 / step));
      rep.b = std::max(rep.b, std::pow(static_cast<double>(seen.size()), 1.0 / step));
    }
  }

  // (i) half-squares cover the part of omega away from the truncation zone.
  const Rect bb = cover.omega.bounding_box();
  const double margin = 9.0 * cover.min_side;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(bb.x_lo, bb.x_hi), uy(bb.y_lo, bb.y_hi);
  std::size_t attempts = 0;
  while (rep.samples < samples && attempts < 1000 * samples) {
    ++attempts;
    const double x = ux(rng), y = uy(rng);
    if (cover.omega.distance_to_complement(x, y) < margin) continue;
    ++rep.samples;
    if (!index.half_square_containing(x, y)) {
      if (rep.uncovered == 0)
        rep.failures.push_back("point (" + std::to_string(x) + ", " + std::to_string(y) + ") not covered");
      ++rep.uncovered;
    }
  }
  if (rep.uncovered > 0 || (samples > 0 && rep.samples == 0)) rep.coverage_ok = false;
  if (samples > 0 && rep.samples == 0) rep.failures.push_back("no sample points away from the boundary");
  rep.passed = rep.containment_ok && rep.side_ok && rep.disjoint_ok && rep.comparable_ok && rep.coverage_ok &&
               std::isfinite(rep.a) && std::isfinite(rep.b) && std::isfinite(rep.c);
  return rep;
}

}  // namespace microlab
