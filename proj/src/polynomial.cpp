#include "microlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace microlab {

namespace {

std::vector<double> binomial_row(int n) {
  std::vector<double> row(n + 1, 1.0);
  for (int k = 1; k < n; ++k) {
    row[k] = row[k - 1] * static_cast<double>(n - k + 1) / static_cast<double>(k);
  }
  return row;
}

double bisect(const Poly1& p, double lo, double hi) {
  double flo = p(lo);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Poly1::Poly1(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

void Poly1::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Poly1::coeff(int i) const {
  return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : 0.0;
}

double Poly1::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly1 Poly1::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
  return Poly1(std::move(d));
}

Poly1 Poly1::antiderivative() const {
  std::vector<double> a(c_.size() + 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / static_cast<double>(i + 1);
  return Poly1(std::move(a));
}

double Poly1::integrate(double a, double b) const {
  const Poly1 anti = antiderivative();
  return anti(b) - anti(a);
}

Poly1 Poly1::shifted(double s) const {
  // sum_k c_k (x - s)^k
  std::vector<double> out(c_.size(), 0.0);
  for (std::size_t k = 0; k < c_.size(); ++k) {
    const auto binom = binomial_row(static_cast<int>(k));
    for (std::size_t j = 0; j <= k; ++j) {
      out[j] += c_[k] * binom[j] * std::pow(-s, static_cast<double>(k - j));
    }
  }
  return Poly1(std::move(out));
}

std::vector<double> Poly1::real_roots(double a, double b) const {
  std::vector<double> roots;
  if (a > b || c_.size() <= 1) return roots;
  if (c_.size() == 2) {
    const double r = -c_[0] / c_[1];
    if (r >= a && r <= b) roots.push_back(r);
    return roots;
  }
  double scale = 0.0;
  for (double c : c_) scale = std::max(scale, std::abs(c));
  const double zero_tol = 1e-14 * scale * std::max(1.0, std::pow(std::max(std::abs(a), std::abs(b)), degree()));

  std::vector<double> knots{a};
  for (double r : derivative().real_roots(a, b)) knots.push_back(r);
  knots.push_back(b);

  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double l = knots[k];
    const double r = knots[k + 1];
    const double fl = (*this)(l);
    const double fr = (*this)(r);
    if (std::abs(fl) <= zero_tol) {
      roots.push_back(l);
    } else if (std::abs(fr) > zero_tol && (fl < 0.0) != (fr < 0.0)) {
      roots.push_back(bisect(*this, l, r));
    }
  }
  if (std::abs((*this)(b)) <= zero_tol) roots.push_back(b);

  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    if (merged.empty() || r - merged.back() > 1e-13 * std::max(1.0, std::abs(r))) merged.push_back(r);
  }
  return merged;
}

double Poly1::min_on(double a, double b) const {
  double m = std::min((*this)(a), (*this)(b));
  for (double r : derivative().real_roots(a, b)) m = std::min(m, (*this)(r));
  return m;
}

double Poly1::max_on(double a, double b) const {
  double m = std::max((*this)(a), (*this)(b));
  for (double r : derivative().real_roots(a, b)) m = std::max(m, (*this)(r));
  return m;
}

bool Poly1::approx_equal(const Poly1& o, double tol) const {
  const std::size_t n = std::max(c_.size(), o.c_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = coeff(static_cast<int>(i));
    const double y = o.coeff(static_cast<int>(i));
    if (std::abs(x - y) > tol * std::max({1.0, std::abs(x), std::abs(y)})) return false;
  }
  return true;
}

Poly1& Poly1::operator+=(const Poly1& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly1& Poly1::operator-=(const Poly1& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly1& Poly1::operator*=(double s) {
  for (double& c : c_) c *= s;
  trim();
  return *this;
}

Poly1 operator*(const Poly1& a, const Poly1& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  return Poly1(std::move(out));
}

// ---------------------------------------------------------------------------

Poly2::Poly2(std::vector<std::vector<double>> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly2 Poly2::affine(double a, double b, double c) {
  return Poly2({{a, c}, {b}});
}

Poly2 Poly2::in_x1(const Poly1& p) {
  std::vector<std::vector<double>> c;
  for (double v : p.coeffs()) c.push_back({v});
  return Poly2(std::move(c));
}

Poly2 Poly2::in_x2(const Poly1& p) {
  if (p.is_zero()) return {};
  return Poly2({p.coeffs()});
}

void Poly2::trim() {
  for (auto& row : c_)
    while (!row.empty() && row.back() == 0.0) row.pop_back();
  while (!c_.empty() && c_.back().empty()) c_.pop_back();
}

double Poly2::coeff(int i, int j) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0.0;
  const auto& row = c_[i];
  return (j >= 0 && j < static_cast<int>(row.size())) ? row[j] : 0.0;
}

double Poly2::operator()(double x1, double x2) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    double inner = 0.0;
    for (auto jt = it->rbegin(); jt != it->rend(); ++jt) inner = inner * x2 + *jt;
    acc = acc * x1 + inner;
  }
  return acc;
}

Poly2 Poly2::d1() const {
  if (c_.size() <= 1) return {};
  std::vector<std::vector<double>> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) {
    d[i - 1] = c_[i];
    for (double& v : d[i - 1]) v *= static_cast<double>(i);
  }
  return Poly2(std::move(d));
}

Poly2 Poly2::d2() const {
  std::vector<std::vector<double>> d(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    for (std::size_t j = 1; j < c_[i].size(); ++j) d[i].push_back(c_[i][j] * static_cast<double>(j));
  }
  return Poly2(std::move(d));
}

std::array<double, 2> Poly2::gradient(double x1, double x2) const {
  return {d1()(x1, x2), d2()(x1, x2)};
}

std::array<double, 3> Poly2::hessian(double x1, double x2) const {
  const Poly2 p1 = d1();
  return {p1.d1()(x1, x2), p1.d2()(x1, x2), d2().d2()(x1, x2)};
}

Poly1 Poly2::on_curve(const Poly1& curve) const {
  Poly1 result;
  Poly1 x1_pow = Poly1::constant(1.0);
  const Poly1 x1 = Poly1::linear(0.0, 1.0);
  for (const auto& row : c_) {
    Poly1 inner;
    Poly1 curve_pow = Poly1::constant(1.0);
    for (double v : row) {
      inner += curve_pow * v;
      curve_pow = curve_pow * curve;
    }
    result += x1_pow * inner;
    x1_pow = x1_pow * x1;
  }
  return result;
}

Poly1 Poly2::at_x1(double x1) const {
  Poly1 result;
  double pw = 1.0;
  for (const auto& row : c_) {
    result += Poly1(row) * pw;
    pw *= x1;
  }
  return result;
}

Poly2 Poly2::shifted(double s1, double s2) const {
  // Shift in x2 per row, then in x1 per column.
  std::vector<std::vector<double>> rows(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) rows[i] = Poly1(c_[i]).shifted(s2).coeffs();
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.size());
  std::vector<std::vector<double>> out(c_.size(), std::vector<double>(width, 0.0));
  for (std::size_t j = 0; j < width; ++j) {
    std::vector<double> col(c_.size(), 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) col[i] = j < rows[i].size() ? rows[i][j] : 0.0;
    const auto shifted_col = Poly1(col).shifted(s1).coeffs();
    for (std::size_t i = 0; i < shifted_col.size(); ++i) out[i][j] = shifted_col[i];
  }
  return Poly2(std::move(out));
}

int Poly2::degree_x1() const { return static_cast<int>(c_.size()) - 1; }

int Poly2::degree_x2() const {
  int d = -1;
  for (const auto& row : c_) d = std::max(d, static_cast<int>(row.size()) - 1);
  return d;
}

int Poly2::total_degree() const {
  int d = -1;
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < c_[i].size(); ++j)
      if (c_[i][j] != 0.0) d = std::max(d, static_cast<int>(i + j));
  return d;
}

bool Poly2::is_affine() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < c_[i].size(); ++j)
      if (i + j > 1 && c_[i][j] != 0.0) return false;
  return true;
}

bool Poly2::is_bilinear() const { return degree_x1() <= 1 && degree_x2() <= 1; }

Poly2& Poly2::operator+=(const Poly2& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) {
    if (o.c_[i].size() > c_[i].size()) c_[i].resize(o.c_[i].size(), 0.0);
    for (std::size_t j = 0; j < o.c_[i].size(); ++j) c_[i][j] += o.c_[i][j];
  }
  trim();
  return *this;
}

Poly2& Poly2::operator-=(const Poly2& o) { return *this += o * -1.0; }

Poly2& Poly2::operator*=(double s) {
  for (auto& row : c_)
    for (double& v : row) v *= s;
  trim();
  return *this;
}

}  // namespace microlab
