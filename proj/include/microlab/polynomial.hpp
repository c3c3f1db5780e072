#pragma once

#include <array>
#include <vector>

namespace microlab {

/// Univariate polynomial in ascending-coefficient form, c[0] + c[1] x + ...
class Poly1 {
 public:
  Poly1() = default;
  explicit Poly1(std::vector<double> coeffs);

  static Poly1 constant(double c) { return Poly1({c}); }
  static Poly1 linear(double c0, double c1) { return Poly1({c0, c1}); }

  double operator()(double x) const;
  const std::vector<double>& coeffs() const { return c_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  double coeff(int i) const;

  Poly1 derivative() const;
  Poly1 antiderivative() const;
  double integrate(double a, double b) const;
  /// p(x - s)
  Poly1 shifted(double s) const;

  /// Real roots in [a, b], sorted, duplicates merged.
  std::vector<double> real_roots(double a, double b) const;
  /// Minimum and maximum over [a, b] (exact up to root refinement).
  double min_on(double a, double b) const;
  double max_on(double a, double b) const;

  bool approx_equal(const Poly1& o, double tol = 1e-12) const;

  Poly1& operator+=(const Poly1& o);
  Poly1& operator-=(const Poly1& o);
  Poly1& operator*=(double s);
  friend Poly1 operator+(Poly1 a, const Poly1& b) { return a += b; }
  friend Poly1 operator-(Poly1 a, const Poly1& b) { return a -= b; }
  friend Poly1 operator*(Poly1 a, double s) { return a *= s; }
  friend Poly1 operator*(double s, Poly1 a) { return a *= s; }
  friend Poly1 operator*(const Poly1& a, const Poly1& b);

 private:
  void trim();
  std::vector<double> c_;
};

/// Bivariate polynomial sum_{i,j} c[i][j] x1^i x2^j.
class Poly2 {
 public:
  Poly2() = default;
  explicit Poly2(std::vector<std::vector<double>> coeffs);

  /// a + b x1 + c x2
  static Poly2 affine(double a, double b, double c);
  static Poly2 in_x1(const Poly1& p);
  static Poly2 in_x2(const Poly1& p);

  double operator()(double x1, double x2) const;
  std::array<double, 2> gradient(double x1, double x2) const;
  /// {d11, d12, d22}
  std::array<double, 3> hessian(double x1, double x2) const;

  Poly2 d1() const;
  Poly2 d2() const;
  /// x2 -> curve(x1), giving a polynomial in x1.
  Poly1 on_curve(const Poly1& curve) const;
  /// fixed x1, giving a polynomial in x2.
  Poly1 at_x1(double x1) const;
  /// p(x1 - s1, x2 - s2)
  Poly2 shifted(double s1, double s2) const;

  int degree_x1() const;
  int degree_x2() const;
  /// Largest i + j with a nonzero coefficient; -1 for zero.
  int total_degree() const;
  bool is_affine() const;
  /// degree <= 1 in each variable separately.
  bool is_bilinear() const;
  double coeff(int i, int j) const;
  const std::vector<std::vector<double>>& coeffs() const { return c_; }

  Poly2& operator+=(const Poly2& o);
  Poly2& operator-=(const Poly2& o);
  Poly2& operator*=(double s);
  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
  friend Poly2 operator*(Poly2 a, double s) { return a *= s; }
  friend Poly2 operator*(double s, Poly2 a) { return a *= s; }

 private:
  void trim();
  std::vector<std::vector<double>> c_;
};

}  // namespace microlab
