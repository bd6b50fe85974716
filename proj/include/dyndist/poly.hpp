#pragma once

#include <vector>

namespace dyndist {

// Hard cap on piece degree; repeated products must fail loudly instead of
// growing without bound.
inline constexpr int kMaxPieceDegree = 16;

/// Dense univariate polynomial with coefficients in ascending degree.
/// Canonical form strips trailing zero coefficients; the zero polynomial
/// is represented by an empty coefficient list.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<double> coeffs);

  static Poly constant(double c);
  /// The monomial t.
  static Poly x();
  /// c0 + c1*t.
  static Poly linear(double c0, double c1);

  const std::vector<double>& coeffs() const { return c_; }
  /// Degree of the polynomial; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  double eval(double t) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a);
  /// Throws DegreeCapError if the product degree exceeds kMaxPieceDegree.
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(double s, const Poly& a);

  bool operator==(const Poly& other) const { return c_ == other.c_; }

 private:
  std::vector<double> c_;
};

Poly derivative(const Poly& p);
/// Antiderivative with zero constant term.
Poly antiderivative(const Poly& p);
/// Coefficients of p(a*t + b).
Poly compose_affine(const Poly& p, double a, double b);

double max_abs_coeff(const Poly& p);
bool approx_equal(const Poly& a, const Poly& b, double atol);

/// Real roots of p inside the open interval (lo, hi), ascending, deduplicated.
/// Uses closed forms up to degree two and companion-matrix eigenvalues above.
std::vector<double> real_roots_in(const Poly& p, double lo, double hi);

}  // namespace dyndist
