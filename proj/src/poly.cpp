#include "dyndist/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "dyndist/errors.hpp"

namespace dyndist {

namespace {

void strip_trailing_zeros(std::vector<double>& c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
}

}  // namespace

Poly::Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  strip_trailing_zeros(c_);
}

Poly Poly::constant(double c) { return Poly(std::vector<double>{c}); }

Poly Poly::x() { return Poly(std::vector<double>{0.0, 1.0}); }

Poly Poly::linear(double c0, double c1) {
  return Poly(std::vector<double>{c0, c1});
}

double Poly::eval(double t) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator-(const Poly& a) {
  std::vector<double> c = a.c_;
  for (double& v : c) v = -v;
  return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  if (a.degree() + b.degree() > kMaxPieceDegree)
    throw DegreeCapError("polynomial product exceeds degree cap " +
                         std::to_string(kMaxPieceDegree));
  std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Poly(std::move(c));
}

Poly operator*(double s, const Poly& a) {
  std::vector<double> c = a.c_;
  for (double& v : c) v *= s;
  return Poly(std::move(c));
}

Poly derivative(const Poly& p) {
  const auto& c = p.coeffs();
  if (c.size() <= 1) return Poly();
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i)
    d[i - 1] = static_cast<double>(i) * c[i];
  return Poly(std::move(d));
}

Poly antiderivative(const Poly& p) {
  const auto& c = p.coeffs();
  if (c.empty()) return Poly();
  std::vector<double> a(c.size() + 1, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i)
    a[i + 1] = c[i] / static_cast<double>(i + 1);
  return Poly(std::move(a));
}

Poly compose_affine(const Poly& p, double a, double b) {
  // Horner in polynomial arithmetic: result = (...(c_n*(a t + b) + c_{n-1})...).
  const auto& c = p.coeffs();
  if (c.empty()) return Poly();
  Poly lin = Poly::linear(b, a);
  Poly acc = Poly::constant(c.back());
  for (auto it = c.rbegin() + 1; it != c.rend(); ++it) {
    // Manual multiply to avoid the degree-cap check; composition does not
    // change the degree.
    const auto& ac = acc.coeffs();
    std::vector<double> next(ac.size() + 1, 0.0);
    for (std::size_t i = 0; i < ac.size(); ++i) {
      next[i] += ac[i] * b;
      next[i + 1] += ac[i] * a;
    }
    next[0] += *it;
    acc = Poly(std::move(next));
  }
  return acc;
}

double max_abs_coeff(const Poly& p) {
  double m = 0.0;
  for (double v : p.coeffs()) m = std::max(m, std::abs(v));
  return m;
}

bool approx_equal(const Poly& a, const Poly& b, double atol) {
  return max_abs_coeff(a - b) <= atol;
}

std::vector<double> real_roots_in(const Poly& p, double lo, double hi) {
  std::vector<double> coeffs = p.coeffs();
  // Trim a numerically negligible leading coefficient so the companion
  // matrix stays well conditioned.
  double scale = max_abs_coeff(p);
  if (scale == 0.0) return {};
  while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-13 * scale)
    coeffs.pop_back();

  const int deg = static_cast<int>(coeffs.size()) - 1;
  std::vector<double> roots;
  if (deg <= 0) return {};
  if (deg == 1) {
    roots.push_back(-coeffs[0] / coeffs[1]);
  } else if (deg == 2) {
    const double a = coeffs[2], b = coeffs[1], c = coeffs[0];
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
      roots.push_back(q / a);
      if (q != 0.0) roots.push_back(c / q);
    }
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i)
      companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const auto vals = solver.eigenvalues();
    for (int i = 0; i < vals.size(); ++i) {
      if (std::abs(vals[i].imag()) <= 1e-8 * (1.0 + std::abs(vals[i].real())))
        roots.push_back(vals[i].real());
    }
    // Newton polish.
    Poly dp = derivative(p);
    for (double& r : roots) {
      for (int it = 0; it < 3; ++it) {
        const double d = dp.eval(r);
        if (d == 0.0) break;
        r -= p.eval(r) / d;
      }
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> inside;
  const double tol = 1e-12 * (std::abs(hi - lo) + 1.0);
  for (double r : roots) {
    if (r <= lo + tol || r >= hi - tol) continue;
    if (!inside.empty() && r - inside.back() < tol) continue;
    inside.push_back(r);
  }
  return inside;
}

}  // namespace dyndist
