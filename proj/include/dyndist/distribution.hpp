#pragma once

#include <vector>

#include "dyndist/dynamic.hpp"

namespace dyndist {

/// Compactly supported dynamic function; the pairing argument. The body
/// vanishes identically outside the support interval, which lies strictly
/// inside the open interval of definition.
class TestFn {
 public:
  TestFn(DynamicFn body, Interval support);

  const DynamicFn& body() const { return body_; }
  Interval support() const { return support_; }
  Interval interval() const { return body_.interval(); }

 private:
  DynamicFn body_;
  Interval support_;
};

/// Point part of a distribution at one location. Acts on a test function as
///   right_weight * phi(tau+) + left_weight * phi(tau-) + ∫_J phi(tau)(s) density(s) ds.
/// The density is deliberately unnormalized so products with vanishing total
/// mass stay representable.
struct Atom {
  double location = 0.0;
  double right_weight = 0.0;
  double left_weight = 0.0;
  PiecewisePoly density;  // on J; may be identically zero

  /// Action on the constant test value 1.
  double mass() const;
  bool pure_density() const;
};

/// Distribution in closed form: a regular density, a continuous integrator
/// acting through a Stieltjes pairing, and finitely many atoms.
class Distribution {
 public:
  explicit Distribution(Interval interval);
  Distribution(PiecewisePoly regular, PiecewisePoly stieltjes,
               std::vector<Atom> atoms);

  static Distribution regular(PiecewisePoly density);
  static Distribution stieltjes(PiecewisePoly integrator);

  Interval interval() const { return regular_.domain(); }
  const PiecewisePoly& regular_part() const { return regular_; }
  const PiecewisePoly& stieltjes_part() const { return stieltjes_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

 private:
  PiecewisePoly regular_;
  PiecewisePoly stieltjes_;
  std::vector<Atom> atoms_;
};

/// Value of the distribution on a test function.
double pair(const Distribution& T, const TestFn& phi);

/// Shaped delta at tau.
Distribution delta(Interval interval, double tau, const Shape& shape);
/// Two-sided point evaluation: lambda * phi(tau+) + (1-lambda) * phi(tau-).
Distribution delta_lambda(Interval interval, double tau, double lambda);

/// Product with a dynamic function, defined through the adjoint action on
/// test functions: pair(multiply(T, g), phi) == pair(T, g * phi).
Distribution multiply(const Distribution& T, const DynamicFn& g);

/// Distributional derivative. Requires absolutely continuous profiles.
Distribution derivative(const DynamicFn& f);

/// Replace every atom by the n-th term of its delta-sequence
/// n * density(n (t - tau)); the result is an ordinary function. Requires
/// pure-density atoms with disjoint windows inside the interval.
PiecewisePoly mollify(const Distribution& T, int n);

Distribution add(const Distribution& a, const Distribution& b);
Distribution scale(const Distribution& a, double s);

/// Deviation from the product rule d(fg) = df.g + f.dg, maximized over the
/// battery.
double leibniz_residual(const DynamicFn& f, const DynamicFn& g,
                        const std::vector<TestFn>& battery);

/// Per-term pairing distance between a sequence and its limit, maximized
/// over the battery.
std::vector<double> convergence_residual(const std::vector<Distribution>& seq,
                                         const Distribution& limit,
                                         const std::vector<TestFn>& battery);

/// Extensional comparison on a battery plus structural part comparison.
bool approx_equal_dist(const Distribution& a, const Distribution& b,
                       const std::vector<TestFn>& battery, double tol);

/// mul_dynamic(g, phi.body) repackaged as a test function on phi's support.
TestFn multiply_testfn(const DynamicFn& g, const TestFn& phi);

}  // namespace dyndist
