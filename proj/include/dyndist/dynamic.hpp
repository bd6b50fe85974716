#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dyndist/piecewise.hpp"

namespace dyndist {

/// Fast-scale reference interval J = [-1/2, 1/2] carrying transition
/// profiles and shape densities.
inline constexpr Interval kProfileDomain{-0.5, 0.5};

/// Absolute tolerance used by the construction-time matching assertions.
inline constexpr double kMatchTol = 1e-12;

/// Transition profile: a function on J describing how a value is traversed
/// at a single point of the slow scale. Profiles produced by the canonical
/// embedding of a jump are two-valued steps and fail continuous().
class Profile {
 public:
  explicit Profile(PiecewisePoly curve);

  static Profile from_poly(const Poly& p);
  static Profile constant(double c);
  /// left_value on [-1/2, 0), right_value on (0, 1/2].
  static Profile step(double left_value, double right_value);

  const PiecewisePoly& curve() const { return curve_; }
  double left_value() const;
  double right_value() const;
  /// Absolutely continuous representative (no interior jump).
  bool continuous() const;
  double variation() const { return total_variation_pw(curve_); }

 private:
  PiecewisePoly curve_;
};

Profile mul_profiles(const Profile& a, const Profile& b);

/// Normalized density on J: integrates to one.
class Shape {
 public:
  explicit Shape(PiecewisePoly density);
  static Shape from_poly(const Poly& p);
  const PiecewisePoly& density() const { return density_; }

 private:
  PiecewisePoly density_;
};

Shape uniform_shape();
/// 2s + 1 on J.
Shape ramp_shape();
/// 3/2 - 6 s^2 on J.
Shape quadratic_shape();
/// Piecewise-constant shape with mass c on (0, 1/2) and 1-c on (-1/2, 0).
Shape split_shape(double right_mass);

/// Function of bounded variation together with a transition profile at each
/// of its discontinuity points (and possibly at continuity points, where the
/// profile forms a closed excursion). Construction enforces that profile
/// endpoints match the one-sided limits of the ordinary part and that every
/// jump of the ordinary part carries a profile.
class DynamicFn {
 public:
  explicit DynamicFn(PiecewisePoly ordinary);
  DynamicFn(PiecewisePoly ordinary, std::map<double, Profile> profiles);

  Interval interval() const { return ordinary_.domain(); }
  const PiecewisePoly& ordinary() const { return ordinary_; }
  const std::map<double, Profile>& profiles() const { return profiles_; }

  const Profile* profile_at(double tau) const;
  /// Dynamic value at tau: the stored profile, or the step/constant
  /// interpolant of the one-sided limits when none is stored.
  Profile dynamic_value(double tau) const;
  /// All profiles absolutely continuous (differentiable representative).
  bool smooth_profiles() const;

 private:
  PiecewisePoly ordinary_;
  std::map<double, Profile> profiles_;
};

/// Right limit minus left limit of the ordinary part at an interior point.
double jump(const DynamicFn& f, double tau);

PiecewisePoly ordinary_part(const DynamicFn& f);

/// Pointwise product; profiles of the result are products of the two
/// dynamic values at every profiled point of either factor.
DynamicFn mul_dynamic(const DynamicFn& f, const DynamicFn& g);
DynamicFn scale_dynamic(const DynamicFn& f, double s);

struct JordanDecomposition {
  PiecewisePoly continuous;
  std::vector<std::pair<double, double>> jumps;  // (location, jump)
};

/// Split into a continuous part anchored at the left limit plus unit steps
/// weighted by the jumps.
JordanDecomposition jordan_decompose(const PiecewisePoly& f);

/// Canonical inclusion of a regulated function: each discontinuity receives
/// the two-valued step profile of its one-sided limits.
DynamicFn embed_regulated(const PiecewisePoly& f);

/// n-th term of the sequential representation of a profile concentrated at
/// tau: profile(n (t - tau)) on the width-1/n window, zero outside.
PiecewisePoly sequential_representation(const Profile& profile, double tau,
                                        int n, Interval interval);

/// Variation of the continuous part plus the variation of every profile.
double total_variation_dyn(const DynamicFn& f);
/// |f(a+)| + ||continuous part||_BV + sum of profile variations.
double sbv_norm(const DynamicFn& f);

/// Unit step at tau with a prescribed transition profile (endpoints 0 and 1).
DynamicFn theta_dynamic(Interval interval, double tau, Profile transition);
/// Plain unit step at tau, embedded with its two-valued step profile.
DynamicFn theta_step(Interval interval, double tau);

bool approx_equal_dyn(const DynamicFn& f, const DynamicFn& g, double atol);

}  // namespace dyndist
