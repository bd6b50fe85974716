#include "dyndist/dynamic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyndist/errors.hpp"

namespace dyndist {

namespace {

double match_tol(double a, double b) {
  return kMatchTol * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_profile_domain(const PiecewisePoly& curve) {
  const Interval dom = curve.domain();
  if (std::abs(dom.lo - kProfileDomain.lo) > 1e-12 ||
      std::abs(dom.hi - kProfileDomain.hi) > 1e-12)
    throw DomainError("profile must live on [-1/2, 1/2]");
}

// A profile is redundant when it coincides with the interpolant that the
// embedding rule would regenerate from the ordinary one-sided limits.
bool profile_is_redundant(const Profile& prof, double left, double right) {
  if (std::abs(left - right) > match_tol(left, right)) return false;
  const PiecewisePoly& c = prof.curve();
  for (std::size_t k = 0; k < c.piece_count(); ++k) {
    Poly diff = c.piece_local(k) - Poly::constant(left);
    if (max_abs_coeff(diff) > 1e-13 * std::max(1.0, std::abs(left)))
      return false;
  }
  return true;
}

}  // namespace

Profile::Profile(PiecewisePoly curve) : curve_(std::move(curve)) {
  check_profile_domain(curve_);
}

Profile Profile::from_poly(const Poly& p) {
  return Profile(PiecewisePoly::from_poly(kProfileDomain, p));
}

Profile Profile::constant(double c) { return from_poly(Poly::constant(c)); }

Profile Profile::step(double left_value, double right_value) {
  return Profile(
      PiecewisePoly::step(kProfileDomain, 0.0, left_value, right_value));
}

double Profile::left_value() const {
  return eval_side(curve_, kProfileDomain.lo, Side::right);
}

double Profile::right_value() const {
  return eval_side(curve_, kProfileDomain.hi, Side::left);
}

bool Profile::continuous() const {
  return is_continuous_pw(curve_, 1e-12 * std::max(1.0, max_abs_coeff(curve_)));
}

Profile mul_profiles(const Profile& a, const Profile& b) {
  return Profile(multiply_pw(a.curve(), b.curve()));
}

Shape::Shape(PiecewisePoly density) : density_(std::move(density)) {
  check_profile_domain(density_);
  const double mass = integrate(density_);
  if (std::abs(mass - 1.0) > 1e-12)
    throw NormalizationError("shape density must integrate to one, got " +
                             std::to_string(mass));
}

Shape Shape::from_poly(const Poly& p) {
  return Shape(PiecewisePoly::from_poly(kProfileDomain, p));
}

Shape uniform_shape() { return Shape::from_poly(Poly::constant(1.0)); }

Shape ramp_shape() { return Shape::from_poly(Poly::linear(1.0, 2.0)); }

Shape quadratic_shape() {
  return Shape::from_poly(Poly(std::vector<double>{1.5, 0.0, -6.0}));
}

Shape split_shape(double right_mass) {
  return Shape(PiecewisePoly::step(kProfileDomain, 0.0,
                                   2.0 * (1.0 - right_mass), 2.0 * right_mass));
}

DynamicFn::DynamicFn(PiecewisePoly ordinary)
    : DynamicFn(std::move(ordinary), {}) {}

DynamicFn::DynamicFn(PiecewisePoly ordinary, std::map<double, Profile> profiles)
    : ordinary_(std::move(ordinary)), profiles_(std::move(profiles)) {
  const Interval dom = ordinary_.domain();
  for (const auto& [tau, prof] : profiles_) {
    if (!(dom.lo < tau && tau < dom.hi))
      throw DomainError("profile location outside the open interval");
    const double left = eval_side(ordinary_, tau, Side::left);
    const double right = eval_side(ordinary_, tau, Side::right);
    if (std::abs(prof.left_value() - left) > match_tol(prof.left_value(), left) ||
        std::abs(prof.right_value() - right) >
            match_tol(prof.right_value(), right))
      throw ValidationError(
          "profile endpoints must match the one-sided limits at " +
          std::to_string(tau));
  }
  // Every jump of the ordinary part needs a transition profile.
  for (const auto& [tau, sigma] : interior_jumps(
           ordinary_, kMatchTol * std::max(1.0, max_abs_coeff(ordinary_)))) {
    (void)sigma;
    if (!profile_at(tau))
      throw ValidationError("discontinuity at " + std::to_string(tau) +
                            " carries no transition profile");
  }
}

const Profile* DynamicFn::profile_at(double tau) const {
  const double tol = ordinary_.merge_tol();
  auto it = profiles_.lower_bound(tau - tol);
  if (it != profiles_.end() && std::abs(it->first - tau) <= tol)
    return &it->second;
  return nullptr;
}

Profile DynamicFn::dynamic_value(double tau) const {
  if (const Profile* p = profile_at(tau)) return *p;
  const Interval dom = ordinary_.domain();
  const double left = tau > dom.lo ? eval_side(ordinary_, tau, Side::left)
                                   : eval_side(ordinary_, tau, Side::right);
  const double right = tau < dom.hi ? eval_side(ordinary_, tau, Side::right)
                                    : eval_side(ordinary_, tau, Side::left);
  if (std::abs(left - right) <= match_tol(left, right))
    return Profile::constant(right);
  return Profile::step(left, right);
}

bool DynamicFn::smooth_profiles() const {
  for (const auto& [tau, prof] : profiles_) {
    (void)tau;
    if (!prof.continuous()) return false;
  }
  return true;
}

double jump(const DynamicFn& f, double tau) {
  const Interval dom = f.interval();
  if (!(dom.lo < tau && tau < dom.hi))
    throw DomainError("jump requested outside the open interval");
  return eval_side(f.ordinary(), tau, Side::right) -
         eval_side(f.ordinary(), tau, Side::left);
}

PiecewisePoly ordinary_part(const DynamicFn& f) { return f.ordinary(); }

DynamicFn mul_dynamic(const DynamicFn& f, const DynamicFn& g) {
  PiecewisePoly ord = multiply_pw(f.ordinary(), g.ordinary());
  const double tol = ord.merge_tol();
  std::map<double, Profile> profiles;
  auto already_covered = [&](double tau) {
    auto it = profiles.lower_bound(tau - tol);
    return it != profiles.end() && std::abs(it->first - tau) <= tol;
  };
  auto add_products = [&](const std::map<double, Profile>& source) {
    for (const auto& [tau, prof] : source) {
      (void)prof;
      if (already_covered(tau)) continue;
      Profile product =
          mul_profiles(f.dynamic_value(tau), g.dynamic_value(tau));
      const double left = eval_side(ord, tau, Side::left);
      const double right = eval_side(ord, tau, Side::right);
      if (profile_is_redundant(product, left, right)) continue;
      profiles.emplace(tau, std::move(product));
    }
  };
  add_products(f.profiles());
  add_products(g.profiles());
  return DynamicFn(std::move(ord), std::move(profiles));
}

DynamicFn scale_dynamic(const DynamicFn& f, double s) {
  std::map<double, Profile> profiles;
  for (const auto& [tau, prof] : f.profiles())
    profiles.emplace(tau, Profile(scale_pw(prof.curve(), s)));
  return DynamicFn(scale_pw(f.ordinary(), s), std::move(profiles));
}

JordanDecomposition jordan_decompose(const PiecewisePoly& f) {
  const double atol = kMatchTol * std::max(1.0, max_abs_coeff(f));
  JordanDecomposition out;
  out.jumps = interior_jumps(f, atol);
  const auto& breaks = f.breakpoints();
  std::vector<Poly> pieces;
  pieces.reserve(f.piece_count());
  double accumulated = 0.0;
  std::size_t next_jump = 0;
  for (std::size_t k = 0; k < f.piece_count(); ++k) {
    if (k > 0) {
      while (next_jump < out.jumps.size() &&
             out.jumps[next_jump].first <= breaks[k]) {
        accumulated += out.jumps[next_jump].second;
        ++next_jump;
      }
    }
    pieces.push_back(f.piece_local(k) - Poly::constant(accumulated));
  }
  out.continuous = PiecewisePoly::from_local(breaks, std::move(pieces));
  return out;
}

DynamicFn embed_regulated(const PiecewisePoly& f) {
  const double atol = kMatchTol * std::max(1.0, max_abs_coeff(f));
  std::map<double, Profile> profiles;
  for (const auto& [tau, sigma] : interior_jumps(f, atol)) {
    (void)sigma;
    profiles.emplace(tau, Profile::step(eval_side(f, tau, Side::left),
                                        eval_side(f, tau, Side::right)));
  }
  return DynamicFn(f, std::move(profiles));
}

PiecewisePoly sequential_representation(const Profile& profile, double tau,
                                        int n, Interval interval) {
  if (n < 1) throw ValidationError("sequential representation needs n >= 1");
  const double half = 0.5 / static_cast<double>(n);
  const Interval window{tau - half, tau + half};
  if (!(window.lo > interval.lo && window.hi < interval.hi))
    throw DomainError("representation window escapes the interval");
  PiecewisePoly on_window = affine_rescale(profile.curve(),
                                           static_cast<double>(n), tau, window);
  return extend_by_zero(on_window, interval);
}

double total_variation_dyn(const DynamicFn& f) {
  const JordanDecomposition jd = jordan_decompose(f.ordinary());
  double total = total_variation_pw(jd.continuous);
  for (const auto& [tau, prof] : f.profiles()) {
    (void)tau;
    total += prof.variation();
  }
  return total;
}

double sbv_norm(const DynamicFn& f) {
  const PiecewisePoly& ord = f.ordinary();
  const JordanDecomposition jd = jordan_decompose(ord);
  const double left_limit = eval_side(ord, ord.domain().lo, Side::right);
  const double continuous_left =
      eval_side(jd.continuous, ord.domain().lo, Side::right);
  double norm = std::abs(left_limit) + std::abs(continuous_left) +
                total_variation_pw(jd.continuous);
  for (const auto& [tau, prof] : f.profiles()) {
    (void)tau;
    norm += prof.variation();
  }
  return norm;
}

DynamicFn theta_dynamic(Interval interval, double tau, Profile transition) {
  PiecewisePoly ord = PiecewisePoly::step(interval, tau, 0.0, 1.0);
  std::map<double, Profile> profiles;
  profiles.emplace(tau, std::move(transition));
  return DynamicFn(std::move(ord), std::move(profiles));
}

DynamicFn theta_step(Interval interval, double tau) {
  return embed_regulated(PiecewisePoly::step(interval, tau, 0.0, 1.0));
}

bool approx_equal_dyn(const DynamicFn& f, const DynamicFn& g, double atol) {
  if (!approx_equal_pw(f.ordinary(), g.ordinary(), atol)) return false;
  // Compare dynamic values at the union of profiled points.
  auto check = [&](const std::map<double, Profile>& source) {
    for (const auto& [tau, prof] : source) {
      (void)prof;
      if (!approx_equal_pw(f.dynamic_value(tau).curve(),
                           g.dynamic_value(tau).curve(), atol))
        return false;
    }
    return true;
  };
  return check(f.profiles()) && check(g.profiles());
}

}  // namespace dyndist
