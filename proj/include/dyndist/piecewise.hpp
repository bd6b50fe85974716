#pragma once

#include <utility>
#include <vector>

#include "dyndist/poly.hpp"

namespace dyndist {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool valid() const { return lo < hi; }
  bool contains(double t, double slack = 0.0) const {
    return t >= lo - slack && t <= hi + slack;
  }
};

enum class Side { left, right };

/// Piecewise polynomial on a closed interval. Breakpoints are strictly
/// increasing with the domain endpoints first and last; one polynomial per
/// open subinterval. Values at the breakpoints themselves are not stored
/// and never consulted: functions are identified by their one-sided limits.
///
/// Pieces are stored in local coordinates u = t - breakpoint[k]. Evaluating
/// near a piece's own origin keeps the arithmetic well conditioned even when
/// coefficients are large; the global-basis accessors exist for display and
/// serialization only.
class PiecewisePoly {
 public:
  PiecewisePoly();
  /// Pieces given in the global variable t.
  PiecewisePoly(std::vector<double> breakpoints, std::vector<Poly> pieces);
  /// Pieces given in local coordinates u = t - breakpoint[k].
  static PiecewisePoly from_local(std::vector<double> breakpoints,
                                  std::vector<Poly> local_pieces);

  static PiecewisePoly constant(Interval dom, double value);
  static PiecewisePoly from_poly(Interval dom, Poly p);
  /// left_value on (lo, at), right_value on (at, hi).
  static PiecewisePoly step(Interval dom, double at, double left_value,
                            double right_value);

  Interval domain() const { return {breaks_.front(), breaks_.back()}; }
  std::size_t piece_count() const { return pieces_.size(); }
  const std::vector<double>& breakpoints() const { return breaks_; }

  const Poly& piece_local(std::size_t k) const { return pieces_[k]; }
  double piece_origin(std::size_t k) const { return breaks_[k]; }
  /// Piece k re-expressed in the global variable t.
  Poly piece_global(std::size_t k) const;

  /// Index of the piece adjacent to t on the given side.
  std::size_t piece_index(double t, Side side) const;

  /// Dedup tolerance for nearby breakpoints, relative to the domain length.
  double merge_tol() const;

 private:
  std::vector<double> breaks_;
  std::vector<Poly> pieces_;  // local basis
};

double eval_side(const PiecewisePoly& p, double t, Side side);
/// Right limit everywhere except the right endpoint (left limit there).
/// Convenient for sampling along integration grids.
double eval_point(const PiecewisePoly& p, double t);

/// Exact integral over [a, b] ⊆ domain.
double integrate(const PiecewisePoly& p, double a, double b);
/// Exact integral over the whole domain.
double integrate(const PiecewisePoly& p);

PiecewisePoly multiply_pw(const PiecewisePoly& p, const PiecewisePoly& q);
PiecewisePoly add_pw(const PiecewisePoly& p, const PiecewisePoly& q);
PiecewisePoly sub_pw(const PiecewisePoly& p, const PiecewisePoly& q);
PiecewisePoly scale_pw(const PiecewisePoly& p, double s);
PiecewisePoly derivative_pw(const PiecewisePoly& p);

/// result(t) = p(scale * (t - shift)) on new_domain. The image of new_domain
/// under the substitution must stay inside the domain of p.
PiecewisePoly affine_rescale(const PiecewisePoly& p, double scale, double shift,
                             Interval new_domain);

/// Total variation: per-piece integral of |p'| plus |jump| at the interior
/// breakpoints.
double total_variation_pw(const PiecewisePoly& p);

/// Zero-extend onto a larger interval.
PiecewisePoly extend_by_zero(const PiecewisePoly& p, Interval target);

/// Insert a breakpoint (no-op when t is already a breakpoint).
PiecewisePoly insert_breakpoint(const PiecewisePoly& p, double t);

/// Interior breakpoints where the one-sided limits differ by more than
/// atol, with the jump value right-minus-left.
std::vector<std::pair<double, double>> interior_jumps(const PiecewisePoly& p,
                                                      double atol);

/// One-sided limits agree at every interior breakpoint.
bool is_continuous_pw(const PiecewisePoly& p, double atol);

double max_abs_coeff(const PiecewisePoly& p);

/// Equality as regulated functions: identical polynomials on the common
/// refinement within atol, plus matching domains.
bool approx_equal_pw(const PiecewisePoly& p, const PiecewisePoly& q,
                     double atol);

}  // namespace dyndist
