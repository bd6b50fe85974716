#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dyndist/dynamic.hpp"
#include "dyndist/field_expr.hpp"

namespace dyndist {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// One impulse: location and the per-component shape vector.
struct ImpulseSpec {
  double tau = 0.0;
  std::vector<Shape> shapes;
};

/// Cauchy problem with finitely many shaped impulses. The right-hand side
/// between impulses is f; across an impulse the state follows the fast-scale
/// equation gamma'(s) = g(tau, gamma(s)) * alpha(s) on J.
struct ImpulsiveIVP {
  Interval interval;
  double t0 = 0.0;
  Vec x0;
  std::vector<FieldExpr> f;               // n components
  std::vector<std::vector<FieldExpr>> g;  // n x n
  std::vector<ImpulseSpec> impulses;

  int dim() const { return static_cast<int>(f.size()); }
  void validate() const;
};

struct SampleTable {
  std::vector<double> t;
  std::vector<Vec> x;
};

struct JumpRecord {
  double tau = 0.0;
  SampleTable gamma;  // parameterized over J
  Vec x_minus;
  Vec x_plus;
};

struct Trajectory {
  std::vector<SampleTable> segments;
  std::vector<JumpRecord> jumps;
  const Vec& endpoint() const { return segments.back().x.back(); }
};

Vec eval_field(const std::vector<FieldExpr>& f, double t, const Vec& x);
Mat eval_matrix(const std::vector<std::vector<FieldExpr>>& g, double t,
                const Vec& x);

/// Classical fixed-step fourth-order Runge-Kutta with dense output.
SampleTable integrate_smooth(const std::vector<FieldExpr>& f, double t_from,
                             double t_to, const Vec& x_from, long steps);

/// Fast-scale transition across one impulse. Runge-Kutta over J, aligned to
/// the shape breakpoints so each sub-interval sees a smooth right-hand side.
JumpRecord jump_map(const std::vector<std::vector<FieldExpr>>& g, double tau,
                    const std::vector<Shape>& shapes, const Vec& x_minus,
                    long steps);

/// Alternate smooth integration and jump maps across all impulses.
Trajectory solve(const ImpulsiveIVP& ivp, long steps_per_segment,
                 long steps_per_jump);

/// Replace each impulse by the m-th term of its delta-sequence and integrate
/// the resulting ordinary problem with one global Runge-Kutta pass, aligned
/// to the mollifier windows. The nominal step (b - t0)/steps must resolve
/// every window with at least 256 sub-steps.
SampleTable regularized_solve(const ImpulsiveIVP& ivp, int m, long steps);

/// Pairwise Lie-bracket defect of the columns of g at one point, with
/// Jacobians by central differences (h = 1e-5).
double frobenius_residual(const std::vector<std::vector<FieldExpr>>& g,
                          double t, const Vec& x);

/// Maximum residual over a lattice covering the (t, x) box, five points per
/// axis, subsampled to at most 125 evaluations.
double frobenius_residual_box(const std::vector<std::vector<FieldExpr>>& g,
                              const Vec& lower, const Vec& upper);

struct ShapeSweep {
  std::vector<Vec> endpoints;  // one per shape vector
  double max_deviation = 0.0;  // max pairwise infinity-norm distance
};

/// Runs the first impulse's jump map once per shape vector from the same
/// left state and reports the endpoint spread.
ShapeSweep shape_sensitivity(const ImpulsiveIVP& ivp,
                             const std::vector<std::vector<Shape>>& shape_vectors,
                             long steps);

}  // namespace dyndist
