#include "dyndist/impulsive.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyndist/errors.hpp"
#include "dyndist/parallel.hpp"

namespace dyndist {

namespace {

void check_finite(const Vec& x) {
  if (!x.allFinite())
    throw DivergenceError("state became non-finite during integration");
}

// One classical Runge-Kutta step of x' = rhs(t, x).
template <typename Rhs>
Vec rk4_step(const Rhs& rhs, double t, double h, const Vec& x) {
  const Vec k1 = rhs(t, x);
  const Vec k2 = rhs(t + 0.5 * h, x + (0.5 * h) * k1);
  const Vec k3 = rhs(t + 0.5 * h, x + (0.5 * h) * k2);
  const Vec k4 = rhs(t + h, x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dense integration of one smooth stretch; appends to the table (which must
// already contain the initial sample).
template <typename Rhs>
void rk4_span(const Rhs& rhs, double t_from, double t_to, long steps,
              SampleTable& table) {
  const double h = (t_to - t_from) / static_cast<double>(steps);
  Vec x = table.x.back();
  for (long i = 0; i < steps; ++i) {
    const double t = t_from + static_cast<double>(i) * h;
    x = rk4_step(rhs, t, h, x);
    check_finite(x);
    table.t.push_back(i + 1 == steps ? t_to
                                     : t_from + static_cast<double>(i + 1) * h);
    table.x.push_back(x);
  }
}

// Per-segment polynomial view of a shape component: evaluating through the
// piece covering the segment keeps the stage values smooth up to the
// segment boundary.
struct SegmentPoly {
  Poly local;
  double origin = 0.0;
  double eval(double s) const { return local.eval(s - origin); }
};

SegmentPoly segment_poly(const PiecewisePoly& p, double seg_lo, double seg_hi) {
  const double mid = 0.5 * (seg_lo + seg_hi);
  const std::size_t idx = p.piece_index(mid, Side::right);
  return {p.piece_local(idx), p.piece_origin(idx)};
}

std::vector<double> sorted_breaks_union(const std::vector<Shape>& shapes) {
  std::vector<double> pts;
  for (const Shape& s : shapes) {
    const auto& breaks = s.density().breakpoints();
    pts.insert(pts.end(), breaks.begin() + 1, breaks.end() - 1);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return b - a < 1e-14; }),
            pts.end());
  return pts;
}

long substeps_for(double length, double nominal) {
  if (length <= 0.0) return 0;
  return std::max(1L, static_cast<long>(std::ceil(length / nominal - 1e-9)));
}

}  // namespace

void ImpulsiveIVP::validate() const {
  if (!interval.valid()) throw ValidationError("empty interval");
  const int n = dim();
  if (n < 1) throw ValidationError("state dimension must be at least one");
  if (x0.size() != n)
    throw ValidationError("initial state dimension does not match f");
  if (static_cast<int>(g.size()) != n)
    throw ValidationError("g must be a square matrix of field expressions");
  for (const auto& row : g)
    if (static_cast<int>(row.size()) != n)
      throw ValidationError("g must be a square matrix of field expressions");
  if (!(interval.lo < t0 && t0 < interval.hi))
    throw DomainError("initial time outside the open interval");
  auto check_vars = [n](const FieldExpr& e) {
    if (e.max_var_index() > n)
      throw ValidationError("field references x" +
                            std::to_string(e.max_var_index()) +
                            " but the state has dimension " +
                            std::to_string(n));
  };
  for (const FieldExpr& e : f) check_vars(e);
  for (const auto& row : g)
    for (const FieldExpr& e : row) check_vars(e);
  double previous = t0;
  bool first = true;
  for (const ImpulseSpec& imp : impulses) {
    if (!(interval.lo < imp.tau && imp.tau < interval.hi))
      throw DomainError("impulse location outside the open interval");
    if (first ? imp.tau < previous : imp.tau <= previous)
      throw ValidationError("impulse locations must be increasing from t0");
    first = false;
    previous = imp.tau;
    if (static_cast<int>(imp.shapes.size()) != n)
      throw ValidationError("each impulse needs one shape per component");
  }
}

Vec eval_field(const std::vector<FieldExpr>& f, double t, const Vec& x) {
  Vec out(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) out[static_cast<Eigen::Index>(i)] = f[i].eval(t, x);
  return out;
}

Mat eval_matrix(const std::vector<std::vector<FieldExpr>>& g, double t,
                const Vec& x) {
  const Eigen::Index n = static_cast<Eigen::Index>(g.size());
  Mat out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                      .eval(t, x);
  return out;
}

SampleTable integrate_smooth(const std::vector<FieldExpr>& f, double t_from,
                             double t_to, const Vec& x_from, long steps) {
  if (steps < 1) throw ValidationError("step count must be at least one");
  if (t_to < t_from) throw DomainError("integration runs backwards");
  check_finite(x_from);
  SampleTable table;
  table.t.push_back(t_from);
  table.x.push_back(x_from);
  if (t_to == t_from) return table;
  auto rhs = [&f](double t, const Vec& x) { return eval_field(f, t, x); };
  rk4_span(rhs, t_from, t_to, steps, table);
  return table;
}

JumpRecord jump_map(const std::vector<std::vector<FieldExpr>>& g, double tau,
                    const std::vector<Shape>& shapes, const Vec& x_minus,
                    long steps) {
  if (steps < 1) throw ValidationError("step count must be at least one");
  if (shapes.size() != g.size())
    throw ValidationError("one shape per state component required");
  check_finite(x_minus);
  JumpRecord record;
  record.tau = tau;
  record.x_minus = x_minus;
  record.gamma.t.push_back(kProfileDomain.lo);
  record.gamma.x.push_back(x_minus);

  std::vector<double> grid{kProfileDomain.lo};
  for (double b : sorted_breaks_union(shapes)) grid.push_back(b);
  grid.push_back(kProfileDomain.hi);
  const double nominal = 1.0 / static_cast<double>(steps);

  const Eigen::Index n = static_cast<Eigen::Index>(shapes.size());
  for (std::size_t seg = 0; seg + 1 < grid.size(); ++seg) {
    const double s0 = grid[seg], s1 = grid[seg + 1];
    std::vector<SegmentPoly> alpha;
    alpha.reserve(shapes.size());
    for (const Shape& s : shapes)
      alpha.push_back(segment_poly(s.density(), s0, s1));
    auto rhs = [&](double s, const Vec& gamma) -> Vec {
      Vec a(n);
      for (Eigen::Index i = 0; i < n; ++i)
        a[i] = alpha[static_cast<std::size_t>(i)].eval(s);
      return eval_matrix(g, tau, gamma) * a;
    };
    rk4_span(rhs, s0, s1, substeps_for(s1 - s0, nominal), record.gamma);
  }
  record.x_plus = record.gamma.x.back();
  return record;
}

Trajectory solve(const ImpulsiveIVP& ivp, long steps_per_segment,
                 long steps_per_jump) {
  ivp.validate();
  Trajectory traj;
  double t_cursor = ivp.t0;
  Vec x_cursor = ivp.x0;
  for (const ImpulseSpec& imp : ivp.impulses) {
    SampleTable seg;
    if (imp.tau > t_cursor) {
      seg = integrate_smooth(ivp.f, t_cursor, imp.tau, x_cursor,
                             steps_per_segment);
    } else {
      seg.t.push_back(t_cursor);
      seg.x.push_back(x_cursor);
    }
    x_cursor = seg.x.back();
    traj.segments.push_back(std::move(seg));

    JumpRecord jump = jump_map(ivp.g, imp.tau, imp.shapes, x_cursor,
                               steps_per_jump);
    x_cursor = jump.x_plus;
    t_cursor = imp.tau;
    traj.jumps.push_back(std::move(jump));
  }
  traj.segments.push_back(integrate_smooth(ivp.f, t_cursor, ivp.interval.hi,
                                           x_cursor, steps_per_segment));
  return traj;
}

SampleTable regularized_solve(const ImpulsiveIVP& ivp, int m, long steps) {
  ivp.validate();
  if (m < 1) throw ValidationError("mollification index must be positive");
  if (steps < 1) throw ValidationError("step count must be at least one");
  const double t_end = ivp.interval.hi;
  const double nominal = (t_end - ivp.t0) / static_cast<double>(steps);
  const double half = 0.5 / static_cast<double>(m);
  const double window_width = 2.0 * half;

  struct Window {
    double lo = 0.0, hi = 0.0;
    const ImpulseSpec* impulse = nullptr;
  };
  std::vector<Window> windows;
  double previous_hi = ivp.t0;
  for (const ImpulseSpec& imp : ivp.impulses) {
    Window w{imp.tau - half, imp.tau + half, &imp};
    if (!(w.lo > ivp.interval.lo && w.hi < ivp.interval.hi))
      throw DomainError("mollifier window escapes the interval");
    if (w.lo < ivp.t0)
      throw DomainError("mollifier window precedes the initial time");
    if (w.lo < previous_hi)
      throw ValidationError("mollifier windows overlap");
    previous_hi = w.hi;
    windows.push_back(w);
  }
  if (window_width / nominal < 256.0 - 1e-9)
    throw ResolutionError(
        "step budget resolves a mollifier window with fewer than 256 "
        "sub-steps");

  // Global grid: window edges plus the shape-breakpoint preimages.
  std::vector<double> grid{ivp.t0};
  for (const Window& w : windows) {
    grid.push_back(w.lo);
    for (double s : sorted_breaks_union(w.impulse->shapes))
      grid.push_back(w.impulse->tau + s / static_cast<double>(m));
    grid.push_back(w.hi);
  }
  grid.push_back(t_end);
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [&](double a, double b) {
                           return std::abs(b - a) < 1e-15 * (t_end - ivp.t0);
                         }),
             grid.end());

  SampleTable table;
  table.t.push_back(ivp.t0);
  table.x.push_back(ivp.x0);
  const Eigen::Index n = static_cast<Eigen::Index>(ivp.dim());
  for (std::size_t seg = 0; seg + 1 < grid.size(); ++seg) {
    const double s0 = grid[seg], s1 = grid[seg + 1];
    if (s1 <= s0) continue;
    const double mid = 0.5 * (s0 + s1);
    const Window* inside = nullptr;
    for (const Window& w : windows)
      if (mid > w.lo && mid < w.hi) inside = &w;

    if (inside == nullptr) {
      auto rhs = [&](double t, const Vec& x) { return eval_field(ivp.f, t, x); };
      rk4_span(rhs, s0, s1, substeps_for(s1 - s0, nominal), table);
      continue;
    }
    const double tau = inside->impulse->tau;
    const double scale = static_cast<double>(m);
    std::vector<SegmentPoly> alpha;
    alpha.reserve(inside->impulse->shapes.size());
    for (const Shape& s : inside->impulse->shapes)
      alpha.push_back(segment_poly(s.density(), scale * (s0 - tau),
                                   scale * (s1 - tau)));
    auto rhs = [&](double t, const Vec& x) -> Vec {
      Vec a(n);
      const double s = scale * (t - tau);
      for (Eigen::Index i = 0; i < n; ++i)
        a[i] = scale * alpha[static_cast<std::size_t>(i)].eval(s);
      return eval_field(ivp.f, t, x) + eval_matrix(ivp.g, t, x) * a;
    };
    rk4_span(rhs, s0, s1, substeps_for(s1 - s0, nominal), table);
  }
  return table;
}

double frobenius_residual(const std::vector<std::vector<FieldExpr>>& g,
                          double t, const Vec& x) {
  const Eigen::Index n = static_cast<Eigen::Index>(g.size());
  const double h = 1e-5;
  const Mat value = eval_matrix(g, t, x);
  // partial(i, j, k) = d g_ij / d x_k by central differences.
  std::vector<Mat> partial(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    partial[static_cast<std::size_t>(k)] =
        (eval_matrix(g, t, xp) - eval_matrix(g, t, xm)) / (2.0 * h);
  }
  double residual = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index mcol = j + 1; mcol < n; ++mcol) {
      for (Eigen::Index i = 0; i < n; ++i) {
        double bracket = 0.0;
        for (Eigen::Index k = 0; k < n; ++k)
          bracket += partial[static_cast<std::size_t>(k)](i, mcol) * value(k, j) -
                     partial[static_cast<std::size_t>(k)](i, j) * value(k, mcol);
        residual = std::max(residual, std::abs(bracket));
      }
    }
  }
  return residual;
}

double frobenius_residual_box(const std::vector<std::vector<FieldExpr>>& g,
                              const Vec& lower, const Vec& upper) {
  const Eigen::Index dims = lower.size();
  if (upper.size() != dims || dims < 1)
    throw ValidationError("box bounds must share a dimension");
  const Eigen::Index n = static_cast<Eigen::Index>(g.size());
  if (dims != n + 1)
    throw ValidationError("box must cover (t, x1..xn)");
  long total = 1;
  for (Eigen::Index d = 0; d < dims; ++d) total *= 5;
  const long stride = std::max(1L, (total + 124) / 125);
  double residual = 0.0;
  for (long idx = 0; idx < total; idx += stride) {
    long rest = idx;
    Vec point(dims);
    for (Eigen::Index d = 0; d < dims; ++d) {
      const long k = rest % 5;
      rest /= 5;
      point[d] = lower[d] + (upper[d] - lower[d]) * (static_cast<double>(k) / 4.0);
    }
    Vec x = point.tail(n);
    residual = std::max(residual, frobenius_residual(g, point[0], x));
  }
  return residual;
}

ShapeSweep shape_sensitivity(const ImpulsiveIVP& ivp,
                             const std::vector<std::vector<Shape>>& shape_vectors,
                             long steps) {
  ivp.validate();
  if (ivp.impulses.empty())
    throw ValidationError("shape sweep needs at least one impulse");
  const double tau = ivp.impulses.front().tau;
  Vec x_minus = ivp.x0;
  if (tau > ivp.t0)
    x_minus = integrate_smooth(ivp.f, ivp.t0, tau, ivp.x0, steps).x.back();

  ShapeSweep sweep;
  sweep.endpoints.resize(shape_vectors.size());
  parallel_for(shape_vectors.size(), [&](std::size_t i) {
    sweep.endpoints[i] =
        jump_map(ivp.g, tau, shape_vectors[i], x_minus, steps).x_plus;
  });
  for (std::size_t i = 0; i < sweep.endpoints.size(); ++i)
    for (std::size_t j = i + 1; j < sweep.endpoints.size(); ++j)
      sweep.max_deviation = std::max(
          sweep.max_deviation,
          (sweep.endpoints[i] - sweep.endpoints[j]).cwiseAbs().maxCoeff());
  return sweep;
}

}  // namespace dyndist
