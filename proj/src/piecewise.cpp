#include "dyndist/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyndist/errors.hpp"

namespace dyndist {

namespace {

constexpr double kBreakTolScale = 1e-12;

std::vector<double> merge_grids(const std::vector<double>& a,
                                const std::vector<double>& b, double tol) {
  std::vector<double> merged;
  merged.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    double next;
    if (j == b.size() || (i < a.size() && a[i] <= b[j]))
      next = a[i++];
    else
      next = b[j++];
    if (merged.empty() || next - merged.back() > tol) merged.push_back(next);
  }
  return merged;
}

void check_same_domain(const PiecewisePoly& p, const PiecewisePoly& q) {
  const double tol = std::max(p.merge_tol(), q.merge_tol());
  if (std::abs(p.domain().lo - q.domain().lo) > tol ||
      std::abs(p.domain().hi - q.domain().hi) > tol)
    throw DomainError("piecewise operands live on different intervals");
}

// Piece of p covering the cell starting at origin, re-centered onto origin.
Poly local_piece_at(const PiecewisePoly& p, double origin, double mid) {
  const std::size_t idx = p.piece_index(mid, Side::right);
  const double delta = origin - p.piece_origin(idx);
  if (delta == 0.0) return p.piece_local(idx);
  return compose_affine(p.piece_local(idx), 1.0, delta);
}

// Pointwise combination of two piecewise polynomials on the merged grid.
template <typename Op>
PiecewisePoly combine(const PiecewisePoly& p, const PiecewisePoly& q, Op op) {
  check_same_domain(p, q);
  const double tol = std::max(p.merge_tol(), q.merge_tol());
  std::vector<double> grid = merge_grids(p.breakpoints(), q.breakpoints(), tol);
  // Pin the endpoints to p's domain so the merge cannot shrink it.
  grid.front() = p.domain().lo;
  grid.back() = p.domain().hi;
  std::vector<Poly> pieces;
  pieces.reserve(grid.size() - 1);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double mid = 0.5 * (grid[k] + grid[k + 1]);
    pieces.push_back(op(local_piece_at(p, grid[k], mid),
                        local_piece_at(q, grid[k], mid)));
  }
  return PiecewisePoly::from_local(std::move(grid), std::move(pieces));
}

}  // namespace

PiecewisePoly::PiecewisePoly() : breaks_{0.0, 1.0}, pieces_{Poly()} {}

PiecewisePoly::PiecewisePoly(std::vector<double> breakpoints,
                             std::vector<Poly> pieces) {
  *this = from_local(std::move(breakpoints), std::move(pieces));
  for (std::size_t k = 0; k < pieces_.size(); ++k)
    pieces_[k] = compose_affine(pieces_[k], 1.0, breaks_[k]);
}

PiecewisePoly PiecewisePoly::from_local(std::vector<double> breakpoints,
                                        std::vector<Poly> local_pieces) {
  PiecewisePoly out;
  out.breaks_ = std::move(breakpoints);
  out.pieces_ = std::move(local_pieces);
  if (out.breaks_.size() < 2)
    throw ValidationError("piecewise function needs at least two breakpoints");
  if (out.pieces_.size() + 1 != out.breaks_.size())
    throw ValidationError("piece count must be breakpoint count minus one");
  for (std::size_t i = 0; i + 1 < out.breaks_.size(); ++i)
    if (!(out.breaks_[i] < out.breaks_[i + 1]))
      throw ValidationError("breakpoints must be strictly increasing");
  return out;
}

PiecewisePoly PiecewisePoly::constant(Interval dom, double value) {
  if (!dom.valid()) throw ValidationError("empty interval");
  return from_local({dom.lo, dom.hi}, {Poly::constant(value)});
}

PiecewisePoly PiecewisePoly::from_poly(Interval dom, Poly p) {
  if (!dom.valid()) throw ValidationError("empty interval");
  return PiecewisePoly({dom.lo, dom.hi}, {std::move(p)});
}

PiecewisePoly PiecewisePoly::step(Interval dom, double at, double left_value,
                                  double right_value) {
  if (!(dom.lo < at && at < dom.hi))
    throw DomainError("step location must be interior");
  return from_local({dom.lo, at, dom.hi}, {Poly::constant(left_value),
                                           Poly::constant(right_value)});
}

Poly PiecewisePoly::piece_global(std::size_t k) const {
  return compose_affine(pieces_[k], 1.0, -breaks_[k]);
}

std::size_t PiecewisePoly::piece_index(double t, Side side) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - breaks_.begin());
  std::size_t piece = (idx == 0) ? 0 : idx - 1;
  if (side == Side::left) {
    // On a breakpoint, step back to the piece on its left.
    if (idx > 0 && breaks_[idx - 1] == t && piece > 0) piece -= 1;
  }
  if (piece >= pieces_.size()) piece = pieces_.size() - 1;
  return piece;
}

double PiecewisePoly::merge_tol() const {
  return kBreakTolScale * domain().length();
}

double eval_side(const PiecewisePoly& p, double t, Side side) {
  const Interval dom = p.domain();
  if (!dom.contains(t)) throw DomainError("evaluation point outside the domain");
  if (side == Side::left && t <= dom.lo)
    throw SideError("left limit does not exist at the left endpoint");
  if (side == Side::right && t >= dom.hi)
    throw SideError("right limit does not exist at the right endpoint");
  const std::size_t idx = p.piece_index(t, side);
  return p.piece_local(idx).eval(t - p.piece_origin(idx));
}

double eval_point(const PiecewisePoly& p, double t) {
  const Interval dom = p.domain();
  return eval_side(p, t, t < dom.hi ? Side::right : Side::left);
}

double integrate(const PiecewisePoly& p, double a, double b) {
  const Interval dom = p.domain();
  const double slack = p.merge_tol();
  if (a > b) throw DomainError("integration bounds out of order");
  if (!dom.contains(a, slack) || !dom.contains(b, slack))
    throw DomainError("integration bounds escape the domain");
  a = std::max(a, dom.lo);
  b = std::min(b, dom.hi);
  const auto& breaks = p.breakpoints();
  double total = 0.0;
  for (std::size_t k = 0; k < p.piece_count(); ++k) {
    const double lo = std::max(a, breaks[k]);
    const double hi = std::min(b, breaks[k + 1]);
    if (lo >= hi) continue;
    const Poly anti = antiderivative(p.piece_local(k));
    total += anti.eval(hi - breaks[k]) - anti.eval(lo - breaks[k]);
  }
  return total;
}

double integrate(const PiecewisePoly& p) {
  return integrate(p, p.domain().lo, p.domain().hi);
}

PiecewisePoly multiply_pw(const PiecewisePoly& p, const PiecewisePoly& q) {
  return combine(p, q, [](const Poly& a, const Poly& b) { return a * b; });
}

PiecewisePoly add_pw(const PiecewisePoly& p, const PiecewisePoly& q) {
  return combine(p, q, [](const Poly& a, const Poly& b) { return a + b; });
}

PiecewisePoly sub_pw(const PiecewisePoly& p, const PiecewisePoly& q) {
  return combine(p, q, [](const Poly& a, const Poly& b) { return a - b; });
}

PiecewisePoly scale_pw(const PiecewisePoly& p, double s) {
  std::vector<Poly> pieces;
  pieces.reserve(p.piece_count());
  for (std::size_t k = 0; k < p.piece_count(); ++k)
    pieces.push_back(s * p.piece_local(k));
  return PiecewisePoly::from_local(p.breakpoints(), std::move(pieces));
}

PiecewisePoly derivative_pw(const PiecewisePoly& p) {
  std::vector<Poly> pieces;
  pieces.reserve(p.piece_count());
  for (std::size_t k = 0; k < p.piece_count(); ++k)
    pieces.push_back(derivative(p.piece_local(k)));
  return PiecewisePoly::from_local(p.breakpoints(), std::move(pieces));
}

PiecewisePoly affine_rescale(const PiecewisePoly& p, double scale, double shift,
                             Interval new_domain) {
  if (scale == 0.0)
    throw DegenerateMapError("affine substitution with zero scale");
  if (!new_domain.valid()) throw ValidationError("empty target interval");
  const Interval dom = p.domain();
  const double slack =
      p.merge_tol() * std::max(1.0, std::abs(scale)) + 1e-12;
  double img_lo = scale * (new_domain.lo - shift);
  double img_hi = scale * (new_domain.hi - shift);
  if (img_lo > img_hi) std::swap(img_lo, img_hi);
  if (img_lo < dom.lo - slack || img_hi > dom.hi + slack)
    throw DomainError("affine image escapes the source domain");

  // Preimages of interior breakpoints of p, restricted to the new domain.
  std::vector<double> grid{new_domain.lo};
  const auto& breaks = p.breakpoints();
  std::vector<double> interior;
  for (std::size_t i = 1; i + 1 < breaks.size(); ++i)
    interior.push_back(shift + breaks[i] / scale);
  std::sort(interior.begin(), interior.end());
  const double tol = kBreakTolScale * new_domain.length();
  for (double t : interior)
    if (t > new_domain.lo + tol && t < new_domain.hi - tol) grid.push_back(t);
  grid.push_back(new_domain.hi);

  std::vector<Poly> pieces;
  pieces.reserve(grid.size() - 1);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double mid = 0.5 * (grid[k] + grid[k + 1]);
    const double u = std::clamp(scale * (mid - shift), dom.lo, dom.hi);
    const std::size_t idx = p.piece_index(u, Side::right);
    // Result piece in local coordinates v = t - grid[k]:
    // p_local(scale * (v + grid[k] - shift) - origin).
    pieces.push_back(compose_affine(
        p.piece_local(idx), scale,
        scale * (grid[k] - shift) - p.piece_origin(idx)));
  }
  return PiecewisePoly::from_local(std::move(grid), std::move(pieces));
}

double total_variation_pw(const PiecewisePoly& p) {
  const auto& breaks = p.breakpoints();
  double total = 0.0;
  for (std::size_t k = 0; k < p.piece_count(); ++k) {
    const Poly& piece = p.piece_local(k);
    const double len = breaks[k + 1] - breaks[k];
    std::vector<double> nodes{0.0};
    for (double r : real_roots_in(derivative(piece), 0.0, len))
      nodes.push_back(r);
    nodes.push_back(len);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
      total += std::abs(piece.eval(nodes[i + 1]) - piece.eval(nodes[i]));
  }
  for (std::size_t i = 1; i + 1 < breaks.size(); ++i)
    total += std::abs(eval_side(p, breaks[i], Side::right) -
                      eval_side(p, breaks[i], Side::left));
  return total;
}

PiecewisePoly extend_by_zero(const PiecewisePoly& p, Interval target) {
  const Interval dom = p.domain();
  const double tol = kBreakTolScale * target.length();
  if (dom.lo < target.lo - tol || dom.hi > target.hi + tol)
    throw DomainError("extension target does not contain the source domain");
  std::vector<double> grid;
  std::vector<Poly> pieces;
  grid.push_back(target.lo);
  const bool left_gap = dom.lo - target.lo > tol;
  if (left_gap) {
    grid.push_back(dom.lo);
    pieces.push_back(Poly());
  }
  for (std::size_t k = 0; k < p.piece_count(); ++k) {
    // Re-center the first piece when its origin is snapped to target.lo.
    const double origin = grid.back();
    const double delta = origin - p.piece_origin(k);
    pieces.push_back(delta == 0.0
                         ? p.piece_local(k)
                         : compose_affine(p.piece_local(k), 1.0, delta));
    grid.push_back(p.breakpoints()[k + 1]);
  }
  if (target.hi - dom.hi > tol) {
    pieces.push_back(Poly());
    grid.push_back(target.hi);
  } else {
    grid.back() = target.hi;
  }
  return PiecewisePoly::from_local(std::move(grid), std::move(pieces));
}

PiecewisePoly insert_breakpoint(const PiecewisePoly& p, double t) {
  const Interval dom = p.domain();
  const double tol = p.merge_tol();
  if (t <= dom.lo + tol || t >= dom.hi - tol) return p;
  for (double b : p.breakpoints())
    if (std::abs(b - t) <= tol) return p;
  std::vector<double> grid;
  std::vector<Poly> pieces;
  grid.push_back(p.breakpoints().front());
  for (std::size_t k = 0; k < p.piece_count(); ++k) {
    const double hi = p.breakpoints()[k + 1];
    if (grid.back() < t && t < hi) {
      grid.push_back(t);
      pieces.push_back(p.piece_local(k));
      pieces.push_back(
          compose_affine(p.piece_local(k), 1.0, t - p.piece_origin(k)));
    } else {
      pieces.push_back(p.piece_local(k));
    }
    grid.push_back(hi);
  }
  return PiecewisePoly::from_local(std::move(grid), std::move(pieces));
}

std::vector<std::pair<double, double>> interior_jumps(const PiecewisePoly& p,
                                                      double atol) {
  std::vector<std::pair<double, double>> jumps;
  const auto& breaks = p.breakpoints();
  for (std::size_t i = 1; i + 1 < breaks.size(); ++i) {
    const double sigma = eval_side(p, breaks[i], Side::right) -
                         eval_side(p, breaks[i], Side::left);
    if (std::abs(sigma) > atol) jumps.emplace_back(breaks[i], sigma);
  }
  return jumps;
}

bool is_continuous_pw(const PiecewisePoly& p, double atol) {
  return interior_jumps(p, atol).empty();
}

double max_abs_coeff(const PiecewisePoly& p) {
  double m = 0.0;
  for (std::size_t k = 0; k < p.piece_count(); ++k)
    m = std::max(m, max_abs_coeff(p.piece_local(k)));
  return m;
}

bool approx_equal_pw(const PiecewisePoly& p, const PiecewisePoly& q,
                     double atol) {
  const double tol = std::max(p.merge_tol(), q.merge_tol());
  if (std::abs(p.domain().lo - q.domain().lo) > tol ||
      std::abs(p.domain().hi - q.domain().hi) > tol)
    return false;
  return max_abs_coeff(sub_pw(p, q)) <= atol;
}

}  // namespace dyndist
