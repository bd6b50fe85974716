#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dyndist/battery.hpp"
#include "dyndist/errors.hpp"
#include "dyndist/piecewise.hpp"

using namespace dyndist;

namespace {

// Brute-force partition sum of one-sided-limit differences; the independent
// oracle for the variation computations. A partition point placed exactly on
// a jump loses it (consecutive terms read g(t-) and g(t+) without bridging
// the gap), so the supremum is approached by points bracketing the
// breakpoints tightly plus a uniform grid refined for curvature.
double variation_oracle(const PiecewisePoly& p, int base_points, int refine) {
  const Interval dom = p.domain();
  std::vector<double> grid;
  for (int i = 0; i <= base_points * refine; ++i)
    grid.push_back(dom.lo +
                   dom.length() * static_cast<double>(i) / (base_points * refine));
  const auto& breaks = p.breakpoints();
  const double eps = 1e-9 * dom.length();
  for (std::size_t b = 1; b + 1 < breaks.size(); ++b) {
    grid.push_back(breaks[b] - eps);
    grid.push_back(breaks[b] + eps);
  }
  std::sort(grid.begin(), grid.end());
  double total = 0.0;
  double previous = eval_side(p, dom.lo, Side::right);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) continue;
    const double left = eval_side(p, grid[i], Side::left);
    total += std::abs(left - previous);
    previous = grid[i] < dom.hi ? eval_side(p, grid[i], Side::right) : left;
  }
  return total;
}

PiecewisePoly random_pw(Rng& rng, Interval dom, int pieces, int degree) {
  std::vector<double> breaks{dom.lo};
  for (int i = 1; i < pieces; ++i)
    breaks.push_back(dom.lo + dom.length() * static_cast<double>(i) / pieces +
                     rng.uniform(-0.3, 0.3) * dom.length() / pieces);
  breaks.push_back(dom.hi);
  std::vector<Poly> polys;
  for (int i = 0; i < pieces; ++i) {
    std::vector<double> coeffs;
    for (int d = 0; d <= degree; ++d) coeffs.push_back(rng.uniform(-1.0, 1.0));
    polys.emplace_back(std::move(coeffs));
  }
  return PiecewisePoly::from_local(std::move(breaks), std::move(polys));
}

}  // namespace

TEST_CASE("one-sided evaluation of a step") {
  const PiecewisePoly p = PiecewisePoly::step({-1.0, 1.0}, 0.0, 0.0, 1.0);
  CHECK(eval_side(p, 0.0, Side::right) == doctest::Approx(1.0));
  CHECK(eval_side(p, 0.0, Side::left) == doctest::Approx(0.0));
  const PiecewisePoly ramp = PiecewisePoly::from_poly({-1.0, 1.0}, Poly::x());
  CHECK(eval_side(ramp, 0.5, Side::left) == doctest::Approx(0.5));
}

TEST_CASE("evaluation errors") {
  const PiecewisePoly p = PiecewisePoly::step({-1.0, 1.0}, 0.0, 0.0, 1.0);
  CHECK_THROWS_AS(eval_side(p, 2.0, Side::left), DomainError);
  CHECK_THROWS_AS(eval_side(p, -1.0, Side::left), SideError);
  CHECK_THROWS_AS(eval_side(p, 1.0, Side::right), SideError);
}

TEST_CASE("exact integrals") {
  const Interval J{-0.5, 0.5};
  CHECK(integrate(PiecewisePoly::constant(J, 1.0)) == doctest::Approx(1.0));
  CHECK(integrate(PiecewisePoly::from_poly(J, Poly::x())) ==
        doctest::Approx(0.0));
  CHECK(integrate(PiecewisePoly::from_poly(J, Poly::linear(0.5, 1.0))) ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(integrate(PiecewisePoly::constant(J, 1.0), -1.0, 0.0),
                  DomainError);
}

TEST_CASE("integral additivity over subdivision") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const PiecewisePoly p = random_pw(rng, {-2.0, 2.0}, 4, 3);
    const double a = rng.uniform(-2.0, 0.0);
    const double c = rng.uniform(a, 2.0);
    const double b = rng.uniform(a, c);
    const double whole = integrate(p, a, c);
    const double split = integrate(p, a, b) + integrate(p, b, c);
    CHECK(whole == doctest::Approx(split).epsilon(1e-12));
  }
}

TEST_CASE("product multiplies one-sided limits") {
  const PiecewisePoly theta = PiecewisePoly::step({-1.0, 1.0}, 0.0, 0.0, 1.0);
  const PiecewisePoly square = multiply_pw(theta, theta);
  CHECK(eval_side(square, 0.0, Side::right) == doctest::Approx(1.0));
  CHECK(eval_side(square, 0.0, Side::left) == doctest::Approx(0.0));

  const PiecewisePoly one = PiecewisePoly::constant({-1.0, 1.0}, 1.0);
  const PiecewisePoly ramp = PiecewisePoly::from_poly({-1.0, 1.0}, Poly::x());
  CHECK(approx_equal_pw(multiply_pw(one, ramp), ramp, 1e-15));

  const PiecewisePoly sq = multiply_pw(ramp, ramp);
  CHECK(eval_side(sq, 0.5, Side::left) == doctest::Approx(0.25));

  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const PiecewisePoly p = random_pw(rng, {-2.0, 2.0}, 3, 3);
    const PiecewisePoly q = random_pw(rng, {-2.0, 2.0}, 4, 2);
    const PiecewisePoly prod = multiply_pw(p, q);
    for (double t : prod.breakpoints()) {
      for (Side side : {Side::left, Side::right}) {
        if ((side == Side::left && t <= -2.0) ||
            (side == Side::right && t >= 2.0))
          continue;
        CHECK(eval_side(prod, t, side) ==
              doctest::Approx(eval_side(p, t, side) * eval_side(q, t, side))
                  .epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(
      multiply_pw(PiecewisePoly::constant({0.0, 1.0}, 1.0),
                  PiecewisePoly::constant({0.0, 2.0}, 1.0)),
      DomainError);
}

TEST_CASE("affine rescale") {
  const Interval J{-0.5, 0.5};
  const PiecewisePoly unit = PiecewisePoly::constant(J, 1.0);
  const PiecewisePoly compressed =
      affine_rescale(unit, 2.0, 0.0, {-0.25, 0.25});
  CHECK(integrate(compressed) == doctest::Approx(0.5));
  CHECK(eval_side(compressed, 0.0, Side::right) == doctest::Approx(1.0));

  const PiecewisePoly ramp = PiecewisePoly::from_poly(J, Poly::x());
  const PiecewisePoly shifted = affine_rescale(ramp, 1.0, 0.5, {0.0, 1.0});
  CHECK(eval_side(shifted, 0.75, Side::left) == doctest::Approx(0.25));

  CHECK_THROWS_AS(affine_rescale(unit, 0.0, 0.0, {-0.25, 0.25}),
                  DegenerateMapError);
  CHECK_THROWS_AS(affine_rescale(unit, 1.0, 0.0, {-2.0, 2.0}), DomainError);

  // Substitution rule: the rescaled window integral is 1/n of the original.
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const PiecewisePoly p = random_pw(rng, J, 3, 3);
    const int n = 1 << (1 + trial % 8);
    const double tau = rng.uniform(-0.3, 0.3);
    const double half = 0.5 / n;
    const PiecewisePoly window =
        affine_rescale(p, n, tau, {tau - half, tau + half});
    CHECK(integrate(window) ==
          doctest::Approx(integrate(p) / n).epsilon(1e-12));
  }
}

TEST_CASE("total variation") {
  CHECK(total_variation_pw(PiecewisePoly::step({-1.0, 1.0}, 0.0, 0.0, 1.0)) ==
        doctest::Approx(1.0));
  CHECK(total_variation_pw(PiecewisePoly::from_poly({-1.0, 1.0}, Poly::x())) ==
        doctest::Approx(2.0));

  // Frozen from the partition oracle: t^2 on [-1, 1] has variation 2.
  const PiecewisePoly parabola = PiecewisePoly::from_poly(
      {-1.0, 1.0}, Poly(std::vector<double>{0.0, 0.0, 1.0}));
  CHECK(std::abs(variation_oracle(parabola, 1000, 1) - 2.0) < 1e-6);
  CHECK(total_variation_pw(parabola) == doctest::Approx(2.0));

  Rng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const PiecewisePoly p = random_pw(rng, {-2.0, 2.0}, 3, 3);
    const double tv = total_variation_pw(p);
    // Any partition sum is a lower bound for the supremum.
    CHECK(variation_oracle(p, 1000, 1) <= tv + 1e-9);
    CHECK(std::abs(tv - variation_oracle(p, 1000, 64)) < 1e-6);
  }
}

TEST_CASE("degree cap") {
  const Poly high(std::vector<double>(10, 1.0));  // degree 9
  const PiecewisePoly p = PiecewisePoly::from_poly({0.0, 1.0}, high);
  CHECK_THROWS_AS(multiply_pw(p, p), DegreeCapError);
}

TEST_CASE("breakpoint bookkeeping") {
  CHECK_THROWS_AS(PiecewisePoly({0.0, 0.0, 1.0}, {Poly(), Poly()}),
                  ValidationError);
  CHECK_THROWS_AS(PiecewisePoly({0.0, 1.0}, {Poly(), Poly()}),
                  ValidationError);
  const PiecewisePoly p = PiecewisePoly::step({-1.0, 1.0}, 0.0, 2.0, 3.0);
  const PiecewisePoly split = insert_breakpoint(p, 0.5);
  CHECK(split.piece_count() == 3);
  CHECK(eval_side(split, 0.5, Side::left) == doctest::Approx(3.0));
  CHECK(eval_side(split, 0.5, Side::right) == doctest::Approx(3.0));
}
