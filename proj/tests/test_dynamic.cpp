#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "dyndist/battery.hpp"
#include "dyndist/dynamic.hpp"
#include "dyndist/errors.hpp"

using namespace dyndist;

namespace {

const Interval I{-1.0, 1.0};

Profile ramp_profile() { return Profile::from_poly(Poly::linear(0.5, 1.0)); }

// Partition-sum variation of a profile curve, bracketing the breakpoints.
double profile_variation_oracle(const Profile& prof, int points) {
  const PiecewisePoly& c = prof.curve();
  std::vector<double> grid;
  for (int i = 0; i <= points; ++i)
    grid.push_back(-0.5 + static_cast<double>(i) / points);
  for (std::size_t b = 1; b + 1 < c.breakpoints().size(); ++b) {
    grid.push_back(c.breakpoints()[b] - 1e-9);
    grid.push_back(c.breakpoints()[b] + 1e-9);
  }
  std::sort(grid.begin(), grid.end());
  double total = 0.0;
  double previous = eval_side(c, -0.5, Side::right);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) continue;
    const double left = eval_side(c, grid[i], Side::left);
    total += std::abs(left - previous);
    previous = grid[i] < 0.5 ? eval_side(c, grid[i], Side::right) : left;
  }
  return total;
}

}  // namespace

TEST_CASE("jump values") {
  const DynamicFn theta = theta_dynamic(I, 0.0, ramp_profile());
  CHECK(jump(theta, 0.0) == doctest::Approx(1.0));

  const DynamicFn smooth(PiecewisePoly::from_poly(I, Poly::x()));
  CHECK(jump(smooth, 0.3) == doctest::Approx(0.0));

  const DynamicFn scaled = scale_dynamic(theta, 3.0);
  CHECK(jump(scaled, 0.0) == doctest::Approx(3.0));
  CHECK(scaled.profile_at(0.0)->right_value() == doctest::Approx(3.0));

  CHECK_THROWS_AS(jump(theta, 2.0), DomainError);
}

TEST_CASE("ordinary part") {
  const DynamicFn theta = theta_dynamic(I, 0.0, ramp_profile());
  CHECK(approx_equal_pw(ordinary_part(theta),
                        PiecewisePoly::step(I, 0.0, 0.0, 1.0), 1e-15));

  const PiecewisePoly ramp = PiecewisePoly::from_poly(I, Poly::x());
  CHECK(approx_equal_pw(ordinary_part(DynamicFn(ramp)), ramp, 1e-15));
}

TEST_CASE("products of dynamic functions") {
  const DynamicFn theta = theta_dynamic(I, 0.0, ramp_profile());

  const DynamicFn square = mul_dynamic(theta, theta);
  const Profile beta = ramp_profile();
  CHECK(approx_equal_pw(square.profile_at(0.0)->curve(),
                        multiply_pw(beta.curve(), beta.curve()), 1e-14));

  const DynamicFn one(PiecewisePoly::constant(I, 1.0));
  CHECK(approx_equal_dyn(mul_dynamic(theta, one), theta, 1e-14));

  const DynamicFn two(PiecewisePoly::constant(I, 2.0));
  const DynamicFn doubled = mul_dynamic(theta, two);
  CHECK(approx_equal_pw(doubled.profile_at(0.0)->curve(),
                        scale_pw(beta.curve(), 2.0), 1e-14));

  CHECK_THROWS_AS(
      mul_dynamic(theta, DynamicFn(PiecewisePoly::constant({0.0, 1.0}, 1.0))),
      DomainError);
}

TEST_CASE("algebra homomorphism onto ordinary parts") {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const DynamicFn f = random_smooth_bv(I, {-0.4, 0.3}, rng);
    const DynamicFn g = random_smooth_bv(I, {-0.4, 0.3}, rng);
    const DynamicFn fg = mul_dynamic(f, g);
    for (int i = 0; i < 1000; ++i) {
      const double t = -0.999 + 1.998 * static_cast<double>(i) / 999;
      bool on_break = false;
      for (double b : fg.ordinary().breakpoints())
        if (std::abs(b - t) < 1e-9) on_break = true;
      if (on_break) continue;
      CHECK(eval_point(fg.ordinary(), t) ==
            doctest::Approx(eval_point(f.ordinary(), t) *
                            eval_point(g.ordinary(), t))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("profile endpoints must match the one-sided limits") {
  PiecewisePoly step = PiecewisePoly::step(I, 0.0, 0.0, 1.0);
  std::map<double, Profile> bad;
  bad.emplace(0.0, Profile::from_poly(Poly::linear(0.25, 1.0)));
  CHECK_THROWS_AS(DynamicFn(step, std::move(bad)), ValidationError);

  // A jump with no profile at all is rejected as well.
  CHECK_THROWS_AS(DynamicFn(step), ValidationError);
}

TEST_CASE("Jordan decomposition") {
  const JordanDecomposition pure =
      jordan_decompose(PiecewisePoly::step(I, 0.0, 0.0, 1.0));
  CHECK(approx_equal_pw(pure.continuous, PiecewisePoly::constant(I, 0.0),
                        1e-15));
  REQUIRE(pure.jumps.size() == 1);
  CHECK(pure.jumps[0].first == doctest::Approx(0.0));
  CHECK(pure.jumps[0].second == doctest::Approx(1.0));

  const PiecewisePoly ramp = PiecewisePoly::from_poly(I, Poly::x());
  const JordanDecomposition smooth = jordan_decompose(ramp);
  CHECK(smooth.jumps.empty());
  CHECK(approx_equal_pw(smooth.continuous, ramp, 1e-15));

  const PiecewisePoly mixed =
      add_pw(ramp, scale_pw(PiecewisePoly::step(I, 0.0, 0.0, 1.0), 2.0));
  const JordanDecomposition jd = jordan_decompose(mixed);
  REQUIRE(jd.jumps.size() == 1);
  CHECK(jd.jumps[0].second == doctest::Approx(2.0));
  CHECK(approx_equal_pw(jd.continuous, ramp, 1e-14));
}

TEST_CASE("Jordan reconstruction reproduces the one-sided limits") {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const DynamicFn f = random_smooth_bv(I, {-0.5, 0.2, 0.6}, rng);
    const PiecewisePoly& ord = f.ordinary();
    const JordanDecomposition jd = jordan_decompose(ord);
    PiecewisePoly rebuilt = jd.continuous;
    for (const auto& [tau, sigma] : jd.jumps)
      rebuilt = add_pw(rebuilt,
                       scale_pw(PiecewisePoly::step(I, tau, 0.0, 1.0), sigma));
    for (double b : ord.breakpoints()) {
      if (b > I.lo)
        CHECK(eval_side(rebuilt, b, Side::left) ==
              doctest::Approx(eval_side(ord, b, Side::left)).epsilon(1e-12));
      if (b < I.hi)
        CHECK(eval_side(rebuilt, b, Side::right) ==
              doctest::Approx(eval_side(ord, b, Side::right)).epsilon(1e-12));
    }
    CHECK(is_continuous_pw(jd.continuous, 1e-10));
  }
}

TEST_CASE("canonical embedding of regulated functions") {
  const DynamicFn theta = theta_step(I, 0.0);
  const Profile* prof = theta.profile_at(0.0);
  REQUIRE(prof != nullptr);
  CHECK(eval_side(prof->curve(), -0.25, Side::left) == doctest::Approx(0.0));
  CHECK(eval_side(prof->curve(), 0.25, Side::left) == doctest::Approx(1.0));
  CHECK(prof->left_value() == doctest::Approx(0.0));
  CHECK(prof->right_value() == doctest::Approx(1.0));
  CHECK(!prof->continuous());

  const DynamicFn smooth =
      embed_regulated(PiecewisePoly::from_poly(I, Poly::x()));
  CHECK(smooth.profiles().empty());

  const DynamicFn negated =
      embed_regulated(scale_pw(PiecewisePoly::step(I, 0.0, 0.0, 1.0), -1.0));
  CHECK(negated.profile_at(0.0)->right_value() == doctest::Approx(-1.0));
}

TEST_CASE("sequential representation") {
  const PiecewisePoly f1 = sequential_representation(ramp_profile(), 0.0, 1, I);
  CHECK(eval_side(f1, 0.25, Side::left) == doctest::Approx(0.75));
  CHECK(eval_side(f1, 0.75, Side::left) == doctest::Approx(0.0));
  CHECK(eval_side(f1, -0.75, Side::left) == doctest::Approx(0.0));

  const PiecewisePoly f2 =
      sequential_representation(Profile::constant(1.0), 0.0, 2, I);
  CHECK(eval_side(f2, 0.2, Side::left) == doctest::Approx(1.0));
  CHECK(eval_side(f2, 0.3, Side::left) == doctest::Approx(0.0));

  // Substitution rule at n and 2n.
  Rng rng(23);
  for (int n : {1, 2, 4, 8, 16}) {
    const Profile prof = Profile::from_poly(
        Poly(std::vector<double>{rng.uniform(-1.0, 1.0),
                                 rng.uniform(-1.0, 1.0),
                                 rng.uniform(-1.0, 1.0)}));
    const double base = integrate(prof.curve());
    CHECK(integrate(sequential_representation(prof, 0.1, n, I)) ==
          doctest::Approx(base / n).epsilon(1e-12));
    CHECK(integrate(sequential_representation(prof, 0.1, 2 * n, I)) ==
          doctest::Approx(base / (2 * n)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(sequential_representation(ramp_profile(), 0.9, 1, I),
                  DomainError);
}

TEST_CASE("variation and norm") {
  const DynamicFn theta = theta_dynamic(I, 0.0, ramp_profile());
  CHECK(sbv_norm(theta) == doctest::Approx(1.0));
  CHECK(total_variation_dyn(theta) == doctest::Approx(1.0));

  const DynamicFn ramp(PiecewisePoly::from_poly({0.0, 1.0}, Poly::x()));
  CHECK(sbv_norm(ramp) == doctest::Approx(1.0));

  // Non-monotone transition beta(s) = (s + 1/2) + (2 s^2 - 1/2): endpoints
  // 0 and 1 with a dip to -1/8, total variation 1.25 (frozen from the
  // partition oracle).
  const Profile beta = Profile::from_poly(
      Poly::linear(0.5, 1.0) + Poly(std::vector<double>{-0.5, 0.0, 2.0}));
  CHECK(beta.left_value() == doctest::Approx(0.0));
  CHECK(beta.right_value() == doctest::Approx(1.0));
  CHECK(profile_variation_oracle(beta, 20000) ==
        doctest::Approx(1.25).epsilon(1e-6));
  const DynamicFn wavy_theta = theta_dynamic(I, 0.0, beta);
  CHECK(sbv_norm(wavy_theta) == doctest::Approx(1.25));
}

TEST_CASE("smoothness classification") {
  CHECK(theta_dynamic(I, 0.0, ramp_profile()).smooth_profiles());
  CHECK(!theta_step(I, 0.0).smooth_profiles());
}
