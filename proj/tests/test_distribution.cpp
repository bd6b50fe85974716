#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "dyndist/battery.hpp"
#include "dyndist/distribution.hpp"
#include "dyndist/errors.hpp"

using namespace dyndist;

namespace {

const Interval I{-2.0, 2.0};

Profile ramp_profile() { return Profile::from_poly(Poly::linear(0.5, 1.0)); }

// Triangle test function max(0, 1 - |t|), support [-1, 1].
TestFn triangle() {
  PiecewisePoly body = PiecewisePoly::from_local(
      {-2.0, -1.0, 0.0, 1.0, 2.0},
      {Poly(), Poly::linear(0.0, 1.0), Poly::linear(1.0, -1.0), Poly()});
  return TestFn(DynamicFn(std::move(body)), {-1.0, 1.0});
}

// Step test function: 0 left of tau, v right of it, supported on [-1, 1],
// with the two-valued embedding profile at tau.
TestFn step_testfn(double tau, double v) {
  PiecewisePoly body = PiecewisePoly::from_local(
      {-2.0, -1.0, tau, 1.0, 2.0},
      {Poly(), Poly(), Poly::constant(v), Poly()});
  return TestFn(embed_regulated(std::move(body)), {-1.0, 1.0});
}

// Random distribution with the given atom locations: regular part, a
// continuous Stieltjes integrator and atoms mixing weights and densities.
Distribution random_distribution(const std::vector<double>& atom_locs,
                                 Rng& rng) {
  const DynamicFn reg = random_smooth_bv(I, {rng.uniform(-1.0, 1.0)}, rng);
  const JordanDecomposition jd = jordan_decompose(
      random_smooth_bv(I, {}, rng).ordinary());
  std::vector<Atom> atoms;
  for (double tau : atom_locs) {
    Atom atom;
    atom.location = tau;
    if (rng.below(2) == 0) {
      atom.right_weight = rng.uniform(-1.0, 1.0);
      atom.left_weight = rng.uniform(-1.0, 1.0);
    }
    if (rng.below(4) != 0) {
      atom.density = PiecewisePoly::from_poly(
          kProfileDomain,
          Poly(std::vector<double>{rng.uniform(-1.0, 1.0),
                                   rng.uniform(-1.0, 1.0),
                                   rng.uniform(-1.0, 1.0)}));
    } else {
      atom.density = PiecewisePoly::from_poly(kProfileDomain, Poly());
    }
    atoms.push_back(std::move(atom));
  }
  return Distribution(reg.ordinary(), jd.continuous, std::move(atoms));
}

// Random multiplier with a mix of smooth profiles, step embeddings and
// continuity at the prescribed atom locations.
DynamicFn random_multiplier(const std::vector<double>& atom_locs, Rng& rng) {
  std::vector<double> jumps;
  std::vector<double> steppy;
  for (double tau : atom_locs) {
    const auto choice = rng.below(3);
    if (choice == 0)
      jumps.push_back(tau);
    else if (choice == 1)
      steppy.push_back(tau);
  }
  std::vector<double> all = jumps;
  all.insert(all.end(), steppy.begin(), steppy.end());
  DynamicFn smooth = random_smooth_bv(I, all, rng);
  if (steppy.empty()) return smooth;
  // Demote the transitions at the steppy locations to two-valued embeddings.
  std::map<double, Profile> profiles = smooth.profiles();
  for (double tau : steppy) {
    profiles.erase(tau);
    profiles.emplace(tau,
                     Profile::step(eval_side(smooth.ordinary(), tau, Side::left),
                                   eval_side(smooth.ordinary(), tau, Side::right)));
  }
  return DynamicFn(smooth.ordinary(), std::move(profiles));
}

}  // namespace

TEST_CASE("pairing with a regular step density") {
  const Distribution T = Distribution::regular(
      PiecewisePoly::step(I, 0.0, 0.0, 1.0));
  CHECK(pair(T, triangle()) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("shaped delta pairing") {
  const Distribution d = delta(I, 0.0, uniform_shape());
  // Continuous at 0 with value 1.
  CHECK(pair(d, triangle()) == doctest::Approx(1.0).epsilon(1e-13));
  // Shape independence on continuous test functions.
  CHECK(pair(delta(I, 0.0, ramp_shape()), triangle()) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(pair(delta(I, 0.0, quadratic_shape()), triangle()) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("two-sided delta pairing") {
  const Distribution d = delta_lambda(I, 0.0, 1.0);
  CHECK(pair(d, step_testfn(0.0, 5.0)) == doctest::Approx(5.0));
  const Distribution half = delta_lambda(I, 0.0, 0.5);
  CHECK(pair(half, step_testfn(0.0, 5.0)) == doctest::Approx(2.5));
}

TEST_CASE("shape normalization is enforced") {
  CHECK_THROWS_AS(
      Shape(PiecewisePoly::constant(kProfileDomain, 2.0)),
      NormalizationError);
}

TEST_CASE("product with the dynamic Heaviside (smooth transition)") {
  const DynamicFn theta = theta_dynamic(I, 0.0, ramp_profile());
  const Distribution product = multiply(delta(I, 0.0, uniform_shape()), theta);
  REQUIRE(product.atoms().size() == 1);
  const Atom& atom = product.atoms()[0];
  CHECK(atom.mass() == doctest::Approx(0.5).epsilon(1e-14));
  // Normalized shape is 2 beta = 2s + 1.
  const PiecewisePoly gamma = scale_pw(atom.density, 1.0 / integrate(atom.density));
  CHECK(approx_equal_pw(
      gamma, PiecewisePoly::from_poly(kProfileDomain, Poly::linear(1.0, 2.0)),
      1e-13));
}

TEST_CASE("product with the embedded step Heaviside") {
  const DynamicFn theta = theta_step(I, 0.0);
  const Distribution product = multiply(delta(I, 0.0, uniform_shape()), theta);
  REQUIRE(product.atoms().size() == 1);
  const Atom& atom = product.atoms()[0];
  CHECK(atom.mass() == doctest::Approx(0.5).epsilon(1e-14));
  const PiecewisePoly gamma = scale_pw(atom.density, 1.0 / integrate(atom.density));
  CHECK(approx_equal_pw(
      gamma, PiecewisePoly::step(kProfileDomain, 0.0, 0.0, 2.0), 1e-13));
}

TEST_CASE("ordinary multiplier scales a delta") {
  const DynamicFn g(PiecewisePoly::from_poly(I, Poly::linear(1.0, 1.0)));
  const Distribution product = multiply(delta(I, 0.5, ramp_shape()), g);
  REQUIRE(product.atoms().size() == 1);
  // g(0.5) = 1.5 scales the mass; the shape is untouched up to scaling.
  CHECK(product.atoms()[0].mass() == doctest::Approx(1.5).epsilon(1e-13));
  std::vector<TestFn> battery = make_battery(I, {0.5}, kBatterySeed, 16);
  const Distribution expected = scale(delta(I, 0.5, ramp_shape()), 1.5);
  for (const TestFn& phi : battery)
    CHECK(pair(product, phi) ==
          doctest::Approx(pair(expected, phi)).epsilon(1e-12));
}

TEST_CASE("master multiplication identity") {
  Rng rng(31);
  const std::vector<double> atom_locs{-0.5, 0.25};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Distribution T = random_distribution(atom_locs, rng);
    const DynamicFn g = random_multiplier(atom_locs, rng);
    const std::vector<TestFn> battery =
        make_battery(I, atom_locs, kBatterySeed + trial, 8);
    for (const TestFn& phi : battery) {
      const double lhs = pair(multiply(T, g), phi);
      const double rhs = pair(T, multiply_testfn(g, phi));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("associativity of multiplication") {
  Rng rng(32);
  const std::vector<double> atom_locs{0.0};
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const Distribution T = random_distribution(atom_locs, rng);
    const DynamicFn g = random_multiplier(atom_locs, rng);
    const DynamicFn h = random_multiplier(atom_locs, rng);
    const std::vector<TestFn> battery =
        make_battery(I, atom_locs, kBatterySeed + 100 + trial, 8);
    const Distribution lhs = multiply(multiply(T, g), h);
    const Distribution rhs = multiply(T, mul_dynamic(g, h));
    for (const TestFn& phi : battery)
      worst = std::max(worst, std::abs(pair(lhs, phi) - pair(rhs, phi)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("products of regular distributions stay regular") {
  Rng rng(33);
  const Distribution T =
      Distribution::regular(random_smooth_bv(I, {0.3}, rng).ordinary());
  const DynamicFn g = random_multiplier({0.3}, rng);
  const Distribution product = multiply(T, g);
  CHECK(product.atoms().empty());
  CHECK(approx_equal_pw(product.regular_part(),
                        multiply_pw(T.regular_part(), g.ordinary()), 1e-12));
}

TEST_CASE("derivative of the dynamic Heaviside") {
  const DynamicFn theta = theta_dynamic(I, 0.0, ramp_profile());
  const Distribution d = derivative(theta);
  REQUIRE(d.atoms().size() == 1);
  CHECK(d.atoms()[0].mass() == doctest::Approx(1.0).epsilon(1e-14));
  // beta' = 1 is the uniform shape.
  CHECK(approx_equal_pw(d.atoms()[0].density,
                        PiecewisePoly::constant(kProfileDomain, 1.0), 1e-13));
  CHECK(max_abs_coeff(derivative_pw(d.stieltjes_part())) <= 1e-14);
}

TEST_CASE("derivative of a classical ramp is the constant density") {
  const DynamicFn ramp(PiecewisePoly::from_poly(I, Poly::x()));
  const Distribution d = derivative(ramp);
  CHECK(d.atoms().empty());
  const Distribution one =
      Distribution::regular(PiecewisePoly::constant(I, 1.0));
  for (const TestFn& phi : make_battery(I, {}, kBatterySeed, 8))
    CHECK(pair(d, phi) == doctest::Approx(pair(one, phi)).epsilon(1e-12));
}

TEST_CASE("derivative is linear across jump and smooth parts") {
  const DynamicFn theta2 = scale_dynamic(theta_dynamic(I, 0.0, ramp_profile()), 2.0);
  const DynamicFn combo(
      add_pw(PiecewisePoly::from_poly(I, Poly::x()), theta2.ordinary()),
      theta2.profiles());
  const Distribution d = derivative(combo);
  REQUIRE(d.atoms().size() == 1);
  CHECK(d.atoms()[0].mass() == doctest::Approx(2.0).epsilon(1e-13));
  // Paired against continuous tests, d acts as density 1 plus 2 delta.
  for (const TestFn& phi : continuous_battery(make_battery(I, {0.0}, 7, 8))) {
    const double direct = pair(d, phi);
    const double expected =
        integrate(phi.body().ordinary()) +
        2.0 * eval_side(phi.body().ordinary(), 0.0, Side::right);
    CHECK(direct == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("step embeddings are not differentiable") {
  CHECK_THROWS_AS(derivative(theta_step(I, 0.0)), NotDifferentiableError);
}

TEST_CASE("mollification") {
  const Distribution d = delta(I, 0.0, uniform_shape());
  const PiecewisePoly omega2 = mollify(d, 2);
  CHECK(eval_side(omega2, 0.0, Side::right) == doctest::Approx(2.0));
  CHECK(eval_side(omega2, 0.3, Side::right) == doctest::Approx(0.0));

  // Mass preservation at every index.
  Rng rng(34);
  for (int n : {1, 2, 4, 16, 64, 256, 1024}) {
    const Poly raw(std::vector<double>{rng.uniform(0.0, 1.0),
                                       rng.uniform(-0.5, 0.5)});
    Atom atom;
    atom.location = 0.0;
    atom.density = PiecewisePoly::from_poly(kProfileDomain, raw);
    const Distribution shaped(PiecewisePoly::from_poly(I, Poly()),
                              PiecewisePoly::from_poly(I, Poly()), {atom});
    CHECK(integrate(mollify(shaped, n)) ==
          doctest::Approx(integrate(atom.density)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(mollify(delta_lambda(I, 0.0, 0.5), 4), ValidationError);
}

TEST_CASE("mollified product identity is exact") {
  const Profile beta = ramp_profile();
  const Shape alpha = uniform_shape();
  const PiecewisePoly beta_alpha =
      multiply_pw(beta.curve(), alpha.density());
  const double weight = integrate(beta_alpha);
  REQUIRE(weight == doctest::Approx(0.5));
  const Shape gamma(scale_pw(beta_alpha, 1.0 / weight));

  for (int n = 1; n <= 1024; n *= 2) {
    const PiecewisePoly f_n = sequential_representation(beta, 0.0, n, I);
    const PiecewisePoly omega_alpha = mollify(delta(I, 0.0, alpha), n);
    const PiecewisePoly omega_gamma = mollify(delta(I, 0.0, gamma), n);
    const PiecewisePoly residual = sub_pw(multiply_pw(f_n, omega_alpha),
                                          scale_pw(omega_gamma, weight));
    CHECK(max_abs_coeff(residual) <= 1e-12);
  }
}

TEST_CASE("restriction to continuous test functions is shape independent") {
  const std::vector<TestFn> battery =
      continuous_battery(make_battery(I, {0.25}, kBatterySeed, 32));
  for (const TestFn& phi : battery) {
    const double expected = eval_side(phi.body().ordinary(), 0.25, Side::right);
    for (const Shape& shape :
         {uniform_shape(), ramp_shape(), quadratic_shape()})
      CHECK(pair(delta(I, 0.25, shape), phi) ==
            doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("step-times-delta family reproduces every classical constant") {
  for (double c : {0.0, 0.5, 1.0}) {
    const Shape alpha = split_shape(c);
    CHECK(integrate(alpha.density(), 0.0, 0.5) == doctest::Approx(c));
    const Distribution product =
        multiply(delta(I, 0.0, alpha), theta_step(I, 0.0));
    REQUIRE(product.atoms().size() == 1);
    CHECK(product.atoms()[0].mass() == doctest::Approx(c).epsilon(1e-14));
  }
}

TEST_CASE("Leibniz rule") {
  const Interval narrow{-1.0, 1.0};
  const DynamicFn theta = theta_dynamic(narrow, 0.0, ramp_profile());
  const std::vector<TestFn> battery = make_battery(narrow, {0.0}, kBatterySeed, 32);
  CHECK(leibniz_residual(theta, theta, battery) <= 1e-9);

  // Continuous polynomial times the dynamic Heaviside; both sides evaluated
  // through an independent expansion of the pairing sums.
  const DynamicFn poly_fn(
      PiecewisePoly::from_poly(narrow, Poly(std::vector<double>{0.3, 1.0, -0.5})));
  CHECK(leibniz_residual(poly_fn, theta, battery) <= 1e-9);
  for (const TestFn& phi : battery) {
    const Distribution direct = derivative(mul_dynamic(poly_fn, theta));
    // (df g, phi) + (f dg, phi) expanded by hand:
    //   int phi_hat g_hat dfc + sum_J g phi (f-profile)'
    // + int phi_hat f_hat dgc + sum_J f phi (g-profile)'.
    const PiecewisePoly phi_hat = phi.body().ordinary();
    const JordanDecomposition f_jordan = jordan_decompose(poly_fn.ordinary());
    const JordanDecomposition g_jordan = jordan_decompose(theta.ordinary());
    double by_hand =
        integrate(multiply_pw(multiply_pw(phi_hat, theta.ordinary()),
                              derivative_pw(f_jordan.continuous))) +
        integrate(multiply_pw(multiply_pw(phi_hat, poly_fn.ordinary()),
                              derivative_pw(g_jordan.continuous)));
    const Profile phi_at = phi.body().dynamic_value(0.0);
    const Profile f_at = poly_fn.dynamic_value(0.0);
    const Profile g_at = theta.dynamic_value(0.0);
    by_hand += integrate(multiply_pw(
        multiply_pw(f_at.curve(), phi_at.curve()),
        derivative_pw(g_at.curve())));
    CHECK(pair(direct, phi) == doctest::Approx(by_hand).epsilon(1e-11));
  }

  // Randomized pairs sharing jump locations.
  Rng rng(35);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const DynamicFn f = random_smooth_bv(narrow, {-0.3, 0.4}, rng);
    const DynamicFn g = random_smooth_bv(narrow, {-0.3, 0.4}, rng);
    const std::vector<TestFn> b =
        make_battery(narrow, {-0.3, 0.4}, kBatterySeed + trial, 8);
    worst = std::max(worst, leibniz_residual(f, g, b));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("convergence of delta sequences on continuous test functions") {
  const Shape alpha = ramp_shape();
  const Distribution limit = delta(I, 0.0, alpha);
  const std::vector<TestFn> battery =
      continuous_battery(make_battery(I, {0.0}, kBatterySeed, 32));

  std::vector<Distribution> seq;
  std::vector<int> ns;
  for (int n = 16; n <= 1024; n *= 2) {
    seq.push_back(Distribution::regular(mollify(limit, n)));
    ns.push_back(n);
  }
  const std::vector<double> residuals =
      convergence_residual(seq, limit, battery);
  for (std::size_t k = 0; k + 1 < residuals.size(); ++k) {
    CHECK(residuals[k + 1] <= 0.6 * residuals[k]);
  }

  // First-order Taylor prediction of the residual for one member. The test
  // functions may kink at the atom, so the prediction splits at s = 0:
  //   pair(omega_n, phi) - phi(0)
  //     = (phi'(0-) m_- + phi'(0+) m_+)/n + O(1/n^2),
  // with m_± the half-interval first moments of the shape.
  const TestFn& phi = battery[0];
  const PiecewisePoly slope_fn = derivative_pw(phi.body().ordinary());
  const double slope_left = eval_side(slope_fn, 0.0, Side::left);
  const double slope_right = eval_side(slope_fn, 0.0, Side::right);
  const PiecewisePoly s_alpha = multiply_pw(
      PiecewisePoly::from_poly(kProfileDomain, Poly::x()), alpha.density());
  const double m_left = integrate(s_alpha, -0.5, 0.0);
  const double m_right = integrate(s_alpha, 0.0, 0.5);
  const int n_check = 1024;
  const double measured =
      pair(Distribution::regular(mollify(limit, n_check)), phi) -
      pair(limit, phi);
  CHECK(measured == doctest::Approx((slope_left * m_left +
                                     slope_right * m_right) /
                                    n_check)
                        .epsilon(0.02));
}

TEST_CASE("products along the sequential representation converge") {
  const Profile beta = ramp_profile();
  const Shape alpha = uniform_shape();
  const double weight =
      integrate(multiply_pw(beta.curve(), alpha.density()));
  const DynamicFn theta = theta_dynamic(I, 0.0, beta);
  const Distribution limit = multiply(delta(I, 0.0, alpha), theta);
  const std::vector<TestFn> battery =
      continuous_battery(make_battery(I, {0.0}, kBatterySeed, 32));

  std::vector<Distribution> seq;
  for (int n = 16; n <= 1024; n *= 2) {
    const PiecewisePoly f_n = sequential_representation(beta, 0.0, n, I);
    const PiecewisePoly omega_n = mollify(delta(I, 0.0, alpha), n);
    seq.push_back(Distribution::regular(multiply_pw(f_n, omega_n)));
  }
  const std::vector<double> residuals =
      convergence_residual(seq, limit, battery);
  for (std::size_t k = 0; k + 1 < residuals.size(); ++k)
    CHECK(residuals[k + 1] <= 0.7 * residuals[k] + 1e-14);
  CHECK(residuals.back() <= 1e-3);
  (void)weight;

  // A constant sequence has zero residual.
  const std::vector<double> zeros = convergence_residual(
      {limit, limit, limit}, limit, battery);
  for (double r : zeros) CHECK(r == doctest::Approx(0.0));
}

TEST_CASE("extensional distribution equality") {
  const std::vector<TestFn> battery = make_battery(I, {0.0}, kBatterySeed, 16);
  const Distribution a = delta(I, 0.0, uniform_shape());
  const Distribution b = delta(I, 0.0, uniform_shape());
  CHECK(approx_equal_dist(a, b, battery, 1e-10));
  const Distribution c = delta(I, 0.0, ramp_shape());
  CHECK(!approx_equal_dist(a, c, battery, 1e-10));
}

TEST_CASE("test function validation") {
  CHECK_THROWS_AS(
      TestFn(DynamicFn(PiecewisePoly::constant(I, 1.0)), {-1.0, 1.0}),
      ValidationError);
  CHECK_THROWS_AS(
      TestFn(DynamicFn(PiecewisePoly::constant(I, 0.0)), {-3.0, 1.0}),
      DomainError);
}
