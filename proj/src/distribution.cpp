#include "dyndist/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyndist/errors.hpp"

namespace dyndist {

namespace {

void check_same_interval(Interval a, Interval b) {
  const double tol = 1e-12 * std::max(a.length(), b.length());
  if (std::abs(a.lo - b.lo) > tol || std::abs(a.hi - b.hi) > tol)
    throw DomainError("objects live on different intervals");
}

PiecewisePoly zero_on(Interval interval) {
  return PiecewisePoly::from_poly(interval, Poly());
}

bool vanishes(const PiecewisePoly& p, double lo, double hi, double atol) {
  const auto& breaks = p.breakpoints();
  for (std::size_t k = 0; k < p.piece_count(); ++k) {
    const double a = std::max(breaks[k], lo);
    const double b = std::min(breaks[k + 1], hi);
    if (a >= b) continue;
    if (max_abs_coeff(p.piece_local(k)) > atol) return false;
  }
  return true;
}

}  // namespace

TestFn::TestFn(DynamicFn body, Interval support)
    : body_(std::move(body)), support_(support) {
  const Interval dom = body_.interval();
  if (!(support_.lo > dom.lo && support_.hi < dom.hi && support_.valid()))
    throw DomainError("support must be a closed subinterval strictly inside "
                      "the open interval");
  const double atol = 1e-12 * std::max(1.0, max_abs_coeff(body_.ordinary()));
  if (!vanishes(body_.ordinary(), dom.lo, support_.lo, atol) ||
      !vanishes(body_.ordinary(), support_.hi, dom.hi, atol))
    throw ValidationError("test function does not vanish outside its support");
  for (const auto& [tau, prof] : body_.profiles()) {
    (void)prof;
    if (tau < support_.lo - 1e-12 || tau > support_.hi + 1e-12)
      throw ValidationError("profile outside the support interval");
  }
}

double Atom::mass() const {
  return right_weight + left_weight + integrate(density);
}

bool Atom::pure_density() const {
  return right_weight == 0.0 && left_weight == 0.0;
}

Distribution::Distribution(Interval interval)
    : Distribution(zero_on(interval), zero_on(interval), {}) {}

Distribution::Distribution(PiecewisePoly regular, PiecewisePoly stieltjes,
                           std::vector<Atom> atoms)
    : regular_(std::move(regular)),
      stieltjes_(std::move(stieltjes)),
      atoms_(std::move(atoms)) {
  check_same_interval(regular_.domain(), stieltjes_.domain());
  if (!is_continuous_pw(stieltjes_,
                        1e-9 * std::max(1.0, max_abs_coeff(stieltjes_))))
    throw ValidationError("Stieltjes integrator must be continuous");
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  const Interval dom = regular_.domain();
  const double tol = regular_.merge_tol();
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!(dom.lo < atoms_[i].location && atoms_[i].location < dom.hi))
      throw DomainError("atom location outside the open interval");
    if (i > 0 && atoms_[i].location - atoms_[i - 1].location <= tol)
      throw ValidationError("atom locations must be pairwise distinct");
  }
}

Distribution Distribution::regular(PiecewisePoly density) {
  Interval dom = density.domain();
  return Distribution(std::move(density), zero_on(dom), {});
}

Distribution Distribution::stieltjes(PiecewisePoly integrator) {
  Interval dom = integrator.domain();
  return Distribution(zero_on(dom), std::move(integrator), {});
}

double pair(const Distribution& T, const TestFn& phi) {
  check_same_interval(T.interval(), phi.interval());
  const PiecewisePoly& body = phi.body().ordinary();
  double value = integrate(multiply_pw(T.regular_part(), body));
  // The integrator is continuous and piecewise polynomial, so the Stieltjes
  // pairing reduces to an exact weighted integral against its derivative.
  value += integrate(multiply_pw(derivative_pw(T.stieltjes_part()), body));
  for (const Atom& atom : T.atoms()) {
    const double tau = atom.location;
    if (atom.right_weight != 0.0)
      value += atom.right_weight * eval_side(body, tau, Side::right);
    if (atom.left_weight != 0.0)
      value += atom.left_weight * eval_side(body, tau, Side::left);
    if (max_abs_coeff(atom.density) != 0.0) {
      const Profile phi_val = phi.body().dynamic_value(tau);
      value += integrate(multiply_pw(phi_val.curve(), atom.density));
    }
  }
  return value;
}

Distribution delta(Interval interval, double tau, const Shape& shape) {
  Atom atom;
  atom.location = tau;
  atom.density = shape.density();
  return Distribution(zero_on(interval), zero_on(interval), {atom});
}

Distribution delta_lambda(Interval interval, double tau, double lambda) {
  Atom atom;
  atom.location = tau;
  atom.right_weight = lambda;
  atom.left_weight = 1.0 - lambda;
  atom.density = PiecewisePoly::from_poly(kProfileDomain, Poly());
  return Distribution(zero_on(interval), zero_on(interval), {atom});
}

Distribution multiply(const Distribution& T, const DynamicFn& g) {
  check_same_interval(T.interval(), g.interval());
  const PiecewisePoly& ord = g.ordinary();
  PiecewisePoly regular = multiply_pw(T.regular_part(), ord);
  // Fold the Stieltjes part into the regular density.
  regular = add_pw(regular,
                   multiply_pw(derivative_pw(T.stieltjes_part()), ord));
  std::vector<Atom> atoms;
  atoms.reserve(T.atoms().size());
  for (const Atom& atom : T.atoms()) {
    const double tau = atom.location;
    Atom out;
    out.location = tau;
    out.right_weight = atom.right_weight * eval_side(ord, tau, Side::right);
    out.left_weight = atom.left_weight * eval_side(ord, tau, Side::left);
    out.density = multiply_pw(g.dynamic_value(tau).curve(), atom.density);
    atoms.push_back(std::move(out));
  }
  return Distribution(std::move(regular), zero_on(T.interval()),
                      std::move(atoms));
}

Distribution derivative(const DynamicFn& f) {
  if (!f.smooth_profiles())
    throw NotDifferentiableError(
        "derivative requires absolutely continuous transition profiles");
  const JordanDecomposition jd = jordan_decompose(f.ordinary());
  std::vector<Atom> atoms;
  atoms.reserve(f.profiles().size());
  for (const auto& [tau, prof] : f.profiles()) {
    Atom atom;
    atom.location = tau;
    atom.density = derivative_pw(prof.curve());
    atoms.push_back(std::move(atom));
  }
  return Distribution(zero_on(f.interval()), jd.continuous, std::move(atoms));
}

PiecewisePoly mollify(const Distribution& T, int n) {
  if (n < 1) throw ValidationError("mollification index must be positive");
  const Interval dom = T.interval();
  PiecewisePoly out =
      add_pw(T.regular_part(), derivative_pw(T.stieltjes_part()));
  const double half = 0.5 / static_cast<double>(n);
  double previous_hi = dom.lo;
  for (const Atom& atom : T.atoms()) {
    if (!atom.pure_density())
      throw ValidationError(
          "delta-sequence undefined for two-sided point weights");
    const Interval window{atom.location - half, atom.location + half};
    if (!(window.lo > dom.lo && window.hi < dom.hi))
      throw DomainError("mollifier window escapes the interval");
    if (window.lo < previous_hi)
      throw ValidationError("mollifier windows overlap");
    previous_hi = window.hi;
    PiecewisePoly bump = scale_pw(
        affine_rescale(atom.density, static_cast<double>(n), atom.location,
                       window),
        static_cast<double>(n));
    out = add_pw(out, extend_by_zero(bump, dom));
  }
  return out;
}

Distribution add(const Distribution& a, const Distribution& b) {
  check_same_interval(a.interval(), b.interval());
  const double tol = a.regular_part().merge_tol();
  std::vector<Atom> atoms = a.atoms();
  for (const Atom& atom : b.atoms()) {
    bool merged = false;
    for (Atom& mine : atoms) {
      if (std::abs(mine.location - atom.location) <= tol) {
        mine.right_weight += atom.right_weight;
        mine.left_weight += atom.left_weight;
        mine.density = add_pw(mine.density, atom.density);
        merged = true;
        break;
      }
    }
    if (!merged) atoms.push_back(atom);
  }
  return Distribution(add_pw(a.regular_part(), b.regular_part()),
                      add_pw(a.stieltjes_part(), b.stieltjes_part()),
                      std::move(atoms));
}

Distribution scale(const Distribution& a, double s) {
  std::vector<Atom> atoms = a.atoms();
  for (Atom& atom : atoms) {
    atom.right_weight *= s;
    atom.left_weight *= s;
    atom.density = scale_pw(atom.density, s);
  }
  return Distribution(scale_pw(a.regular_part(), s),
                      scale_pw(a.stieltjes_part(), s), std::move(atoms));
}

TestFn multiply_testfn(const DynamicFn& g, const TestFn& phi) {
  return TestFn(mul_dynamic(g, phi.body()), phi.support());
}

double leibniz_residual(const DynamicFn& f, const DynamicFn& g,
                        const std::vector<TestFn>& battery) {
  const Distribution product_rule =
      add(multiply(derivative(f), g), multiply(derivative(g), f));
  const Distribution direct = derivative(mul_dynamic(f, g));
  double residual = 0.0;
  for (const TestFn& phi : battery)
    residual = std::max(residual,
                        std::abs(pair(direct, phi) - pair(product_rule, phi)));
  return residual;
}

std::vector<double> convergence_residual(const std::vector<Distribution>& seq,
                                         const Distribution& limit,
                                         const std::vector<TestFn>& battery) {
  std::vector<double> residuals;
  residuals.reserve(seq.size());
  for (const Distribution& term : seq) {
    double r = 0.0;
    for (const TestFn& phi : battery)
      r = std::max(r, std::abs(pair(term, phi) - pair(limit, phi)));
    residuals.push_back(r);
  }
  return residuals;
}

bool approx_equal_dist(const Distribution& a, const Distribution& b,
                       const std::vector<TestFn>& battery, double tol) {
  for (const TestFn& phi : battery)
    if (std::abs(pair(a, phi) - pair(b, phi)) > tol) return false;
  if (a.atoms().size() != b.atoms().size()) return false;
  for (std::size_t i = 0; i < a.atoms().size(); ++i) {
    const Atom& x = a.atoms()[i];
    const Atom& y = b.atoms()[i];
    if (std::abs(x.location - y.location) > tol) return false;
    if (std::abs(x.right_weight - y.right_weight) > tol) return false;
    if (std::abs(x.left_weight - y.left_weight) > tol) return false;
    if (!approx_equal_pw(x.density, y.density, tol)) return false;
  }
  return true;
}

}  // namespace dyndist
