#include "dyndist/battery.hpp"

#include <algorithm>
#include <cmath>

#include "dyndist/errors.hpp"

namespace dyndist {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) {
  return (v << k) | (v >> (64 - k));
}

// Hermite cubic in local coordinates u in [0, h] with endpoint values and
// derivatives (v0, d0) and (v1, d1).
Poly hermite_local(double h, double v0, double d0, double v1, double d1) {
  const double delta = (v1 - v0) / h;
  const double c2 = (3.0 * delta - 2.0 * d0 - d1) / h;
  const double c3 = (d0 + d1 - 2.0 * delta) / (h * h);
  return Poly(std::vector<double>{v0, d0, c2, c3});
}

// Smooth random cubic on J from exact endpoint values; the quadratic factor
// u^2 - u vanishes at both ends of J in local coordinates.
Profile random_profile(double left, double right, Rng& rng) {
  const Poly linear = Poly::linear(left, right - left);
  const Poly vanishing(std::vector<double>{0.0, -1.0, 1.0});
  const Poly wiggle =
      Poly::linear(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  Poly curve = linear + vanishing * wiggle;
  return Profile(PiecewisePoly::from_local(
      {kProfileDomain.lo, kProfileDomain.hi}, {std::move(curve)}));
}

struct NodeData {
  double t = 0.0;
  double value_left = 0.0;
  double value_right = 0.0;
  double deriv_left = 0.0;
  double deriv_right = 0.0;
  bool jumps = false;
};

// Piecewise cubic through the nodes, Hermite on each gap.
PiecewisePoly hermite_chain(const std::vector<NodeData>& nodes) {
  std::vector<double> grid;
  std::vector<Poly> pieces;
  grid.reserve(nodes.size());
  for (const NodeData& n : nodes) grid.push_back(n.t);
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double h = nodes[k + 1].t - nodes[k].t;
    pieces.push_back(hermite_local(h, nodes[k].value_right,
                                   nodes[k].deriv_right,
                                   nodes[k + 1].value_left,
                                   nodes[k + 1].deriv_left));
  }
  return PiecewisePoly::from_local(std::move(grid), std::move(pieces));
}

// Insert a random node into the widest gap, keeping a quarter-gap clearance
// from both ends.
void insert_random_node(std::vector<double>& nodes, Rng& rng) {
  std::size_t widest = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (nodes[i + 1] - nodes[i] > nodes[widest + 1] - nodes[widest])
      widest = i;
  const double lo = nodes[widest];
  const double hi = nodes[widest + 1];
  nodes.insert(nodes.begin() + static_cast<std::ptrdiff_t>(widest) + 1,
               rng.uniform(lo + 0.25 * (hi - lo), hi - 0.25 * (hi - lo)));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : state_) s = splitmix64(seed);
}

std::uint64_t Rng::next_bits() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::unit() {
  return static_cast<double>(next_bits() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

std::uint64_t Rng::below(std::uint64_t n) { return next_bits() % n; }

std::vector<TestFn> make_battery(Interval interval,
                                 const std::vector<double>& atom_locations,
                                 std::uint64_t seed, int count) {
  if (!interval.valid()) throw ValidationError("empty interval");
  std::vector<double> atoms = atom_locations;
  std::sort(atoms.begin(), atoms.end());
  for (double tau : atoms)
    if (!(interval.lo < tau && tau < interval.hi))
      throw DomainError("atom location outside the open interval");

  Rng rng(seed);
  const double len = interval.length();
  std::vector<TestFn> battery;
  battery.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const bool with_profiles = (i % 2) == 1;
    // Support containing every atom, strictly inside the interval.
    const double first_anchor = atoms.empty() ? interval.lo + 0.45 * len
                                              : atoms.front();
    const double last_anchor = atoms.empty() ? interval.hi - 0.45 * len
                                             : atoms.back();
    const double c = interval.lo +
                     rng.uniform(0.1, 0.45) * (first_anchor - interval.lo);
    const double d = interval.hi -
                     rng.uniform(0.1, 0.45) * (interval.hi - last_anchor);

    std::vector<double> node_ts{c};
    for (double tau : atoms) node_ts.push_back(tau);
    node_ts.push_back(d);
    insert_random_node(node_ts, rng);
    insert_random_node(node_ts, rng);

    std::vector<NodeData> nodes;
    nodes.reserve(node_ts.size());
    for (double t : node_ts) {
      NodeData n;
      n.t = t;
      const bool is_atom =
          std::binary_search(atoms.begin(), atoms.end(), t);
      const bool is_edge = (t == c || t == d);
      if (is_edge) {
        n.value_left = n.value_right = 0.0;
      } else if (is_atom && with_profiles) {
        n.value_left = rng.uniform(-1.0, 1.0);
        n.value_right = rng.uniform(-1.0, 1.0);
        n.jumps = true;
      } else {
        n.value_left = n.value_right = rng.uniform(-1.0, 1.0);
      }
      n.deriv_left = rng.uniform(-2.0, 2.0);
      n.deriv_right = rng.uniform(-2.0, 2.0);
      nodes.push_back(n);
    }

    PiecewisePoly inner = hermite_chain(nodes);
    PiecewisePoly ordinary = extend_by_zero(inner, interval);
    std::map<double, Profile> profiles;
    for (const NodeData& n : nodes) {
      if (!n.jumps) continue;
      // Read the limits back from the assembled function so the profile
      // endpoints match exactly.
      const double left = eval_side(ordinary, n.t, Side::left);
      const double right = eval_side(ordinary, n.t, Side::right);
      profiles.emplace(n.t, random_profile(left, right, rng));
    }
    battery.emplace_back(DynamicFn(std::move(ordinary), std::move(profiles)),
                         Interval{c, d});
  }
  return battery;
}

std::vector<TestFn> continuous_battery(const std::vector<TestFn>& battery) {
  std::vector<TestFn> out;
  for (std::size_t i = 0; i < battery.size(); i += 2) out.push_back(battery[i]);
  return out;
}

DynamicFn random_smooth_bv(Interval interval,
                           const std::vector<double>& jump_locations,
                           Rng& rng) {
  std::vector<double> jumps = jump_locations;
  std::sort(jumps.begin(), jumps.end());
  std::vector<double> node_ts{interval.lo};
  for (double tau : jumps) node_ts.push_back(tau);
  node_ts.push_back(interval.hi);
  insert_random_node(node_ts, rng);

  std::vector<NodeData> nodes;
  for (double t : node_ts) {
    NodeData n;
    n.t = t;
    const bool is_jump = std::binary_search(jumps.begin(), jumps.end(), t);
    n.value_left = rng.uniform(-1.0, 1.0);
    n.value_right = is_jump ? rng.uniform(-1.0, 1.0) : n.value_left;
    n.deriv_left = rng.uniform(-2.0, 2.0);
    n.deriv_right = rng.uniform(-2.0, 2.0);
    n.jumps = is_jump;
    nodes.push_back(n);
  }

  PiecewisePoly ordinary = hermite_chain(nodes);
  std::map<double, Profile> profiles;
  for (const NodeData& n : nodes) {
    if (!n.jumps) continue;
    const double left = eval_side(ordinary, n.t, Side::left);
    const double right = eval_side(ordinary, n.t, Side::right);
    profiles.emplace(n.t, random_profile(left, right, rng));
  }
  return DynamicFn(std::move(ordinary), std::move(profiles));
}

}  // namespace dyndist
