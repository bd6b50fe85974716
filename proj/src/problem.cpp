#include "dyndist/problem.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dyndist/errors.hpp"
#include "dyndist/table.hpp"

namespace dyndist {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

double parse_real(const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw ValidationError("malformed number '" + t + "'");
  return v;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const std::string& token : split_ws(s)) out.push_back(parse_real(token));
  return out;
}

struct Line {
  std::string key;
  std::string value;
};

struct Section {
  std::string kind;
  std::string name;
  std::vector<Line> lines;

  const std::string* find(const std::string& key) const {
    for (const Line& l : lines)
      if (l.key == key) return &l.value;
    return nullptr;
  }
};

std::vector<Section> tokenize(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("unterminated section header", lineno);
      const std::string inner = trim(line.substr(1, line.size() - 2));
      const auto space = inner.find(' ');
      Section section;
      section.kind = space == std::string::npos ? inner : inner.substr(0, space);
      section.name =
          space == std::string::npos ? "" : trim(inner.substr(space + 1));
      sections.push_back(std::move(section));
      continue;
    }
    if (sections.empty())
      throw ParseError("content before the first section header", lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", lineno);
    sections.back().lines.push_back(
        {trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  return sections;
}

// "profile at 0.5" -> 0.5
double location_suffix(const std::string& key, const std::string& prefix) {
  return parse_real(key.substr(prefix.size()));
}

std::map<double, Profile> parse_profiles(const Section& section) {
  std::map<double, Profile> profiles;
  for (const Line& l : section.lines) {
    if (l.key.rfind("profile at ", 0) != 0) continue;
    const double tau = location_suffix(l.key, "profile at ");
    profiles.emplace(tau, Profile(parse_pwdata(l.value)));
  }
  return profiles;
}

DynamicFn build_dynamic(const Section& section, Interval interval) {
  const std::string* ordinary = section.find("ordinary");
  if (!ordinary) throw ValidationError("dynamic function needs 'ordinary'");
  PiecewisePoly body = parse_pwdata(*ordinary);
  const double tol = 1e-9 * std::max(1.0, interval.length());
  if (std::abs(body.domain().lo - interval.lo) > tol ||
      std::abs(body.domain().hi - interval.hi) > tol)
    throw ValidationError("ordinary part must span the problem interval");
  std::map<double, Profile> profiles = parse_profiles(section);
  const std::string* embed = section.find("embed");
  if (embed && *embed == "step") {
    const double atol = 1e-12 * std::max(1.0, max_abs_coeff(body));
    for (const auto& [tau, sigma] : interior_jumps(body, atol)) {
      (void)sigma;
      if (!profiles.count(tau))
        profiles.emplace(tau, Profile::step(eval_side(body, tau, Side::left),
                                            eval_side(body, tau, Side::right)));
    }
  }
  return DynamicFn(std::move(body), std::move(profiles));
}

Atom parse_atom(const std::string& key, const std::string& value,
                const std::map<std::string, Shape>& shapes) {
  Atom atom;
  atom.location = location_suffix(key, "atom at ");
  atom.density = PiecewisePoly::from_poly(kProfileDomain, Poly());
  std::string rest = trim(value);
  // mu= swallows the remainder of the line (its payload contains spaces).
  const auto mu_pos = rest.find("mu=");
  if (mu_pos != std::string::npos) {
    atom.density = parse_pwdata(rest.substr(mu_pos + 3));
    rest = trim(rest.substr(0, mu_pos));
  }
  for (const std::string& token : split_ws(rest)) {
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      throw ValidationError("atom entries must look like key=value");
    const std::string k = token.substr(0, eq);
    const std::string v = token.substr(eq + 1);
    if (k == "right") {
      atom.right_weight = parse_real(v);
    } else if (k == "left") {
      atom.left_weight = parse_real(v);
    } else if (k == "shape") {
      auto it = shapes.find(v);
      if (it == shapes.end())
        throw UnresolvedNameError("unknown shape '" + v + "'");
      atom.density = it->second.density();
    } else {
      throw ValidationError("unknown atom entry '" + k + "'");
    }
  }
  return atom;
}

}  // namespace

PiecewisePoly parse_pwdata(const std::string& text) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : text) {
    if (c == '|') {
      fields.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(current);
  if (fields.size() < 3 || fields.size() % 2 == 0)
    throw ValidationError(
        "piecewise data must alternate breakpoints and coefficient lists");
  std::vector<double> breaks;
  std::vector<Poly> pieces;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i % 2 == 0)
      breaks.push_back(parse_real(fields[i]));
    else
      pieces.emplace_back(parse_reals(fields[i]));
  }
  return PiecewisePoly(std::move(breaks), std::move(pieces));
}

std::string serialize_pwdata(const PiecewisePoly& p) {
  std::string out;
  for (std::size_t k = 0; k < p.piece_count(); ++k) {
    out += format_real(p.breakpoints()[k]);
    out += " | ";
    const auto coeffs = p.piece_global(k).coeffs();
    if (coeffs.empty()) out += "0";
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (i) out += ' ';
      out += format_real(coeffs[i]);
    }
    out += " | ";
  }
  out += format_real(p.breakpoints().back());
  return out;
}

bool Problem::has_param(const std::string& key) const {
  return params.count(key) != 0;
}

std::string Problem::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end())
    throw ValidationError("missing command parameter '" + key + "'");
  return it->second;
}

std::string Problem::param_or(const std::string& key,
                              const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double Problem::param_real(const std::string& key) const {
  return parse_real(param(key));
}

double Problem::param_real_or(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : parse_real(it->second);
}

long Problem::param_int_or(const std::string& key, long fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback
                            : static_cast<long>(parse_real(it->second));
}

std::vector<double> Problem::param_reals(const std::string& key) const {
  return parse_reals(param(key));
}

std::uint64_t Problem::param_seed_or(const std::string& key,
                                     std::uint64_t fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  return std::strtoull(it->second.c_str(), nullptr, 16);
}

const Shape& Problem::shape(const std::string& name) const {
  auto it = shapes.find(name);
  if (it == shapes.end())
    throw UnresolvedNameError("unknown shape '" + name + "'");
  return it->second;
}

const DynamicFn& Problem::dynamic(const std::string& name) const {
  auto it = dynamics.find(name);
  if (it == dynamics.end())
    throw UnresolvedNameError("unknown dynamic function '" + name + "'");
  return it->second;
}

const Distribution& Problem::distribution(const std::string& name) const {
  auto it = distributions.find(name);
  if (it == distributions.end())
    throw UnresolvedNameError("unknown distribution '" + name + "'");
  return it->second;
}

const TestFn& Problem::testfn(const std::string& name) const {
  auto it = testfns.find(name);
  if (it == testfns.end())
    throw UnresolvedNameError("unknown test function '" + name + "'");
  return it->second;
}

ImpulsiveIVP Problem::make_ivp() const {
  ImpulsiveIVP ivp;
  ivp.interval = interval;
  ivp.t0 = param_real("t0");
  const std::vector<double> x0 = param_reals("x0");
  ivp.x0 = Eigen::Map<const Vec>(x0.data(), static_cast<Eigen::Index>(x0.size()));
  ivp.f = f;
  ivp.g = g;
  ivp.impulses = impulses;
  if (ivp.f.empty())
    throw ValidationError("problem declares no field expressions");
  ivp.validate();
  return ivp;
}

std::vector<std::vector<Shape>> Problem::shape_vectors() const {
  std::vector<std::vector<Shape>> out;
  std::string spec = param("shape-vectors");
  std::vector<std::string> groups;
  std::string current;
  for (char c : spec) {
    if (c == '|') {
      groups.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  groups.push_back(current);
  for (const std::string& group : groups) {
    std::vector<Shape> vec;
    std::string name;
    auto flush = [&] {
      const std::string trimmed = trim(name);
      if (!trimmed.empty()) vec.push_back(shape(trimmed));
      name.clear();
    };
    for (char c : group) {
      if (c == ',')
        flush();
      else
        name += c;
    }
    flush();
    if (vec.empty()) throw ValidationError("empty shape vector");
    out.push_back(std::move(vec));
  }
  return out;
}

Problem parse_problem(const std::string& text) {
  const std::vector<Section> sections = tokenize(text);
  Problem problem;

  // Interval first: every other object validates against it.
  bool have_interval = false;
  for (const Section& s : sections) {
    if (s.kind != "interval") continue;
    const std::string* a = s.find("a");
    const std::string* b = s.find("b");
    if (!a || !b) throw ValidationError("interval section needs 'a' and 'b'");
    problem.interval = {parse_real(*a), parse_real(*b)};
    if (!problem.interval.valid())
      throw ValidationError("interval must satisfy a < b");
    have_interval = true;
  }
  if (!have_interval) throw ValidationError("missing [interval] section");

  for (const Section& s : sections) {
    if (s.kind == "shape") {
      const std::string* pieces = s.find("pieces");
      if (!pieces) throw ValidationError("shape section needs 'pieces'");
      problem.shapes.emplace(s.name, Shape(parse_pwdata(*pieces)));
    }
  }

  for (const Section& s : sections) {
    if (s.kind == "dynamic") {
      problem.dynamics.emplace(s.name, build_dynamic(s, problem.interval));
    } else if (s.kind == "testfn") {
      const std::string* support = s.find("support");
      if (!support) throw ValidationError("testfn section needs 'support'");
      const std::vector<double> ends = parse_reals(*support);
      if (ends.size() != 2)
        throw ValidationError("support must be two numbers");
      DynamicFn body = build_dynamic(s, problem.interval);
      problem.testfns.emplace(s.name,
                              TestFn(std::move(body), {ends[0], ends[1]}));
    } else if (s.kind == "distribution") {
      const std::string* regular = s.find("regular");
      const std::string* stieltjes = s.find("stieltjes");
      PiecewisePoly reg = regular
                              ? parse_pwdata(*regular)
                              : PiecewisePoly::from_poly(problem.interval, Poly());
      PiecewisePoly sti = stieltjes
                              ? parse_pwdata(*stieltjes)
                              : PiecewisePoly::from_poly(problem.interval, Poly());
      std::vector<Atom> atoms;
      for (const Line& l : s.lines)
        if (l.key.rfind("atom at ", 0) == 0)
          atoms.push_back(parse_atom(l.key, l.value, problem.shapes));
      problem.distributions.emplace(
          s.name, Distribution(std::move(reg), std::move(sti), std::move(atoms)));
    } else if (s.kind == "fields") {
      std::size_t n = 0;
      for (const Line& l : s.lines) {
        if (l.key.size() >= 2 && l.key[0] == 'f')
          n = std::max(n, static_cast<std::size_t>(
                              std::strtoul(l.key.c_str() + 1, nullptr, 10)));
        if (l.key.size() == 3 && l.key[0] == 'g')
          n = std::max(n, static_cast<std::size_t>(l.key[1] - '0'));
      }
      if (n == 0 || n > 9)
        throw ValidationError("fields must use f1..f9 and g11..g99");
      problem.f.assign(n, parse_field("0"));
      problem.g.assign(n, std::vector<FieldExpr>(n, parse_field("0")));
      for (const Line& l : s.lines) {
        if (l.key[0] == 'f') {
          const std::size_t i = std::strtoul(l.key.c_str() + 1, nullptr, 10);
          if (i < 1 || i > n) throw ValidationError("bad field index " + l.key);
          problem.f[i - 1] = parse_field(l.value);
        } else if (l.key[0] == 'g' && l.key.size() == 3) {
          const std::size_t i = static_cast<std::size_t>(l.key[1] - '0');
          const std::size_t j = static_cast<std::size_t>(l.key[2] - '0');
          if (i < 1 || i > n || j < 1 || j > n)
            throw ValidationError("bad field index " + l.key);
          problem.g[i - 1][j - 1] = parse_field(l.value);
        } else {
          throw ValidationError("unknown fields entry '" + l.key + "'");
        }
      }
    } else if (s.kind == "impulses") {
      for (const Line& l : s.lines) {
        if (l.key != "impulse")
          throw ValidationError("impulses section expects 'impulse = tau names'");
        const std::vector<std::string> tokens = split_ws(l.value);
        if (tokens.size() < 2)
          throw ValidationError("impulse needs a location and shape names");
        ImpulseSpec spec;
        spec.tau = parse_real(tokens[0]);
        for (std::size_t i = 1; i < tokens.size(); ++i)
          spec.shapes.push_back(problem.shape(tokens[i]));
        problem.impulses.push_back(std::move(spec));
      }
    } else if (s.kind == "command") {
      for (const Line& l : s.lines) {
        if (l.key == "name")
          problem.command = l.value;
        else
          problem.params[l.key] = l.value;
      }
    } else if (s.kind != "interval" && s.kind != "shape") {
      throw ValidationError("unknown section kind '" + s.kind + "'");
    }
  }
  return problem;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open problem file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str());
}

}  // namespace dyndist
