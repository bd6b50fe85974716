// Batch front end: reads a problem file, dispatches to the calculus or the
// impulsive solver, prints an aligned table and optionally writes CSV.

#include <CLI11.hpp>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "dyndist/battery.hpp"
#include "dyndist/distribution.hpp"
#include "dyndist/errors.hpp"
#include "dyndist/impulsive.hpp"
#include "dyndist/parallel.hpp"
#include "dyndist/problem.hpp"
#include "dyndist/table.hpp"

namespace {

using namespace dyndist;

std::string shape_cell(const PiecewisePoly& density) {
  const double mass = integrate(density);
  if (std::abs(mass) > 1e-300)
    return serialize_pwdata(scale_pw(density, 1.0 / mass));
  return serialize_pwdata(density);
}

std::vector<double> profile_locations(const DynamicFn& f) {
  std::vector<double> out;
  for (const auto& [tau, prof] : f.profiles()) {
    (void)prof;
    out.push_back(tau);
  }
  return out;
}

ResultTable cmd_pair(const Problem& problem) {
  const Distribution& dist = problem.distribution(problem.param("dist"));
  const TestFn& phi = problem.testfn(problem.param("testfn"));
  ResultTable table({"dist", "testfn", "value"});
  table.add_row({problem.param("dist"), problem.param("testfn"),
                 pair(dist, phi)});
  return table;
}

ResultTable cmd_product(const Problem& problem) {
  const Distribution& dist = problem.distribution(problem.param("dist"));
  const DynamicFn& g = problem.dynamic(problem.param("g"));
  const Distribution product = multiply(dist, g);
  ResultTable table({"tau", "right_weight", "left_weight", "mass", "shape"});
  for (const Atom& atom : product.atoms())
    table.add_row({atom.location, atom.right_weight, atom.left_weight,
                   atom.mass(), shape_cell(atom.density)});
  return table;
}

ResultTable cmd_derivative(const Problem& problem) {
  const DynamicFn& f = problem.dynamic(problem.param("f"));
  const Distribution d = derivative(f);
  ResultTable table({"tau", "weight", "shape"});
  for (const Atom& atom : d.atoms())
    table.add_row({atom.location, atom.mass(), shape_cell(atom.density)});
  return table;
}

ResultTable cmd_leibniz(const Problem& problem, std::uint64_t seed) {
  const DynamicFn& f = problem.dynamic(problem.param("f"));
  const DynamicFn& g = problem.dynamic(problem.param("g"));
  std::set<double> locations;
  for (double tau : profile_locations(f)) locations.insert(tau);
  for (double tau : profile_locations(g)) locations.insert(tau);
  const int count = static_cast<int>(problem.param_int_or("battery-size", 32));
  const std::vector<TestFn> battery = make_battery(
      problem.interval,
      std::vector<double>(locations.begin(), locations.end()), seed, count);
  ResultTable table({"f", "g", "battery_size", "residual"});
  table.add_row({problem.param("f"), problem.param("g"),
                 static_cast<double>(count),
                 leibniz_residual(f, g, battery)});
  return table;
}

void add_state_row(ResultTable& table, const std::string& event, double t,
                   const Vec& x) {
  std::vector<ResultTable::Cell> row{event, t};
  for (Eigen::Index i = 0; i < x.size(); ++i) row.emplace_back(x[i]);
  table.add_row(std::move(row));
}

std::vector<std::string> state_headers(int n) {
  std::vector<std::string> headers{"event", "t"};
  for (int i = 1; i <= n; ++i) headers.push_back("x" + std::to_string(i));
  return headers;
}

ResultTable cmd_solve(const Problem& problem, long steps_override) {
  ImpulsiveIVP ivp = problem.make_ivp();
  const long steps = steps_override > 0 ? steps_override
                                        : problem.param_int_or("steps", 10000);
  const long jump_steps = problem.param_int_or("jump-steps", steps);
  const Trajectory traj = solve(ivp, steps, jump_steps);
  ResultTable table(state_headers(ivp.dim()));
  add_state_row(table, "initial", ivp.t0, ivp.x0);
  for (const JumpRecord& jump : traj.jumps) {
    add_state_row(table, "pre_jump", jump.tau, jump.x_minus);
    add_state_row(table, "post_jump", jump.tau, jump.x_plus);
  }
  add_state_row(table, "final", ivp.interval.hi, traj.endpoint());
  return table;
}

ResultTable cmd_regularize(const Problem& problem, long steps_override) {
  ImpulsiveIVP ivp = problem.make_ivp();
  const long steps = steps_override > 0 ? steps_override
                                        : problem.param_int_or("steps", 10000);
  const long jump_steps = problem.param_int_or("jump-steps", steps);
  const long per_window = problem.param_int_or("reg-steps-per-window", 1024);
  std::vector<double> m_list{16, 32, 64, 128, 256};
  if (problem.has_param("m-list")) m_list = problem.param_reals("m-list");

  const Vec reference = solve(ivp, steps, jump_steps).endpoint();
  std::vector<std::string> headers{"m"};
  for (int i = 1; i <= ivp.dim(); ++i) headers.push_back("x" + std::to_string(i));
  headers.push_back("error");
  ResultTable table(headers);

  std::vector<Vec> endpoints(m_list.size());
  parallel_for(m_list.size(), [&](std::size_t i) {
    const int m = static_cast<int>(m_list[i]);
    const long reg_steps = static_cast<long>(
        std::ceil(static_cast<double>(per_window) * m *
                  (ivp.interval.hi - ivp.t0)));
    endpoints[i] = regularized_solve(ivp, m, reg_steps).x.back();
  });
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    std::vector<ResultTable::Cell> row{m_list[i]};
    for (Eigen::Index k = 0; k < endpoints[i].size(); ++k)
      row.emplace_back(endpoints[i][k]);
    row.emplace_back((endpoints[i] - reference).cwiseAbs().maxCoeff());
    table.add_row(std::move(row));
  }
  return table;
}

ResultTable cmd_frobenius(const Problem& problem) {
  ImpulsiveIVP ivp = problem.make_ivp();
  const int n = ivp.dim();
  Vec lower(n + 1), upper(n + 1);
  if (problem.has_param("box")) {
    const std::vector<double> box = problem.param_reals("box");
    if (static_cast<int>(box.size()) != 2 * (n + 1))
      throw ValidationError("box needs lo/hi per (t, x1..xn) axis");
    for (int d = 0; d <= n; ++d) {
      lower[d] = box[2 * d];
      upper[d] = box[2 * d + 1];
    }
  } else {
    lower.setZero();
    upper.setOnes();
  }
  const double residual = frobenius_residual_box(ivp.g, lower, upper);
  ResultTable table({"residual", "verdict"});
  table.add_row({residual, residual <= 1e-6 ? std::string("satisfied")
                                            : std::string("NOT satisfied")});
  return table;
}

ResultTable cmd_sweep_shapes(const Problem& problem, long steps_override) {
  ImpulsiveIVP ivp = problem.make_ivp();
  const long steps = steps_override > 0 ? steps_override
                                        : problem.param_int_or("steps", 10000);
  const std::vector<std::vector<Shape>> vectors = problem.shape_vectors();
  const ShapeSweep sweep = shape_sensitivity(ivp, vectors, steps);

  std::vector<std::string> headers{"shapes"};
  for (int i = 1; i <= ivp.dim(); ++i) headers.push_back("x" + std::to_string(i));
  headers.push_back("max_deviation");
  ResultTable table(headers);
  const std::vector<std::string> labels = [&] {
    std::vector<std::string> out;
    std::string spec = problem.param("shape-vectors");
    std::string current;
    for (char c : spec) {
      if (c == '|') {
        out.push_back(current);
        current.clear();
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        current += c;
      }
    }
    out.push_back(current);
    return out;
  }();
  for (std::size_t i = 0; i < sweep.endpoints.size(); ++i) {
    std::vector<ResultTable::Cell> row{labels[i]};
    for (Eigen::Index k = 0; k < sweep.endpoints[i].size(); ++k)
      row.emplace_back(sweep.endpoints[i][k]);
    row.emplace_back(std::string(""));
    table.add_row(std::move(row));
  }
  std::vector<ResultTable::Cell> summary{std::string("deviation")};
  for (int k = 0; k < ivp.dim(); ++k) summary.emplace_back(std::string(""));
  summary.emplace_back(sweep.max_deviation);
  table.add_row(std::move(summary));
  return table;
}

int run(const std::string& name, const std::string& problem_path,
        const std::string& out_path, long steps_override,
        const std::string& seed_override) {
  Problem problem = load_problem(problem_path);
  if (problem.command != name)
    throw ValidationError("problem declares command '" + problem.command +
                          "' but '" + name + "' was requested");
  std::uint64_t seed = problem.param_seed_or("seed", kBatterySeed);
  if (!seed_override.empty())
    seed = std::strtoull(seed_override.c_str(), nullptr, 16);

  ResultTable table = [&] {
    if (name == "pair") return cmd_pair(problem);
    if (name == "product") return cmd_product(problem);
    if (name == "derivative") return cmd_derivative(problem);
    if (name == "leibniz") return cmd_leibniz(problem, seed);
    if (name == "solve") return cmd_solve(problem, steps_override);
    if (name == "regularize") return cmd_regularize(problem, steps_override);
    if (name == "frobenius") return cmd_frobenius(problem);
    if (name == "sweep-shapes") return cmd_sweep_shapes(problem, steps_override);
    throw ValidationError("unknown command '" + name + "'");
  }();

  std::cout << table.to_text();
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + out_path);
    out << table.to_csv();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piecewise-exact calculus for distributions with shaped "
               "impulses, plus an impulsive-ODE solver"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string out_path;
  long steps_override = -1;
  std::string seed_override;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"pair", "evaluate a distribution on a test function"},
      {"product", "multiply a distribution by a dynamic function"},
      {"derivative", "distributional derivative of a dynamic function"},
      {"leibniz", "product-rule residual over a battery"},
      {"solve", "integrate an impulsive Cauchy problem"},
      {"regularize", "delta-sequence convergence table"},
      {"frobenius", "column commutativity residual of g"},
      {"sweep-shapes", "jump endpoints across shape choices"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--problem", problem_path, "problem file")->required();
    sub->add_option("--out", out_path, "CSV output path");
    sub->add_option("--steps", steps_override, "step-count override");
    sub->add_option("--seed", seed_override, "battery seed override (hex)");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return run(name, problem_path, out_path, steps_override, seed_override);
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 3;
  } catch (const UnresolvedNameError& e) {
    std::cerr << "unresolved reference: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
