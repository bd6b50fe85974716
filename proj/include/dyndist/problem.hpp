#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dyndist/distribution.hpp"
#include "dyndist/impulsive.hpp"

namespace dyndist {

/// Parsed problem file: named objects plus one declared command with its
/// parameters. The on-disk format is line-oriented key/value grouped into
/// sections; see the project README for the full reference.
struct Problem {
  Interval interval;
  std::map<std::string, Shape> shapes;
  std::map<std::string, DynamicFn> dynamics;
  std::map<std::string, Distribution> distributions;
  std::map<std::string, TestFn> testfns;

  std::vector<FieldExpr> f;
  std::vector<std::vector<FieldExpr>> g;
  std::vector<ImpulseSpec> impulses;

  std::string command;
  std::map<std::string, std::string> params;

  bool has_param(const std::string& key) const;
  std::string param(const std::string& key) const;
  std::string param_or(const std::string& key, const std::string& fallback) const;
  double param_real(const std::string& key) const;
  double param_real_or(const std::string& key, double fallback) const;
  long param_int_or(const std::string& key, long fallback) const;
  std::vector<double> param_reals(const std::string& key) const;
  std::uint64_t param_seed_or(const std::string& key,
                              std::uint64_t fallback) const;

  const Shape& shape(const std::string& name) const;
  const DynamicFn& dynamic(const std::string& name) const;
  const Distribution& distribution(const std::string& name) const;
  const TestFn& testfn(const std::string& name) const;

  /// Cauchy problem assembled from the fields, impulses and the command's
  /// t0/x0 parameters.
  ImpulsiveIVP make_ivp() const;

  /// Shape vectors named by the command's shape-vectors parameter
  /// ("a,b | c,d" selects shapes a,b for the first sweep entry and so on).
  std::vector<std::vector<Shape>> shape_vectors() const;
};

Problem parse_problem(const std::string& text);
Problem load_problem(const std::string& path);

/// Piecewise data in the problem-file syntax: breakpoints and global-basis
/// coefficient lists alternating, separated by '|'.
PiecewisePoly parse_pwdata(const std::string& text);
std::string serialize_pwdata(const PiecewisePoly& p);

}  // namespace dyndist
