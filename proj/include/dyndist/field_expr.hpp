#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace dyndist {

/// Arithmetic expression over t, x1..xn, the four elementary functions and
/// integer powers. Value-semantic tree.
///
/// Grammar (whitespace insignificant, numbers decimal with optional
/// exponent):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' integer)?
///   base   := number | 't' | 'x' digits | func '(' expr ')' | '(' expr ')'
///   func   := sin | cos | exp | tanh
class FieldExpr {
 public:
  enum class Kind { number, time, var, add, sub, mul, div, pow, call };
  enum class Func { sin, cos, exp, tanh };

  Kind kind = Kind::number;
  double number = 0.0;
  int var_index = 0;   // 1-based, Kind::var
  int exponent = 0;    // Kind::pow
  Func func = Func::sin;
  std::vector<FieldExpr> args;

  double eval(double t, const Eigen::VectorXd& x) const;
  /// Largest x-index appearing anywhere in the tree (0 when none).
  int max_var_index() const;

  bool operator==(const FieldExpr& other) const;
};

/// Parses the grammar above. Throws ParseError with a byte position on
/// malformed input; variable indices must be >= 1.
FieldExpr parse_field(const std::string& text);

/// Canonical text form; reparsing yields an equal tree.
std::string unparse(const FieldExpr& expr);

}  // namespace dyndist
