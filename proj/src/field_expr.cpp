#include "dyndist/field_expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "dyndist/errors.hpp"

namespace dyndist {

namespace {

double integer_power(double base, int exponent) {
  if (exponent < 0) return 1.0 / integer_power(base, -exponent);
  double result = 1.0;
  double factor = base;
  int e = exponent;
  while (e > 0) {
    if (e & 1) result *= factor;
    factor *= factor;
    e >>= 1;
  }
  return result;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  FieldExpr run() {
    FieldExpr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  FieldExpr parse_expr() {
    FieldExpr left = parse_term();
    for (;;) {
      if (accept('+')) {
        FieldExpr node;
        node.kind = FieldExpr::Kind::add;
        node.args = {std::move(left), parse_term()};
        left = std::move(node);
      } else if (accept('-')) {
        FieldExpr node;
        node.kind = FieldExpr::Kind::sub;
        node.args = {std::move(left), parse_term()};
        left = std::move(node);
      } else {
        return left;
      }
    }
  }

  FieldExpr parse_term() {
    FieldExpr left = parse_factor();
    for (;;) {
      if (accept('*')) {
        FieldExpr node;
        node.kind = FieldExpr::Kind::mul;
        node.args = {std::move(left), parse_factor()};
        left = std::move(node);
      } else if (accept('/')) {
        FieldExpr node;
        node.kind = FieldExpr::Kind::div;
        node.args = {std::move(left), parse_factor()};
        left = std::move(node);
      } else {
        return left;
      }
    }
  }

  FieldExpr parse_factor() {
    FieldExpr base = parse_base();
    if (accept('^')) {
      FieldExpr node;
      node.kind = FieldExpr::Kind::pow;
      node.exponent = parse_integer();
      node.args = {std::move(base)};
      return node;
    }
    return base;
  }

  int parse_integer() {
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    if (pos_ >= text_.size() ||
        !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw ParseError("exponent must be an integer", start);
    long value = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1000) throw ParseError("exponent too large", start);
      ++pos_;
    }
    // Reject forms like 1.5 or 1e2 after '^'.
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' ||
                                text_[pos_] == 'E'))
      throw ParseError("exponent must be an integer", start);
    return negative ? -static_cast<int>(value) : static_cast<int>(value);
  }

  FieldExpr parse_base() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];

    if (c == '(') {
      ++pos_;
      FieldExpr inner = parse_expr();
      expect(')');
      return inner;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();

    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      std::string name;
      while (pos_ < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_])))
        name += text_[pos_++];

      if (name == "t") {
        FieldExpr node;
        node.kind = FieldExpr::Kind::time;
        return node;
      }
      if (name == "x") {
        if (pos_ >= text_.size() ||
            !std::isdigit(static_cast<unsigned char>(text_[pos_])))
          throw ParseError("variable needs an index, e.g. x1", start);
        long idx = 0;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          idx = idx * 10 + (text_[pos_] - '0');
          if (idx > 1000) throw ParseError("variable index too large", start);
          ++pos_;
        }
        if (idx < 1) throw ParseError("variable indices start at 1", start);
        FieldExpr node;
        node.kind = FieldExpr::Kind::var;
        node.var_index = static_cast<int>(idx);
        return node;
      }

      FieldExpr::Func func;
      if (name == "sin")
        func = FieldExpr::Func::sin;
      else if (name == "cos")
        func = FieldExpr::Func::cos;
      else if (name == "exp")
        func = FieldExpr::Func::exp;
      else if (name == "tanh")
        func = FieldExpr::Func::tanh;
      else
        throw ParseError("unknown identifier '" + name + "'", start);
      expect('(');
      FieldExpr node;
      node.kind = FieldExpr::Kind::call;
      node.func = func;
      node.args = {parse_expr()};
      expect(')');
      return node;
    }

    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  FieldExpr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
        ++pos_;
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // 'e' was not an exponent
      }
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '.'))
      throw ParseError("malformed number", start);
    FieldExpr node;
    node.kind = FieldExpr::Kind::number;
    node.number = std::strtod(text_.c_str() + start, nullptr);
    return node;
  }
};

int precedence(FieldExpr::Kind kind) {
  switch (kind) {
    case FieldExpr::Kind::add:
    case FieldExpr::Kind::sub:
      return 1;
    case FieldExpr::Kind::mul:
    case FieldExpr::Kind::div:
      return 2;
    case FieldExpr::Kind::pow:
      return 3;
    default:
      return 4;
  }
}

void unparse_into(const FieldExpr& e, std::string& out, int parent_prec) {
  const int prec = precedence(e.kind);
  const bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e.kind) {
    case FieldExpr::Kind::number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e.number);
      out += buf;
      break;
    }
    case FieldExpr::Kind::time:
      out += 't';
      break;
    case FieldExpr::Kind::var:
      out += 'x';
      out += std::to_string(e.var_index);
      break;
    case FieldExpr::Kind::add:
      unparse_into(e.args[0], out, prec);
      out += " + ";
      unparse_into(e.args[1], out, prec + 1);
      break;
    case FieldExpr::Kind::sub:
      unparse_into(e.args[0], out, prec);
      out += " - ";
      unparse_into(e.args[1], out, prec + 1);
      break;
    case FieldExpr::Kind::mul:
      unparse_into(e.args[0], out, prec);
      out += "*";
      unparse_into(e.args[1], out, prec + 1);
      break;
    case FieldExpr::Kind::div:
      unparse_into(e.args[0], out, prec);
      out += "/";
      unparse_into(e.args[1], out, prec + 1);
      break;
    case FieldExpr::Kind::pow:
      unparse_into(e.args[0], out, prec + 1);
      out += '^';
      out += std::to_string(e.exponent);
      break;
    case FieldExpr::Kind::call:
      switch (e.func) {
        case FieldExpr::Func::sin: out += "sin"; break;
        case FieldExpr::Func::cos: out += "cos"; break;
        case FieldExpr::Func::exp: out += "exp"; break;
        case FieldExpr::Func::tanh: out += "tanh"; break;
      }
      out += '(';
      unparse_into(e.args[0], out, 0);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

double FieldExpr::eval(double t, const Eigen::VectorXd& x) const {
  switch (kind) {
    case Kind::number:
      return number;
    case Kind::time:
      return t;
    case Kind::var:
      if (var_index > x.size())
        throw DomainError("variable index exceeds the state dimension");
      return x[var_index - 1];
    case Kind::add:
      return args[0].eval(t, x) + args[1].eval(t, x);
    case Kind::sub:
      return args[0].eval(t, x) - args[1].eval(t, x);
    case Kind::mul:
      return args[0].eval(t, x) * args[1].eval(t, x);
    case Kind::div:
      return args[0].eval(t, x) / args[1].eval(t, x);
    case Kind::pow:
      return integer_power(args[0].eval(t, x), exponent);
    case Kind::call: {
      const double v = args[0].eval(t, x);
      switch (func) {
        case Func::sin: return std::sin(v);
        case Func::cos: return std::cos(v);
        case Func::exp: return std::exp(v);
        case Func::tanh: return std::tanh(v);
      }
    }
  }
  return 0.0;
}

int FieldExpr::max_var_index() const {
  int m = kind == Kind::var ? var_index : 0;
  for (const FieldExpr& a : args) m = std::max(m, a.max_var_index());
  return m;
}

bool FieldExpr::operator==(const FieldExpr& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::number:
      if (number != other.number) return false;
      break;
    case Kind::var:
      if (var_index != other.var_index) return false;
      break;
    case Kind::pow:
      if (exponent != other.exponent) return false;
      break;
    case Kind::call:
      if (func != other.func) return false;
      break;
    default:
      break;
  }
  if (args.size() != other.args.size()) return false;
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!(args[i] == other.args[i])) return false;
  return true;
}

FieldExpr parse_field(const std::string& text) { return Parser(text).run(); }

std::string unparse(const FieldExpr& expr) {
  std::string out;
  unparse_into(expr, out, 0);
  return out;
}

}  // namespace dyndist
