#include "riemdiff/expr.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "riemdiff/error.hpp"

namespace riemdiff {

namespace {

struct FunctionInfo {
  std::string_view name;
  Function fn;
  int arity;
};

constexpr std::array<FunctionInfo, 7> kFunctions{{
    {"sin", Function::sin, 1},
    {"cos", Function::cos, 1},
    {"exp", Function::exp, 1},
    {"sqrt", Function::sqrt, 1},
    {"abs", Function::abs, 1},
    {"min", Function::min, 2},
    {"max", Function::max, 2},
}};

const FunctionInfo* lookup_function(std::string_view name) {
  for (const auto& info : kFunctions) {
    if (info.name == name) return &info;
  }
  return nullptr;
}

char op_char(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::sub: return '-';
    case BinaryOp::mul: return '*';
    case BinaryOp::div: return '/';
    case BinaryOp::pow: return '^';
  }
  return '?';
}

}  // namespace

std::string_view function_name(Function fn) noexcept {
  for (const auto& info : kFunctions) {
    if (info.fn == fn) return info.name;
  }
  return "?";
}

EvalContext::EvalContext(std::initializer_list<std::pair<std::string, double>> bindings)
    : bindings_(bindings) {}

EvalContext& EvalContext::set(std::string_view name, double value) {
  for (auto& [key, val] : bindings_) {
    if (key == name) {
      val = value;
      return *this;
    }
  }
  bindings_.emplace_back(std::string(name), value);
  return *this;
}

const double* EvalContext::find(std::string_view name) const noexcept {
  for (const auto& [key, val] : bindings_) {
    if (key == name) return &val;
  }
  return nullptr;
}

// Recursive-descent parser producing a flat node array.
class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  Expr run() {
    Expr out;
    out.source_ = std::string(src_);
    expr_ = &out;
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression, expected a value", pos_);
    out.root_ = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) {
      throw ParseError(std::string("unexpected '") + src_[pos_] + "', expected operator or end of input",
                       pos_);
    }
    return out;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      std::string found = pos_ < src_.size() ? std::string("'") + src_[pos_] + "'" : "end of input";
      throw ParseError(std::string("expected '") + c + "' but found " + found, pos_);
    }
  }

  int add(ExprNode node) {
    expr_->nodes_.push_back(std::move(node));
    return static_cast<int>(expr_->nodes_.size()) - 1;
  }

  int binary(BinaryOp op, int lhs, int rhs, std::size_t offset) {
    ExprNode n;
    n.kind = NodeKind::binary;
    n.op = op;
    n.lhs = lhs;
    n.rhs = rhs;
    n.offset = offset;
    return add(std::move(n));
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('+')) {
        lhs = binary(BinaryOp::add, lhs, parse_term(), at);
      } else if (accept('-')) {
        lhs = binary(BinaryOp::sub, lhs, parse_term(), at);
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('*')) {
        lhs = binary(BinaryOp::mul, lhs, parse_unary(), at);
      } else if (accept('/')) {
        lhs = binary(BinaryOp::div, lhs, parse_unary(), at);
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    skip_ws();
    std::size_t at = pos_;
    if (accept('-')) {
      ExprNode n;
      n.kind = NodeKind::negate;
      n.lhs = parse_unary();
      n.offset = at;
      return add(std::move(n));
    }
    return parse_power();
  }

  int parse_power() {
    int base = parse_primary();
    skip_ws();
    std::size_t at = pos_;
    if (accept('^')) return binary(BinaryOp::pow, base, parse_unary(), at);
    return base;
  }

  int parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input, expected a value", pos_);
    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(src_.substr(start, pos_ - start));
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == '(') {
        const FunctionInfo* info = lookup_function(name);
        if (info == nullptr) throw ParseError("unknown function '" + name + "'", start);
        ++pos_;
        ExprNode n;
        n.kind = NodeKind::call;
        n.fn = info->fn;
        n.offset = start;
        n.lhs = parse_expr();
        if (info->arity == 2) {
          expect(',');
          n.rhs = parse_expr();
        }
        expect(')');
        return add(std::move(n));
      }
      ExprNode n;
      n.kind = NodeKind::variable;
      n.name = std::move(name);
      n.offset = start;
      return add(std::move(n));
    }
    throw ParseError(std::string("unexpected '") + c + "', expected number, variable, function or '('",
                     start);
  }

  int parse_number() {
    const std::size_t start = pos_;
    auto is_digit = [&](std::size_t i) {
      return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
    };
    while (is_digit(pos_)) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (is_digit(pos_)) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (!is_digit(pos_)) {
        pos_ = save;
      } else {
        while (is_digit(pos_)) ++pos_;
      }
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ParseError("malformed number '" + std::string(text) + "'", start);
    }
    ExprNode n;
    n.kind = NodeKind::number;
    n.value = value;
    n.offset = start;
    return add(std::move(n));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Expr* expr_ = nullptr;
};

Expr Expr::parse(std::string_view source) { return ExprParser(source).run(); }

Expr Expr::constant(double value) {
  Expr e;
  ExprNode n;
  n.value = value;
  e.nodes_.push_back(n);
  e.root_ = 0;
  e.source_ = e.to_string();
  return e;
}

double Expr::eval(const EvalContext& ctx) const {
  if (root_ < 0) throw EvalError("evaluating an empty expression", 0);
  return eval_node(root_, ctx);
}

double Expr::eval_node(int index, const EvalContext& ctx) const {
  const ExprNode& n = nodes_[static_cast<std::size_t>(index)];
  switch (n.kind) {
    case NodeKind::number:
      return n.value;
    case NodeKind::variable: {
      if (const double* v = ctx.find(n.name)) return *v;
      if (n.name == "pi") return std::numbers::pi;
      throw EvalError("unbound variable '" + n.name + "'", n.offset);
    }
    case NodeKind::negate:
      return -eval_node(n.lhs, ctx);
    case NodeKind::binary: {
      const double a = eval_node(n.lhs, ctx);
      const double b = eval_node(n.rhs, ctx);
      auto defined = [&](double r) {
        if (std::isnan(r) && !std::isnan(a) && !std::isnan(b)) {
          throw EvalError("undefined result (inf - inf, 0 * inf or inf / inf)", n.offset);
        }
        return r;
      };
      switch (n.op) {
        case BinaryOp::add: return defined(a + b);
        case BinaryOp::sub: return defined(a - b);
        case BinaryOp::mul: return defined(a * b);
        case BinaryOp::div:
          if (b == 0.0) throw EvalError("division by zero", n.offset);
          return defined(a / b);
        case BinaryOp::pow: {
          const double r = std::pow(a, b);
          if (std::isnan(r) && !std::isnan(a) && !std::isnan(b)) {
            throw EvalError("power of negative base with non-integer exponent", n.offset);
          }
          if (a == 0.0 && b < 0.0) throw EvalError("division by zero in power", n.offset);
          return r;
        }
      }
      break;
    }
    case NodeKind::call: {
      const double a = eval_node(n.lhs, ctx);
      switch (n.fn) {
        case Function::sin:
        case Function::cos:
          if (std::isinf(a)) throw EvalError("trigonometric function of an infinite value", n.offset);
          return n.fn == Function::sin ? std::sin(a) : std::cos(a);
        case Function::exp: return std::exp(a);
        case Function::abs: return std::abs(a);
        case Function::sqrt:
          if (a < 0.0) throw EvalError("sqrt of negative value", n.offset);
          return std::sqrt(a);
        case Function::min: return std::min(a, eval_node(n.rhs, ctx));
        case Function::max: return std::max(a, eval_node(n.rhs, ctx));
      }
      break;
    }
  }
  throw EvalError("corrupt expression node", n.offset);
}

std::string Expr::to_string() const {
  std::string out;
  if (root_ >= 0) print_node(root_, out);
  return out;
}

void Expr::print_node(int index, std::string& out) const {
  const ExprNode& n = nodes_[static_cast<std::size_t>(index)];
  switch (n.kind) {
    case NodeKind::number: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case NodeKind::variable:
      out += n.name;
      return;
    case NodeKind::negate:
      out += "(-";
      print_node(n.lhs, out);
      out += ')';
      return;
    case NodeKind::binary:
      out += '(';
      print_node(n.lhs, out);
      out += ' ';
      out += op_char(n.op);
      out += ' ';
      print_node(n.rhs, out);
      out += ')';
      return;
    case NodeKind::call:
      out += function_name(n.fn);
      out += '(';
      print_node(n.lhs, out);
      if (n.rhs >= 0) {
        out += ", ";
        print_node(n.rhs, out);
      }
      out += ')';
      return;
  }
}

bool Expr::structurally_equal(const Expr& other) const {
  if (root_ < 0 || other.root_ < 0) return root_ < 0 && other.root_ < 0;
  return equal_node(root_, other, other.root_);
}

bool Expr::equal_node(int a, const Expr& other, int b) const {
  if ((a < 0) != (b < 0)) return false;
  if (a < 0) return true;
  const ExprNode& x = nodes_[static_cast<std::size_t>(a)];
  const ExprNode& y = other.nodes_[static_cast<std::size_t>(b)];
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case NodeKind::number:
      return std::bit_cast<std::uint64_t>(x.value) == std::bit_cast<std::uint64_t>(y.value);
    case NodeKind::variable:
      return x.name == y.name;
    case NodeKind::negate:
      return equal_node(x.lhs, other, y.lhs);
    case NodeKind::binary:
      return x.op == y.op && equal_node(x.lhs, other, y.lhs) && equal_node(x.rhs, other, y.rhs);
    case NodeKind::call:
      return x.fn == y.fn && equal_node(x.lhs, other, y.lhs) && equal_node(x.rhs, other, y.rhs);
  }
  return false;
}

bool Expr::references(std::string_view variable) const {
  for (const auto& n : nodes_) {
    if (n.kind == NodeKind::variable && n.name == variable) return true;
  }
  return false;
}

}  // namespace riemdiff
