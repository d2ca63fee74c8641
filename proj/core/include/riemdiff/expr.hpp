#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace riemdiff {

// Closed-form arithmetic expressions over the variables x1, x2, xi, t, pi.
//
// Grammar (highest precedence first):
//   primary := number | identifier | identifier '(' args ')' | '(' expr ')'
//   power   := primary ['^' unary]          right associative
//   unary   := '-' unary | power
//   term    := unary (('*' | '/') unary)*
//   expr    := term (('+' | '-') term)*
// Functions: sin cos exp sqrt abs (one argument), min max (two arguments).

enum class NodeKind : std::uint8_t { number, variable, negate, binary, call };
enum class BinaryOp : std::uint8_t { add, sub, mul, div, pow };
enum class Function : std::uint8_t { sin, cos, exp, sqrt, abs, min, max };

struct ExprNode {
  NodeKind kind = NodeKind::number;
  BinaryOp op = BinaryOp::add;
  Function fn = Function::sin;
  double value = 0.0;
  std::string name;
  // Child indices into the owning Expr's node array; -1 when unused.
  int lhs = -1;
  int rhs = -1;
  std::size_t offset = 0;
};

// Variable bindings. Lookup is linear; contexts hold a handful of names.
class EvalContext {
 public:
  EvalContext() = default;
  EvalContext(std::initializer_list<std::pair<std::string, double>> bindings);

  EvalContext& set(std::string_view name, double value);
  const double* find(std::string_view name) const noexcept;

 private:
  std::vector<std::pair<std::string, double>> bindings_;
};

class Expr {
 public:
  Expr() = default;

  static Expr parse(std::string_view source);
  static Expr constant(double value);

  // Throws EvalError for unbound variables, division by zero and domain errors.
  double eval(const EvalContext& ctx) const;

  // Fully parenthesized source that reparses to a structurally identical tree.
  std::string to_string() const;

  bool structurally_equal(const Expr& other) const;
  bool references(std::string_view variable) const;
  bool empty() const noexcept { return nodes_.empty(); }

  const std::vector<ExprNode>& nodes() const noexcept { return nodes_; }
  int root() const noexcept { return root_; }
  const std::string& source() const noexcept { return source_; }

 private:
  friend class ExprParser;
  double eval_node(int index, const EvalContext& ctx) const;
  void print_node(int index, std::string& out) const;
  bool equal_node(int a, const Expr& other, int b) const;

  std::vector<ExprNode> nodes_;
  int root_ = -1;
  std::string source_;
};

std::string_view function_name(Function fn) noexcept;

}  // namespace riemdiff
