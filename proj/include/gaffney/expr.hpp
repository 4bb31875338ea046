#pragma once

#include <array>
#include <memory>
#include <string>

namespace gaffney {

/// Parsed arithmetic expression in the variables x1, x2 with +, -, *, /,
/// unary minus, parentheses and the functions cos, sin, exp. Immutable;
/// supports symbolic first derivatives.
class Expr {
 public:
  Expr() = default;
  static Expr parse(const std::string& text);
  double eval(double x1, double x2) const;
  /// Derivative with respect to x1 (var = 1) or x2 (var = 2).
  Expr derivative(int var) const;
  std::string str() const;
  bool valid() const { return root_ != nullptr; }

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

/// Splits "f1,f2" on the top-level comma and parses both components.
std::array<Expr, 2> parse_vector_expr(const std::string& text);

}  // namespace gaffney
