#include "gaffney/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace gaffney {

struct Expr::Node {
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Cos, Sin, Exp };
  Op op;
  double constant = 0.0;
  int var = 0;  // 1 or 2
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_const(double c) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Const;
  n->constant = c;
  return n;
}

NodePtr make_var(int var) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Var;
  n->var = var;
  return n;
}

NodePtr make_unary(Node::Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(Node::Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool is_const(const NodePtr& n, double c) {
  return n->op == Node::Op::Const && n->constant == c;
}

// light simplification so symbolic derivatives stay readable and cheap
NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return make_binary(Node::Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return a;
  return make_binary(Node::Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return make_binary(Node::Op::Mul, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
  if (is_const(a, 0.0)) return a;
  return make_unary(Node::Op::Neg, std::move(a));
}

double eval_node(const Node& n, double x1, double x2) {
  switch (n.op) {
    case Node::Op::Const: return n.constant;
    case Node::Op::Var: return n.var == 1 ? x1 : x2;
    case Node::Op::Add: return eval_node(*n.a, x1, x2) + eval_node(*n.b, x1, x2);
    case Node::Op::Sub: return eval_node(*n.a, x1, x2) - eval_node(*n.b, x1, x2);
    case Node::Op::Mul: return eval_node(*n.a, x1, x2) * eval_node(*n.b, x1, x2);
    case Node::Op::Div: return eval_node(*n.a, x1, x2) / eval_node(*n.b, x1, x2);
    case Node::Op::Neg: return -eval_node(*n.a, x1, x2);
    case Node::Op::Cos: return std::cos(eval_node(*n.a, x1, x2));
    case Node::Op::Sin: return std::sin(eval_node(*n.a, x1, x2));
    case Node::Op::Exp: return std::exp(eval_node(*n.a, x1, x2));
  }
  return 0.0;
}

NodePtr diff_node(const NodePtr& n, int var) {
  switch (n->op) {
    case Node::Op::Const: return make_const(0.0);
    case Node::Op::Var: return make_const(n->var == var ? 1.0 : 0.0);
    case Node::Op::Add: return add(diff_node(n->a, var), diff_node(n->b, var));
    case Node::Op::Sub: return sub(diff_node(n->a, var), diff_node(n->b, var));
    case Node::Op::Mul:
      return add(mul(diff_node(n->a, var), n->b), mul(n->a, diff_node(n->b, var)));
    case Node::Op::Div:
      return make_binary(
          Node::Op::Div,
          sub(mul(diff_node(n->a, var), n->b), mul(n->a, diff_node(n->b, var))),
          mul(n->b, n->b));
    case Node::Op::Neg: return neg(diff_node(n->a, var));
    case Node::Op::Cos:
      return neg(mul(make_unary(Node::Op::Sin, n->a), diff_node(n->a, var)));
    case Node::Op::Sin:
      return mul(make_unary(Node::Op::Cos, n->a), diff_node(n->a, var));
    case Node::Op::Exp:
      return mul(make_unary(Node::Op::Exp, n->a), diff_node(n->a, var));
  }
  return make_const(0.0);
}

std::string str_node(const Node& n) {
  switch (n.op) {
    case Node::Op::Const: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%g", n.constant);
      return buf;
    }
    case Node::Op::Var: return n.var == 1 ? "x1" : "x2";
    case Node::Op::Add: return "(" + str_node(*n.a) + "+" + str_node(*n.b) + ")";
    case Node::Op::Sub: return "(" + str_node(*n.a) + "-" + str_node(*n.b) + ")";
    case Node::Op::Mul: return "(" + str_node(*n.a) + "*" + str_node(*n.b) + ")";
    case Node::Op::Div: return "(" + str_node(*n.a) + "/" + str_node(*n.b) + ")";
    case Node::Op::Neg: return "(-" + str_node(*n.a) + ")";
    case Node::Op::Cos: return "cos(" + str_node(*n.a) + ")";
    case Node::Op::Sin: return "sin(" + str_node(*n.a) + ")";
    case Node::Op::Exp: return "exp(" + str_node(*n.a) + ")";
  }
  return "";
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    NodePtr e = expression();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  NodePtr expression() {
    NodePtr e = term();
    while (true) {
      skip_ws();
      if (match('+')) e = make_binary(Node::Op::Add, e, term());
      else if (match('-')) e = make_binary(Node::Op::Sub, e, term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = factor();
    while (true) {
      skip_ws();
      if (match('*')) e = make_binary(Node::Op::Mul, e, factor());
      else if (match('/')) e = make_binary(Node::Op::Div, e, factor());
      else return e;
    }
  }

  NodePtr factor() {
    skip_ws();
    if (match('-')) return make_unary(Node::Op::Neg, factor());
    if (match('+')) return factor();
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      skip_ws();
      if (!match(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double v = std::strtod(text_.c_str() + pos_, &end);
      pos_ = end - text_.c_str();
      return make_const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "x1") return make_var(1);
      if (name == "x2") return make_var(2);
      if (name == "pi") return make_const(M_PI);
      Node::Op op;
      if (name == "cos") op = Node::Op::Cos;
      else if (name == "sin") op = Node::Op::Sin;
      else if (name == "exp") op = Node::Op::Exp;
      else fail("unknown identifier '" + name + "'");
      skip_ws();
      if (!match('(')) fail("expected '(' after '" + name + "'");
      NodePtr arg = expression();
      skip_ws();
      if (!match(')')) fail("missing ')'");
      return make_unary(op, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
    return nullptr;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool match(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("expression error at position " +
                                std::to_string(pos_) + ": " + what);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::parse(const std::string& text) {
  return Expr(Parser(text).run());
}

double Expr::eval(double x1, double x2) const {
  if (!root_) throw std::logic_error("Expr: evaluating an empty expression");
  return eval_node(*root_, x1, x2);
}

Expr Expr::derivative(int var) const {
  if (var != 1 && var != 2)
    throw std::invalid_argument("Expr::derivative: var must be 1 or 2");
  if (!root_) throw std::logic_error("Expr: differentiating an empty expression");
  return Expr(diff_node(root_, var));
}

std::string Expr::str() const { return root_ ? str_node(*root_) : ""; }

std::array<Expr, 2> parse_vector_expr(const std::string& text) {
  int depth = 0;
  std::size_t split = std::string::npos;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    else if (text[i] == ')') --depth;
    else if (text[i] == ',' && depth == 0) {
      if (split != std::string::npos)
        throw std::invalid_argument("vector expression: expected exactly one top-level comma");
      split = i;
    }
  }
  if (split == std::string::npos)
    throw std::invalid_argument("vector expression: expected 'f1,f2'");
  return {Expr::parse(text.substr(0, split)), Expr::parse(text.substr(split + 1))};
}

}  // namespace gaffney
