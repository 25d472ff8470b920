#include "maslov/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "maslov/error.hpp"

namespace maslov {

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::RankDeficiency: return "rank-deficiency";
    case ErrorKind::DegenerateCoefficient: return "degenerate-coefficient";
    case ErrorKind::SingularMatrix: return "singular-matrix";
    case ErrorKind::BlowUp: return "blow-up";
    case ErrorKind::InvarianceViolation: return "invariance-violation";
    case ErrorKind::NeedsFinerGrid: return "needs-finer-grid";
    case ErrorKind::NeedsRefinement: return "needs-refinement";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::UnknownName: return "unknown-name";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

namespace {

using Op = Expression::Op;
using Node = Expression::Node;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  int parse_all() {
    int root = expr();
    skip_ws();
    if (pos_ != s_.size()) fail({"+", "-", "*", "/", "^", "end of input"});
    return root;
  }

  std::vector<Node> nodes;

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string msg = "syntax error at offset " + std::to_string(pos_) + ": expected one of {";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += ", ";
      msg += expected[i];
    }
    msg += "}";
    throw SyntaxError(pos_, std::move(expected), msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int add(Op op, int l, int r, std::size_t off, double v = 0.0) {
    nodes.push_back(Node{op, v, l, r, off});
    return static_cast<int>(nodes.size()) - 1;
  }

  int expr() {
    int l = term();
    for (;;) {
      skip_ws();
      std::size_t off = pos_;
      if (accept('+')) l = add(Op::Add, l, term(), off);
      else if (accept('-')) l = add(Op::Sub, l, term(), off);
      else return l;
    }
  }

  int term() {
    int l = factor();
    for (;;) {
      skip_ws();
      std::size_t off = pos_;
      if (accept('*')) l = add(Op::Mul, l, factor(), off);
      else if (accept('/')) l = add(Op::Div, l, factor(), off);
      else return l;
    }
  }

  int factor() {
    int base = unary();
    skip_ws();
    std::size_t off = pos_;
    if (accept('^')) return add(Op::Pow, base, factor(), off);
    return base;
  }

  int unary() {
    skip_ws();
    std::size_t off = pos_;
    if (accept('-')) return add(Op::Neg, atom(), -1, off);
    return atom();
  }

  int atom() {
    skip_ws();
    std::size_t off = pos_;
    if (pos_ >= s_.size()) fail({"number", "x", "function", "(", "-"});
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      int e = expr();
      if (!accept(')')) fail({")", "+", "-", "*", "/", "^"});
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) ++end;
      std::string name = s_.substr(pos_, end - pos_);
      if (name == "x") {
        pos_ = end;
        return add(Op::X, -1, -1, off);
      }
      Op op;
      if (name == "sin") op = Op::Sin;
      else if (name == "cos") op = Op::Cos;
      else if (name == "exp") op = Op::Exp;
      else if (name == "sqrt") op = Op::Sqrt;
      else fail({"number", "x", "sin", "cos", "exp", "sqrt", "("});
      pos_ = end;
      if (!accept('(')) fail({"("});
      int arg = expr();
      if (!accept(')')) fail({")", "+", "-", "*", "/", "^"});
      return add(op, arg, -1, off);
    }
    fail({"number", "x", "function", "(", "-"});
  }

  int number() {
    std::size_t start = pos_;
    bool digits = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) {
      pos_ = start;
      fail({"digit"});
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc()) {
      pos_ = start;
      fail({"number"});
    }
    return add(Op::Number, -1, -1, start, v);
  }
};

[[noreturn]] void eval_fail(const char* what, std::size_t offset, double x) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "evaluation error: %s at offset %zu (x = %.17g)", what, offset, x);
  throw Error(ErrorKind::Evaluation, buf);
}

}  // namespace

Expression::Expression() : Expression(constant(0.0)) {}

Expression Expression::constant(double v) {
  auto d = std::make_shared<Data>();
  if (v >= 0) {
    d->nodes.push_back(Node{Op::Number, v, -1, -1, 0});
    d->root = 0;
  } else {
    d->nodes.push_back(Node{Op::Number, -v, -1, -1, 0});
    d->nodes.push_back(Node{Op::Neg, 0.0, 0, -1, 0});
    d->root = 1;
  }
  Expression tmp{std::shared_ptr<const Data>(d)};
  d->source = tmp.to_string();
  return tmp;
}

Expression parse_expression(const std::string& text) {
  Parser p(text);
  int root = p.parse_all();
  auto d = std::make_shared<Expression::Data>();
  d->nodes = std::move(p.nodes);
  d->root = root;
  d->source = text;
  return Expression(std::move(d));
}

bool Expression::is_constant() const {
  for (const auto& n : data_->nodes)
    if (n.op == Op::X) return false;
  return true;
}

double Expression::eval(double x) const { return eval_node(data_->root, x); }

double Expression::eval_node(int i, double x) const {
  const Node& n = data_->nodes[i];
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::X: return x;
    case Op::Neg: return -eval_node(n.lhs, x);
    case Op::Add: return eval_node(n.lhs, x) + eval_node(n.rhs, x);
    case Op::Sub: return eval_node(n.lhs, x) - eval_node(n.rhs, x);
    case Op::Mul: return eval_node(n.lhs, x) * eval_node(n.rhs, x);
    case Op::Div: {
      double den = eval_node(n.rhs, x);
      if (den == 0.0) eval_fail("division by zero", n.offset, x);
      return eval_node(n.lhs, x) / den;
    }
    case Op::Pow: {
      double r = std::pow(eval_node(n.lhs, x), eval_node(n.rhs, x));
      if (!std::isfinite(r)) eval_fail("non-finite power", n.offset, x);
      return r;
    }
    case Op::Sin: return std::sin(eval_node(n.lhs, x));
    case Op::Cos: return std::cos(eval_node(n.lhs, x));
    case Op::Exp: {
      double r = std::exp(eval_node(n.lhs, x));
      if (!std::isfinite(r)) eval_fail("exp overflow", n.offset, x);
      return r;
    }
    case Op::Sqrt: {
      double a = eval_node(n.lhs, x);
      if (a < 0) eval_fail("sqrt of negative argument", n.offset, x);
      return std::sqrt(a);
    }
  }
  return 0.0;
}

// Every serialized piece is an atom, so the output reparses to the same tree.
std::string Expression::serialize(int i) const {
  const Node& n = data_->nodes[i];
  switch (n.op) {
    case Op::Number: {
      char buf[400];
      auto res = std::to_chars(buf, buf + sizeof buf, n.value, std::chars_format::fixed);
      return std::string(buf, res.ptr);
    }
    case Op::X: return "x";
    case Op::Neg: return "(-" + serialize(n.lhs) + ")";
    case Op::Add: return "(" + serialize(n.lhs) + "+" + serialize(n.rhs) + ")";
    case Op::Sub: return "(" + serialize(n.lhs) + "-" + serialize(n.rhs) + ")";
    case Op::Mul: return "(" + serialize(n.lhs) + "*" + serialize(n.rhs) + ")";
    case Op::Div: return "(" + serialize(n.lhs) + "/" + serialize(n.rhs) + ")";
    case Op::Pow: return "(" + serialize(n.lhs) + "^" + serialize(n.rhs) + ")";
    case Op::Sin: return "sin(" + serialize(n.lhs) + ")";
    case Op::Cos: return "cos(" + serialize(n.lhs) + ")";
    case Op::Exp: return "exp(" + serialize(n.lhs) + ")";
    case Op::Sqrt: return "sqrt(" + serialize(n.lhs) + ")";
  }
  return "";
}

std::string Expression::to_string() const { return serialize(data_->root); }

}  // namespace maslov
