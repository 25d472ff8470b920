#pragma once

#include <memory>
#include <string>
#include <vector>

namespace maslov {

// Scalar expression in the single variable x. Immutable and cheap to copy.
class Expression {
 public:
  enum class Op { Number, X, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt };

  struct Node {
    Op op;
    double value = 0.0;
    int lhs = -1;
    int rhs = -1;
    std::size_t offset = 0;
  };

  Expression();  // the constant 0
  static Expression constant(double v);

  double eval(double x) const;
  std::string to_string() const;
  const std::string& source() const { return data_->source; }
  bool is_constant() const;

  friend Expression parse_expression(const std::string& text);

 private:
  struct Data {
    std::vector<Node> nodes;
    int root = -1;
    std::string source;
  };
  explicit Expression(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  double eval_node(int i, double x) const;
  std::string serialize(int i) const;

  std::shared_ptr<const Data> data_;
};

// Throws SyntaxError with byte offset and the expected-token set.
Expression parse_expression(const std::string& text);

}  // namespace maslov
