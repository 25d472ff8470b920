#pragma once

#include <Eigen/Dense>
#include <functional>

namespace maslov {

// A(x; lambda) for y' = A y. `eval` writes into a preallocated n x n matrix.
struct CoefficientField {
  int n = 0;
  std::function<void(double x, double lambda, Eigen::MatrixXd& out)> eval;
  // Declared properties; structure_b means the trace does not depend on lambda
  // and dA/dlambda has the rank-one sign structure needed for monotonicity.
  bool structure_b = false;
  bool affine_in_lambda = false;

  Eigen::MatrixXd operator()(double x, double lambda) const {
    Eigen::MatrixXd out(n, n);
    eval(x, lambda, out);
    return out;
  }
};

}  // namespace maslov
