#pragma once

#include <Eigen/Dense>

#include "maslov/coefficient_field.hpp"

namespace maslov {

// Full-column-rank n x k matrix whose columns span a subspace.
class Frame {
 public:
  Frame() = default;
  explicit Frame(Eigen::MatrixXd m);
  const Eigen::MatrixXd& matrix() const { return m_; }
  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }

 private:
  Eigen::MatrixXd m_;
};

// sqrt(det(M^T M)); throws on non-finite entries or (numerical) rank loss.
double gram_volume(const Eigen::MatrixXd& m);

// d / prod |columns|, in (0, 1].
double column_volume_ratio(const Eigen::MatrixXd& m);

// det [G H].
double omega1_eval(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h);

// blockdiag(A~(lambda1), A~(lambda2)); A~ is A(0; .) with its diagonal zeroed.
struct BlockLambdaMatrix {
  Eigen::MatrixXd first;   // acts on the G columns
  Eigen::MatrixXd second;  // acts on the H columns
  Eigen::MatrixXd full() const;
};

BlockLambdaMatrix build_A_tilde(const CoefficientField& field, double lambda1,
                                double lambda2);

// Sum over columns of det [G H] with one column replaced by its image.
double omega2_eval(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h,
                   const BlockLambdaMatrix& at);

struct OmegaPairValue {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double d = 1.0;
  double psi1 = 0.0;
  double psi2 = 0.0;
  double rho = 0.0;
};

OmegaPairValue psi_rho(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h,
                       const BlockLambdaMatrix& at);

// x-derivatives along y' = A y, with A_g acting on G and A_h on H.
double omega1_derivative(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h,
                         const Eigen::MatrixXd& a_g, const Eigen::MatrixXd& a_h);
double omega2_derivative(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h,
                         const BlockLambdaMatrix& at, const Eigen::MatrixXd& a_g,
                         const Eigen::MatrixXd& a_h);

// d'/d for the Gram volume of a frame moving under y' = A y.
double log_volume_rate(const Eigen::MatrixXd& g, const Eigen::MatrixXd& a);

}  // namespace maslov
