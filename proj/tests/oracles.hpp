// Independent reference computations used by the tests. Nothing here calls
// into the library's multilinear or winding code.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace oracle {

inline double det(const Eigen::MatrixXd& m) { return m.fullPivLu().determinant(); }

// sqrt(det(M^T M)) straight from the Gram matrix.
inline double gram_volume(const Eigen::MatrixXd& m) {
  return std::sqrt(det(m.transpose() * m));
}

// 2n x n frame [[G, 0], [0, H]].
inline Eigen::MatrixXd big_frame(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h) {
  const Eigen::Index n = g.rows(), m = g.cols();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(2 * n, n);
  f.block(0, 0, n, m) = g;
  f.block(n, m, n, n - m) = h;
  return f;
}

inline Eigen::MatrixXd delta_tilde(Eigen::Index n) {
  Eigen::MatrixXd d(2 * n, n);
  d << -Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(n, n);
  return d;
}

// det(F, Delta~) on the full 2n x 2n matrix.
inline double omega1_full(const Eigen::MatrixXd& f) {
  const Eigen::Index n = f.cols();
  Eigen::MatrixXd m(2 * n, 2 * n);
  m << f, delta_tilde(n);
  return det(m);
}

// sum_k omega1(f_1, ..., T f_k, ..., f_n) with a 2n x 2n block matrix T.
inline double omega2_full(const Eigen::MatrixXd& f, const Eigen::MatrixXd& t) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < f.cols(); ++k) {
    Eigen::MatrixXd g = f;
    g.col(k) = t * f.col(k);
    s += omega1_full(g);
  }
  return s;
}

inline Eigen::MatrixXd block_diag(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// Winding of the projective point [omega1 : omega2]: the doubled angle
// 2*atan2(-psi2, psi1) is unwrapped and its passages through odd multiples
// of pi are counted with sign (increasing angle is counterclockwise).
inline int angle_winding(const std::vector<double>& psi1, const std::vector<double>& psi2) {
  const double pi = std::acos(-1.0);
  std::vector<double> phi(psi1.size());
  for (std::size_t k = 0; k < psi1.size(); ++k) phi[k] = 2.0 * std::atan2(-psi2[k], psi1[k]);
  for (std::size_t k = 1; k < phi.size(); ++k) {
    double d = phi[k] - phi[k - 1];
    d -= 2 * pi * std::round(d / (2 * pi));
    phi[k] = phi[k - 1] + d;
  }
  auto sheet = [&](double a) { return std::floor((a + pi) / (2 * pi)); };
  return static_cast<int>(sheet(phi.back()) - sheet(phi.front()));
}

// Dirichlet eigenvalues of -phi'' = lambda phi on [0,1].
inline std::vector<double> dirichlet_eigenvalues(double lo, double hi) {
  const double pi = std::acos(-1.0);
  std::vector<double> out;
  for (int k = 1;; ++k) {
    double e = k * k * pi * pi;
    if (e > hi) break;
    if (e >= lo) out.push_back(e);
  }
  return out;
}

}  // namespace oracle
