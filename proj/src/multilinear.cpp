#include "maslov/multilinear.hpp"

#include <cmath>

#include "maslov/error.hpp"

namespace maslov {

namespace {

constexpr double kRankTol = 1e-12;

double det(const Eigen::MatrixXd& m) { return m.partialPivLu().determinant(); }

Eigen::MatrixXd joined(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h) {
  if (g.rows() != h.rows() || g.cols() + h.cols() != g.rows())
    throw Error(ErrorKind::InvalidInput, "frame dimensions do not add up to the system size");
  Eigen::MatrixXd c(g.rows(), g.rows());
  c << g, h;
  return c;
}

}  // namespace

Frame::Frame(Eigen::MatrixXd m) : m_(std::move(m)) { gram_volume(m_); }

double column_volume_ratio(const Eigen::MatrixXd& m) {
  if (m.cols() == 0 || m.rows() < m.cols())
    throw Error(ErrorKind::InvalidInput, "frame must have 1 <= k <= n columns");
  if (!m.allFinite()) throw Error(ErrorKind::InvalidInput, "frame has non-finite entries");
  // unit columns first so huge unrescaled frames do not overflow the QR
  Eigen::MatrixXd unit = m;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double cn = m.col(j).stableNorm();
    if (cn == 0.0) throw Error(ErrorKind::RankDeficiency, "frame has a zero column");
    unit.col(j) /= cn;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(unit);
  const Eigen::MatrixXd& r = qr.matrixQR();
  double ratio = 1.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) ratio *= std::abs(r(j, j));
  if (!(ratio > kRankTol)) throw Error(ErrorKind::RankDeficiency, "frame is rank deficient");
  return ratio;
}

double gram_volume(const Eigen::MatrixXd& m) {
  double ratio = column_volume_ratio(m);
  double prod = 1.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) prod *= m.col(j).stableNorm();
  return ratio * prod;
}

double omega1_eval(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h) {
  return det(joined(g, h));
}

Eigen::MatrixXd BlockLambdaMatrix::full() const {
  Eigen::Index n = first.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = first;
  out.bottomRightCorner(n, n) = second;
  return out;
}

BlockLambdaMatrix build_A_tilde(const CoefficientField& field, double lambda1,
                                double lambda2) {
  if (!(lambda1 < lambda2)) throw Error(ErrorKind::InvalidInput, "lambda1 must be below lambda2");
  BlockLambdaMatrix b;
  b.first = field(0.0, lambda1);
  b.second = field(0.0, lambda2);
  b.first.diagonal().setZero();
  b.second.diagonal().setZero();
  return b;
}

double omega2_eval(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h,
                   const BlockLambdaMatrix& at) {
  Eigen::MatrixXd c = joined(g, h);
  const Eigen::Index m = g.cols();
  double sum = 0.0;
  Eigen::MatrixXd work = c;
  for (Eigen::Index k = 0; k < c.cols(); ++k) {
    work.col(k) = (k < m ? at.first : at.second) * c.col(k);
    sum += det(work);
    work.col(k) = c.col(k);
  }
  return sum;
}

OmegaPairValue psi_rho(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h,
                       const BlockLambdaMatrix& at) {
  OmegaPairValue v;
  v.omega1 = omega1_eval(g, h);
  v.omega2 = omega2_eval(g, h, at);
  v.d = gram_volume(g) * gram_volume(h);
  v.psi1 = v.omega1 / v.d;
  v.psi2 = v.omega2 / v.d;
  v.rho = 0.5 * (v.psi1 * v.psi1 + v.psi2 * v.psi2);
  return v;
}

double omega1_derivative(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h,
                         const Eigen::MatrixXd& a_g, const Eigen::MatrixXd& a_h) {
  Eigen::MatrixXd c = joined(g, h);
  const Eigen::Index m = g.cols();
  Eigen::MatrixXd work = c;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < c.cols(); ++k) {
    work.col(k) = (k < m ? a_g : a_h) * c.col(k);
    sum += det(work);
    work.col(k) = c.col(k);
  }
  return sum;
}

double omega2_derivative(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h,
                         const BlockLambdaMatrix& at, const Eigen::MatrixXd& a_g,
                         const Eigen::MatrixXd& a_h) {
  Eigen::MatrixXd c = joined(g, h);
  const Eigen::Index m = g.cols();
  const Eigen::Index n = c.cols();
  Eigen::MatrixXd work = c;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::MatrixXd& tj = j < m ? at.first : at.second;
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::MatrixXd& ak = k < m ? a_g : a_h;
      if (j == k) {
        work.col(j) = tj * (ak * c.col(j));
        sum += det(work);
      } else {
        work.col(j) = tj * c.col(j);
        work.col(k) = ak * c.col(k);
        sum += det(work);
        work.col(k) = c.col(k);
      }
      work.col(j) = c.col(j);
    }
  }
  return sum;
}

double log_volume_rate(const Eigen::MatrixXd& g, const Eigen::MatrixXd& a) {
  Eigen::MatrixXd gram = g.transpose() * g;
  Eigen::MatrixXd s = g.transpose() * (a + a.transpose()) * g;
  return 0.5 * gram.ldlt().solve(s).trace();
}

}  // namespace maslov
