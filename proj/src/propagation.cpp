#include "maslov/propagation.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <string>

#include "maslov/error.hpp"

namespace maslov {

void companion_higher_order(const std::vector<double>& alphas,
                            const std::vector<double>& kappas, double lambda,
                            Eigen::MatrixXd& out) {
  const int n = static_cast<int>(alphas.size()) - 1;
  if (n < 2 || static_cast<int>(kappas.size()) != n - 1)
    throw Error(ErrorKind::InvalidInput, "need alpha_0..alpha_n and kappa_2..kappa_n with n >= 2");
  const double an = alphas[n];
  if (!(an > 0.0)) throw Error(ErrorKind::DegenerateCoefficient, "leading coefficient must be positive");
  for (double k : kappas)
    if (k == 0.0 || !std::isfinite(k)) throw Error(ErrorKind::InvalidInput, "kappa values must be finite and nonzero");
  // kappa(i) for i = 1..n with kappa_1 = 1
  auto kappa = [&](int i) { return i == 1 ? 1.0 : kappas[i - 2]; };
  out.setZero(n, n);
  for (int i = 1; i <= n - 2; ++i) out(i - 1, i) = kappa(i) / kappa(i + 1);
  out(n - 2, n - 1) = kappa(n - 1) / an;
  out(n - 1, 0) = lambda - alphas[0];
  for (int j = 1; j <= n - 2; ++j) out(n - 1, j) = -alphas[j] / kappa(j + 1);
  out(n - 1, n - 1) = -alphas[n - 1] / an;
}

void companion_second_order(const Eigen::VectorXd& b_diag, const Eigen::MatrixXd& v,
                            const Eigen::MatrixXd& w, double lambda,
                            Eigen::MatrixXd& out) {
  const Eigen::Index l = b_diag.size();
  if (v.rows() != l || v.cols() != l || w.rows() != l || w.cols() != l)
    throw Error(ErrorKind::InvalidInput, "V and W must be l x l");
  Eigen::VectorXd binv(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    if (b_diag(i) == 0.0) throw Error(ErrorKind::SingularMatrix, "B is singular");
    if (!(b_diag(i) > 0.0)) throw Error(ErrorKind::InvalidInput, "B must be positive");
    binv(i) = 1.0 / b_diag(i);
  }
  out.setZero(2 * l, 2 * l);
  out.topRightCorner(l, l) = binv.asDiagonal();
  out.bottomLeftCorner(l, l) = v;
  out.bottomLeftCorner(l, l).diagonal().array() -= lambda;
  out.bottomRightCorner(l, l) = w * binv.asDiagonal();
}

void propagate(const CoefficientField& field, const Eigen::MatrixXd& init,
               double from, double to, int steps, double lambda, bool rescale,
               const NodeVisitor& visit) {
  if (steps < 1) throw Error(ErrorKind::InvalidInput, "need at least one step");
  if (init.rows() != field.n) throw Error(ErrorKind::InvalidInput, "frame row count does not match the system");
  const int n = field.n;
  const double h = (to - from) / steps;
  Eigen::MatrixXd f = init;
  double log_scale = 0.0;
  if (rescale) {
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
      double c = f.col(j).norm();
      f.col(j) /= c;
      log_scale += std::log(c);
    }
  }
  Eigen::MatrixXd a0(n, n), am(n, n), a1(n, n);
  Eigen::MatrixXd k1, k2, k3, k4, tmp;
  field.eval(from, lambda, a0);
  visit(0, from, f, log_scale);
  for (int s = 0; s < steps; ++s) {
    const double x = from + s * h;
    const double xn = from + (s + 1) * h;
    field.eval(x + 0.5 * h, lambda, am);
    field.eval(xn, lambda, a1);
    k1.noalias() = a0 * f;
    tmp = f + (0.5 * h) * k1;
    k2.noalias() = am * tmp;
    tmp = f + (0.5 * h) * k2;
    k3.noalias() = am * tmp;
    tmp = f + h * k3;
    k4.noalias() = a1 * tmp;
    f += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!f.allFinite()) {
      char buf[120];
      std::snprintf(buf, sizeof buf, "solution blew up near x = %.17g", xn);
      throw BlowUpError(xn, buf);
    }
    if (rescale) {
      for (Eigen::Index j = 0; j < f.cols(); ++j) {
        double c = f.col(j).norm();
        f.col(j) /= c;
        log_scale += std::log(c);
      }
    }
    std::swap(a0, a1);
    visit(static_cast<std::size_t>(s + 1), xn, f, log_scale);
  }
}

FramePath integrate_frame(const CoefficientField& field, const Frame& init,
                          double from, double to, int steps, double lambda,
                          bool rescale) {
  FramePath path;
  path.lambda = lambda;
  path.xs.reserve(steps + 1);
  path.frames.reserve(steps + 1);
  path.log_scale.reserve(steps + 1);
  propagate(field, init.matrix(), from, to, steps, lambda, rescale,
            [&](std::size_t, double x, const Eigen::MatrixXd& f, double ls) {
              path.xs.push_back(x);
              path.frames.emplace_back(f);
              path.log_scale.push_back(ls);
            });
  if (to < from) {
    std::reverse(path.xs.begin(), path.xs.end());
    std::reverse(path.frames.begin(), path.frames.end());
    std::reverse(path.log_scale.begin(), path.log_scale.end());
  }
  return path;
}

Eigen::MatrixXd propagate_to(const CoefficientField& field, const Eigen::MatrixXd& init,
                             double from, double to, int steps, double lambda,
                             bool rescale, double* log_scale) {
  Eigen::MatrixXd last;
  double ls = 0.0;
  propagate(field, init, from, to, steps, lambda, rescale,
            [&](std::size_t k, double, const Eigen::MatrixXd& f, double s) {
              if (k == static_cast<std::size_t>(steps)) {
                last = f;
                ls = s;
              }
            });
  if (log_scale) *log_scale = ls;
  return last;
}

}  // namespace maslov
