#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "maslov/coefficient_field.hpp"
#include "maslov/multilinear.hpp"

namespace maslov {

// Companion matrix of a scalar order-n problem. alphas holds alpha_0..alpha_n
// evaluated at x, kappas holds kappa_2..kappa_n.
void companion_higher_order(const std::vector<double>& alphas,
                            const std::vector<double>& kappas, double lambda,
                            Eigen::MatrixXd& out);

// [[0, B^-1], [V - lambda I, W B^-1]] for a diagonal B.
void companion_second_order(const Eigen::VectorXd& b_diag, const Eigen::MatrixXd& v,
                            const Eigen::MatrixXd& w, double lambda,
                            Eigen::MatrixXd& out);

struct FramePath {
  double lambda = 0.0;
  std::vector<double> xs;            // increasing
  std::vector<Frame> frames;         // column-rescaled if requested
  std::vector<double> log_scale;     // log of removed column scaling, summed
};

// Called at every node in integration order: (node index, x, frame, log scale).
using NodeVisitor =
    std::function<void(std::size_t, double, const Eigen::MatrixXd&, double)>;

// Fixed-step RK4 from `from` to `to` (either direction).
void propagate(const CoefficientField& field, const Eigen::MatrixXd& init,
               double from, double to, int steps, double lambda, bool rescale,
               const NodeVisitor& visit);

// Frame path on a uniform grid of steps+1 nodes, stored in increasing x.
FramePath integrate_frame(const CoefficientField& field, const Frame& init,
                          double from, double to, int steps, double lambda,
                          bool rescale = true);

// Frame at the end of the integration only.
Eigen::MatrixXd propagate_to(const CoefficientField& field, const Eigen::MatrixXd& init,
                             double from, double to, int steps, double lambda,
                             bool rescale = true, double* log_scale = nullptr);

}  // namespace maslov
