#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "maslov/maslovbox.hpp"
#include "maslov/problem.hpp"

namespace maslov {

struct InvarianceReport {
  double C_a = 0.0;
  double C_A = 0.0;
  double c_g = 1.0, c_h = 1.0;
  double C_g = 0.0, C_h = 0.0;
  double C_d = 0.0;
  double delta = 0.0;
  double C = 1.0;
  double rho0 = 0.0;
  double margin = 0.0;
  bool certified = false;

  bool c_g_exact = false;        // m = 1: c_g = 1 and C_g is the C_A bound
  double C_g_measured = 0.0;     // grid maximum of |d_g'/d_g|
  double C_g_bound = 0.0;        // m! C_A / c_g^2
  bool bounds_hold = true;       // measured rates and volumes respect the bounds
  std::string delta_method;      // "hadamard" or "grid"
};

struct InvarianceOptions {
  // m > 1 or grid delta: number of lambda lines swept (defaults to lambda_steps)
  int lambda_lines = 0;
};

InvarianceReport constants_report(const SpectralProblem& problem,
                                  const InvarianceOptions& opts = {});

// Hadamard bound on |d omega2/dx| / d for higher-order companion problems.
double delta_bound_higher_order(const SpectralProblem& problem, double c_g, double c_h);

struct BoundaryConditionCheck {
  double det_first = 0.0;
  double det_second = 0.0;
  bool satisfied = false;
};

BoundaryConditionCheck bc_conditions_check(const SpectralProblem& problem);

struct LossPoint {
  double x_star = 0.0, lambda_star = 0.0;
  double rho = 0.0;
  int i_minus = 0, i_plus = 0;
  int local_m = 0;
  bool classified = false;
  bool consistent = true;       // branch halves below and above x* pair up
  int boundary_index = 0;       // winding of the enclosing sub-box boundary
  bool boundary_index_valid = false;
  double half_width = 0.0, half_height = 0.0;
};

struct RhoScanOptions {
  double candidate_rho = 0.05;  // grid local minima below this are refined
  double zero_rho = 1e-9;       // accepted loss points
  int refine_rounds = 2;
  bool classify = true;
};

struct RhoScan {
  double min_rho = 0.0;
  double argmin_x = 0.0, argmin_lambda = 0.0;
  std::vector<LossPoint> loss_points;
  std::vector<double> xs, lambdas;
  Eigen::MatrixXd rho;   // rows: x nodes, cols: lambda nodes
  Eigen::MatrixXd psi1;
};

RhoScan rho_grid_scan(const SpectralProblem& problem, const RhoScanOptions& opts = {});

// Fills i_minus, i_plus, local_m. `others` are the remaining loss points; one
// inside the enclosing box raises a needs-refinement error.
LossPoint classify_loss_point(const SpectralProblem& problem, const LossPoint& point,
                              const std::vector<LossPoint>& others = {});

// psi values along increasing xs at fixed lambda (G at lambda, H at lambda2).
std::vector<OmegaPairValue> psi_along_x(const BoxContext& ctx, double lambda,
                                        const std::vector<double>& xs);

// Generalized index around [x_lo, x_hi] x [l_lo, l_hi]: bottom + right - top - left.
int rectangle_index(const BoxContext& ctx, double x_lo, double x_hi, double l_lo,
                    double l_hi, int samples = 200);

}  // namespace maslov
