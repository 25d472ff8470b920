#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "maslov/coefficient_field.hpp"
#include "maslov/expression.hpp"
#include "maslov/multilinear.hpp"

namespace maslov {

enum class ProblemKind { HigherOrder, SecondOrder, General };

// Boundary frame: either a named preset ("dirichlet", "neumann") or explicit rows.
struct BoundarySpec {
  std::string preset;
  std::vector<std::vector<double>> rows;
};

struct ProblemConfig {
  ProblemKind kind = ProblemKind::HigherOrder;
  int n = 0;  // higher-order: order of the scalar equation
  int l = 0;  // second-order: number of components
  int m = 0;  // dimension of P; 0 means infer from P
  std::vector<std::string> alphas;  // alpha_0 .. alpha_n
  std::vector<double> kappas;       // kappa_2 .. kappa_n
  std::vector<double> B;            // diagonal
  std::vector<std::vector<std::string>> V, W;
  BoundarySpec P, Q;
  double lambda1 = 0.0, lambda2 = 1.0;
  int x_steps = 1000;
  int lambda_steps = 600;
};

struct SpectralProblem {
  CoefficientField field;
  Frame P, Q;
  double lambda1 = 0.0, lambda2 = 1.0;
  int x_steps = 1000;
  int lambda_steps = 600;
  bool rescale = true;

  // Present for higher-order problems; used by the Hadamard delta bound.
  std::optional<std::vector<Expression>> alphas;
  std::vector<double> kappas;

  int n() const { return field.n; }
  int m() const { return static_cast<int>(P.cols()); }
  void validate() const;
};

ProblemConfig parse_config_json(const std::string& text);
ProblemConfig load_config_file(const std::string& path);
std::string config_to_json(const ProblemConfig& cfg);

SpectralProblem load_problem(const ProblemConfig& cfg);

// Builds a problem directly from a coefficient field (the "general" kind).
// Runs the numeric structure check and records the result in the field flags.
SpectralProblem general_problem(CoefficientField field, const Eigen::MatrixXd& P,
                                const Eigen::MatrixXd& Q, double lambda1,
                                double lambda2, int x_steps = 1000,
                                int lambda_steps = 600);

// Numeric check that the trace is lambda-free and that A(x;l2) - A(x;l1) does not
// depend on x, sampled on a grid.
bool check_structure_b(const CoefficientField& field, double lambda1, double lambda2,
                       int samples = 101);

std::vector<std::string> catalog_names();
ProblemConfig builtin_catalog(const std::string& name);

}  // namespace maslov
