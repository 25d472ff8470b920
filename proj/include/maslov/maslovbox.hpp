#pragma once

#include <string>
#include <vector>

#include "maslov/multilinear.hpp"
#include "maslov/problem.hpp"
#include "maslov/propagation.hpp"
#include "maslov/winding.hpp"

namespace maslov {

enum class Shelf { Bottom, Right, Top, Left };
const char* shelf_name(Shelf s);

// Frames paired at a single (x, lambda): G from P at x = 0, H from Q at x = 1
// taken at lambda2. Integration uses a fixed step count, so values are smooth in x.
struct PointEvaluation {
  Eigen::MatrixXd g, h;
  double log_scale_g = 0.0, log_scale_h = 0.0;
  OmegaPairValue value;
};

// Shared pieces of a box computation: the A~ pair and the H path at lambda2.
class BoxContext {
 public:
  explicit BoxContext(const SpectralProblem& problem);
  const SpectralProblem& problem() const { return *problem_; }
  const BlockLambdaMatrix& a_tilde() const { return at_; }
  const FramePath& h_path() const { return h_path_; }
  std::vector<double> lambda_grid() const;

  PointEvaluation evaluate(double x, double lambda) const;
  double psi1_top(double lambda) const;

 private:
  const SpectralProblem* problem_;
  BlockLambdaMatrix at_;
  FramePath h_path_;
};

// Parameter always increasing: lambda for bottom/top, x for right/left.
PathSamples shelf_path(const SpectralProblem& problem, Shelf shelf);
PathSamples shelf_path(const BoxContext& ctx, Shelf shelf);

struct MonotonicityViolation {
  double x = 0.0;
  int direction = 0;
};

struct MaslovBoxReport {
  int ind_bottom = 0, ind_right = 0, ind_top = 0, ind_left = 0;
  int m_frak = 0;
  int lower_bound = 0;
  std::vector<double> left_crossings;
  std::vector<double> eigenvalues;
  std::vector<double> degenerate_candidates;
  std::vector<MonotonicityViolation> monotonicity_violations;
  std::vector<std::string> anomalies;  // nonzero bottom/right indices, interval records
  std::vector<CrossingRecord> left_records, top_records;
};

struct BoxOptions {
  double eigen_tol = 1e-10;
  double zero_tol = 1e-9;
  double rho_min = 1e-12;
};

MaslovBoxReport compute_box(const SpectralProblem& problem, const BoxOptions& opts = {});

struct LeftShelfCount {
  int count = 0;
  std::vector<double> xs;
};

LeftShelfCount renormalized_count(const SpectralProblem& problem);

struct TopShelfEigenvalues {
  std::vector<double> eigenvalues;
  std::vector<double> degenerate_candidates;
};

TopShelfEigenvalues localize_eigenvalues_top(const SpectralProblem& problem, double tol);

struct AuditEntry {
  double x = 0.0;
  double ratio = 0.0;
  bool ok = false;
};

std::vector<AuditEntry> monotonicity_audit(const SpectralProblem& problem);

}  // namespace maslov
