#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "maslov/multilinear.hpp"

namespace maslov {

// (omega1, omega2) samples along a parameter, t increasing.
struct PathSamples {
  std::vector<double> ts;
  std::vector<OmegaPairValue> values;
  std::vector<double> log_scale;  // optional: log of the removed frame scaling
  std::size_t size() const { return ts.size(); }
};

struct WindingOptions {
  double zero_tol = 1e-9;   // |psi1| at or below this counts as a zero node
  double rho_min = 1e-12;   // invariance floor on rho
  double refine_tol = 1e-10;
  std::string shelf = "path";
};

enum class CrossingKind { Interior, LeftEndpoint, RightEndpoint, Interval };

const char* crossing_kind_name(CrossingKind k);

struct CrossingRecord {
  double t = 0.0;        // refined location (start of an interval record)
  double t_end = 0.0;    // end of an interval record, otherwise equal to t
  CrossingKind kind = CrossingKind::Interior;
  int before_sign = 0;   // sign of psi1/psi2 on the nearest node before, 0 if none
  int after_sign = 0;
  int direction = 0;     // +1 counterclockwise, -1 clockwise, 0 tangential/one-sided
  int contribution = 0;  // contribution to the winding index
  bool flagged = false;  // tangential touch or interval
  std::size_t node = 0;  // first node of the bracketing pair or zero run
};

// Optional exact psi1 evaluator used to refine sign-change brackets.
using Psi1Refiner = std::function<double(double t)>;

// Throws InvarianceError when rho drops to rho_min on a node or at a crossing.
std::vector<CrossingRecord> detect_crossings(const PathSamples& path,
                                             const WindingOptions& opts = {},
                                             const Psi1Refiner& refine = nullptr);

struct WindingResult {
  int index = 0;
  std::vector<CrossingRecord> crossings;
};

WindingResult winding_index(const PathSamples& path, const WindingOptions& opts = {},
                            const Psi1Refiner& refine = nullptr);

// Unit vector tracing the projective point of (omega1, omega2).
Eigen::Vector2d p_point(const OmegaPairValue& v);

}  // namespace maslov
