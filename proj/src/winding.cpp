#include "maslov/winding.hpp"

#include <cmath>
#include <cstdio>

#include "maslov/error.hpp"

namespace maslov {

const char* crossing_kind_name(CrossingKind k) {
  switch (k) {
    case CrossingKind::Interior: return "interior";
    case CrossingKind::LeftEndpoint: return "left-endpoint";
    case CrossingKind::RightEndpoint: return "right-endpoint";
    case CrossingKind::Interval: return "interval";
  }
  return "";
}

namespace {

int sgn(double v) { return (v > 0) - (v < 0); }

[[noreturn]] void violation(const WindingOptions& opts, std::size_t node, double t,
                            const char* where) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "invariance violated on %s shelf at node %zu (t = %.10g, %s)",
                opts.shelf.c_str(), node, t, where);
  throw InvarianceError(opts.shelf, node, t, buf);
}

int ratio_sign(const OmegaPairValue& v) { return sgn(v.psi1) * sgn(v.psi2); }

void finish(CrossingRecord& r) {
  if (r.before_sign != 0 && r.after_sign != 0) {
    if (r.before_sign < 0 && r.after_sign > 0) r.direction = 1;
    else if (r.before_sign > 0 && r.after_sign < 0) r.direction = -1;
  } else if (r.kind == CrossingKind::LeftEndpoint) {
    r.direction = r.after_sign;
  } else if (r.kind == CrossingKind::RightEndpoint) {
    r.direction = -r.before_sign;
  }
  r.contribution = (r.before_sign < 0 ? 1 : 0) - (r.after_sign < 0 ? 1 : 0);
  if (r.kind == CrossingKind::Interior && r.direction == 0) r.flagged = true;
  if (r.kind == CrossingKind::Interval) r.flagged = true;
}

}  // namespace

std::vector<CrossingRecord> detect_crossings(const PathSamples& path,
                                             const WindingOptions& opts,
                                             const Psi1Refiner& refine) {
  const std::size_t n = path.size();
  if (n == 0 || path.values.size() != n) throw Error(ErrorKind::InvalidInput, "empty or inconsistent path");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(path.values[k].rho > opts.rho_min)) violation(opts, k, path.ts[k], "rho vanishes at node");
  }
  auto is_zero = [&](std::size_t k) { return std::abs(path.values[k].psi1) <= opts.zero_tol; };

  std::vector<CrossingRecord> out;
  std::size_t k = 0;
  while (k < n) {
    if (is_zero(k)) {
      std::size_t e = k;
      while (e + 1 < n && is_zero(e + 1)) ++e;
      if (n == 1) throw Error(ErrorKind::NeedsFinerGrid, "zero on a single-node path has no neighbours");
      CrossingRecord r;
      r.node = k;
      r.t = path.ts[k];
      r.t_end = path.ts[e];
      if (e > k) r.kind = CrossingKind::Interval;
      else if (k == 0) r.kind = CrossingKind::LeftEndpoint;
      else if (k == n - 1) r.kind = CrossingKind::RightEndpoint;
      else r.kind = CrossingKind::Interior;
      r.before_sign = k > 0 ? ratio_sign(path.values[k - 1]) : 0;
      r.after_sign = e + 1 < n ? ratio_sign(path.values[e + 1]) : 0;
      finish(r);
      out.push_back(r);
      k = e + 1;
      continue;
    }
    if (k + 1 < n && !is_zero(k + 1) && sgn(path.values[k].psi1) != sgn(path.values[k + 1].psi1)) {
      const auto& a = path.values[k];
      const auto& b = path.values[k + 1];
      const double ta = path.ts[k], tb = path.ts[k + 1];
      double s = a.psi1 / (a.psi1 - b.psi1);
      double psi2 = a.psi2 + s * (b.psi2 - a.psi2);
      if (!(0.5 * psi2 * psi2 > opts.rho_min)) violation(opts, k, ta + s * (tb - ta), "omega2 vanishes at crossing");
      CrossingRecord r;
      r.node = k;
      r.t = ta + s * (tb - ta);
      if (refine) {
        double lo = ta, hi = tb;
        int slo = sgn(a.psi1);
        while (hi - lo > opts.refine_tol) {
          double mid = 0.5 * (lo + hi);
          int sm = sgn(refine(mid));
          if (sm == 0) {
            lo = hi = mid;
            break;
          }
          if (sm == slo) lo = mid;
          else hi = mid;
        }
        r.t = 0.5 * (lo + hi);
      }
      r.t_end = r.t;
      r.before_sign = ratio_sign(a);
      r.after_sign = ratio_sign(b);
      finish(r);
      out.push_back(r);
    }
    ++k;
  }
  return out;
}

WindingResult winding_index(const PathSamples& path, const WindingOptions& opts,
                            const Psi1Refiner& refine) {
  WindingResult w;
  w.crossings = detect_crossings(path, opts, refine);
  for (const auto& r : w.crossings) w.index += r.contribution;
  return w;
}

Eigen::Vector2d p_point(const OmegaPairValue& v) {
  double a = v.psi1, b = v.psi2;
  if (v.d == 0.0 || (a == 0.0 && b == 0.0)) {
    a = v.omega1;
    b = v.omega2;
  }
  double nrm = std::hypot(a, b);
  if (!(nrm > 0.0)) throw InvarianceError("point", 0, 0.0, "p_point undefined where rho = 0");
  Eigen::Vector2d p(b / nrm, a / nrm);
  if (b > 0) p = -p;
  return p;
}

}  // namespace maslov
