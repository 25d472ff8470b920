#include "maslov/maslovbox.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "maslov/error.hpp"

namespace maslov {

const char* shelf_name(Shelf s) {
  switch (s) {
    case Shelf::Bottom: return "bottom";
    case Shelf::Right: return "right";
    case Shelf::Top: return "top";
    case Shelf::Left: return "left";
  }
  return "";
}

namespace {

Eigen::MatrixXd normalized(const Eigen::MatrixXd& f, bool rescale, double& log_scale) {
  log_scale = 0.0;
  if (!rescale) return f;
  Eigen::MatrixXd out = f;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    double c = out.col(j).norm();
    out.col(j) /= c;
    log_scale += std::log(c);
  }
  return out;
}

}  // namespace

BoxContext::BoxContext(const SpectralProblem& problem) : problem_(&problem) {
  problem.validate();
  at_ = build_A_tilde(problem.field, problem.lambda1, problem.lambda2);
  h_path_ = integrate_frame(problem.field, problem.Q, 1.0, 0.0, problem.x_steps,
                            problem.lambda2, problem.rescale);
}

std::vector<double> BoxContext::lambda_grid() const {
  const auto& p = *problem_;
  std::vector<double> out(p.lambda_steps + 1);
  for (int j = 0; j <= p.lambda_steps; ++j)
    out[j] = p.lambda1 + j * (p.lambda2 - p.lambda1) / p.lambda_steps;
  out.back() = p.lambda2;
  return out;
}

PointEvaluation BoxContext::evaluate(double x, double lambda) const {
  const auto& p = *problem_;
  PointEvaluation e;
  if (x <= 0.0)
    e.g = normalized(p.P.matrix(), p.rescale, e.log_scale_g);
  else
    e.g = propagate_to(p.field, p.P.matrix(), 0.0, x, p.x_steps, lambda, p.rescale, &e.log_scale_g);
  if (x >= 1.0)
    e.h = normalized(p.Q.matrix(), p.rescale, e.log_scale_h);
  else
    e.h = propagate_to(p.field, p.Q.matrix(), 1.0, x, p.x_steps, p.lambda2, p.rescale, &e.log_scale_h);
  e.value = psi_rho(e.g, e.h, at_);
  return e;
}

double BoxContext::psi1_top(double lambda) const {
  const auto& p = *problem_;
  Eigen::MatrixXd g = propagate_to(p.field, p.P.matrix(), 0.0, 1.0, p.x_steps, lambda, p.rescale);
  const Eigen::MatrixXd& q = p.Q.matrix();
  return omega1_eval(g, q) / (gram_volume(g) * gram_volume(q));
}

PathSamples shelf_path(const SpectralProblem& problem, Shelf shelf) {
  BoxContext ctx(problem);
  return shelf_path(ctx, shelf);
}

PathSamples shelf_path(const BoxContext& ctx, Shelf shelf) {
  const auto& p = ctx.problem();
  const auto& hp = ctx.h_path();
  PathSamples out;
  switch (shelf) {
    case Shelf::Bottom: {
      double ls_g = 0.0;
      Eigen::MatrixXd g = normalized(p.P.matrix(), p.rescale, ls_g);
      OmegaPairValue v = psi_rho(g, hp.frames.front().matrix(), ctx.a_tilde());
      out.ts = ctx.lambda_grid();
      out.values.assign(out.ts.size(), v);
      out.log_scale.assign(out.ts.size(), ls_g + hp.log_scale.front());
      break;
    }
    case Shelf::Top: {
      double ls_h = 0.0;
      Eigen::MatrixXd h = normalized(p.Q.matrix(), p.rescale, ls_h);
      out.ts = ctx.lambda_grid();
      for (double lam : out.ts) {
        double ls_g = 0.0;
        Eigen::MatrixXd g = propagate_to(p.field, p.P.matrix(), 0.0, 1.0, p.x_steps, lam, p.rescale, &ls_g);
        out.values.push_back(psi_rho(g, h, ctx.a_tilde()));
        out.log_scale.push_back(ls_g + ls_h);
      }
      break;
    }
    case Shelf::Right:
    case Shelf::Left: {
      double lam = shelf == Shelf::Right ? p.lambda2 : p.lambda1;
      std::size_t k = 0;
      propagate(p.field, p.P.matrix(), 0.0, 1.0, p.x_steps, lam, p.rescale,
                [&](std::size_t, double x, const Eigen::MatrixXd& g, double ls) {
                  out.ts.push_back(x);
                  out.values.push_back(psi_rho(g, hp.frames[k].matrix(), ctx.a_tilde()));
                  out.log_scale.push_back(ls + hp.log_scale[k]);
                  ++k;
                });
      break;
    }
  }
  return out;
}

namespace {

WindingResult shelf_winding(const PathSamples& path, Shelf shelf, const BoxOptions& opts,
                            const Psi1Refiner& refine) {
  WindingOptions w;
  w.zero_tol = opts.zero_tol;
  w.rho_min = opts.rho_min;
  w.refine_tol = opts.eigen_tol;
  w.shelf = shelf_name(shelf);
  return winding_index(path, w, refine);
}

// Local minima of |psi1| below the threshold that carry no sign change.
std::vector<double> dips(const PathSamples& path, double threshold, double zero_tol) {
  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < path.size(); ++k) {
    double a = std::abs(path.values[k - 1].psi1);
    double b = std::abs(path.values[k].psi1);
    double c = std::abs(path.values[k + 1].psi1);
    if (b < threshold && b > zero_tol && b <= a && b <= c &&
        path.values[k - 1].psi1 * path.values[k + 1].psi1 > 0 &&
        path.values[k].psi1 * path.values[k + 1].psi1 > 0)
      out.push_back(path.ts[k]);
  }
  return out;
}

}  // namespace

MaslovBoxReport compute_box(const SpectralProblem& problem, const BoxOptions& opts) {
  BoxContext ctx(problem);
  MaslovBoxReport r;
  const double l1 = problem.lambda1;

  auto bottom = shelf_winding(shelf_path(ctx, Shelf::Bottom), Shelf::Bottom, opts, nullptr);
  auto right = shelf_winding(shelf_path(ctx, Shelf::Right), Shelf::Right, opts, nullptr);
  PathSamples top_path = shelf_path(ctx, Shelf::Top);
  auto top = shelf_winding(top_path, Shelf::Top, opts,
                           [&](double lam) { return ctx.psi1_top(lam); });
  auto left = shelf_winding(shelf_path(ctx, Shelf::Left), Shelf::Left, opts,
                            [&](double x) { return ctx.evaluate(x, l1).value.psi1; });

  r.ind_bottom = bottom.index;
  r.ind_right = right.index;
  r.ind_top = top.index;
  r.ind_left = left.index;
  r.m_frak = r.ind_bottom + r.ind_right - r.ind_top - r.ind_left;
  r.lower_bound = std::abs(r.ind_left + r.m_frak);
  if (r.ind_bottom != 0) r.anomalies.push_back("bottom shelf index is nonzero");
  if (r.ind_right != 0) r.anomalies.push_back("right shelf index is nonzero");

  for (const auto& c : left.crossings) {
    if (c.kind == CrossingKind::LeftEndpoint) continue;
    r.left_crossings.push_back(c.t);
    if (c.kind == CrossingKind::Interval) {
      char buf[120];
      std::snprintf(buf, sizeof buf, "left shelf vanishes on [%.6g, %.6g]", c.t, c.t_end);
      r.anomalies.push_back(buf);
    }
    if (c.direction != 1) r.monotonicity_violations.push_back({c.t, c.direction});
  }
  for (const auto& c : top.crossings) {
    if (c.kind == CrossingKind::Interior && c.direction == 0)
      r.degenerate_candidates.push_back(c.t);
    else
      r.eigenvalues.push_back(c.t);
  }
  for (double lam : dips(top_path, 1e-7, opts.zero_tol)) r.degenerate_candidates.push_back(lam);
  r.left_records = std::move(left.crossings);
  r.top_records = std::move(top.crossings);
  return r;
}

LeftShelfCount renormalized_count(const SpectralProblem& problem) {
  if (!problem.field.structure_b)
    throw Error(ErrorKind::InvalidInput, "renormalized count needs the lambda-structure assumption");
  BoxContext ctx(problem);
  BoxOptions opts;
  auto left = shelf_winding(shelf_path(ctx, Shelf::Left), Shelf::Left, opts,
                            [&](double x) { return ctx.evaluate(x, problem.lambda1).value.psi1; });
  LeftShelfCount out;
  for (const auto& c : left.crossings) {
    if (c.kind == CrossingKind::LeftEndpoint) continue;
    out.xs.push_back(c.t);
  }
  out.count = static_cast<int>(out.xs.size());
  return out;
}

TopShelfEigenvalues localize_eigenvalues_top(const SpectralProblem& problem, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidInput, "tolerance must be positive");
  BoxContext ctx(problem);
  PathSamples top = shelf_path(ctx, Shelf::Top);
  TopShelfEigenvalues out;
  const double zero_tol = 1e-9;
  const std::size_t n = top.size();
  for (std::size_t k = 0; k < n; ++k) {
    double a = top.values[k].psi1;
    if (std::abs(a) <= zero_tol) {
      if (k == 0 || std::abs(top.values[k - 1].psi1) > zero_tol) out.eigenvalues.push_back(top.ts[k]);
      continue;
    }
    if (k + 1 < n) {
      double b = top.values[k + 1].psi1;
      if (std::abs(b) > zero_tol && (a > 0) != (b > 0)) {
        double lo = top.ts[k], hi = top.ts[k + 1];
        while (hi - lo > tol) {
          double mid = 0.5 * (lo + hi);
          double v = ctx.psi1_top(mid);
          if (v == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((v > 0) == (a > 0)) lo = mid;
          else hi = mid;
        }
        out.eigenvalues.push_back(0.5 * (lo + hi));
      }
    }
  }
  out.degenerate_candidates = dips(top, 1e-7, zero_tol);
  return out;
}

std::vector<AuditEntry> monotonicity_audit(const SpectralProblem& problem) {
  BoxContext ctx(problem);
  const double l1 = problem.lambda1, l2 = problem.lambda2;
  BoxOptions opts;
  auto left = shelf_winding(shelf_path(ctx, Shelf::Left), Shelf::Left, opts,
                            [&](double x) { return ctx.evaluate(x, l1).value.psi1; });
  const double h = 1.0 / problem.x_steps;
  std::vector<AuditEntry> out;
  for (const auto& c : left.crossings) {
    if (c.kind == CrossingKind::LeftEndpoint) continue;
    const double x = c.t;
    double xa = std::max(0.0, x - h), xb = std::min(1.0, x + h);
    double dpsi = (ctx.evaluate(xb, l1).value.psi1 - ctx.evaluate(xa, l1).value.psi1) / (xb - xa);
    PointEvaluation e = ctx.evaluate(x, l1);
    double rate = log_volume_rate(e.g, problem.field(x, l1)) + log_volume_rate(e.h, problem.field(x, l2));
    AuditEntry a;
    a.x = x;
    a.ratio = (dpsi + e.value.psi1 * rate) / e.value.psi2;
    a.ok = a.ratio >= 0.999 && a.ratio <= 1.001;
    out.push_back(a);
  }
  return out;
}

}  // namespace maslov
