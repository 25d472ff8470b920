#include "maslov/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "maslov/error.hpp"
#include "maslov/propagation.hpp"

namespace maslov {

namespace {

double spectral_norm(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

int steps_for(double len, int x_steps) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(len) * x_steps - 1e-9)));
}

// Frames at each of the (increasing) xs, integrating from `start` towards them.
std::vector<Eigen::MatrixXd> frames_along(const SpectralProblem& p, const Eigen::MatrixXd& init,
                                          double start, const std::vector<double>& xs,
                                          double lambda) {
  std::vector<Eigen::MatrixXd> out(xs.size());
  const bool forward = start <= xs.front();
  Eigen::MatrixXd f = init;
  for (Eigen::Index j = 0; j < f.cols(); ++j) f.col(j).normalize();
  double cur = start;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::size_t idx = forward ? i : xs.size() - 1 - i;
    double target = xs[idx];
    if (target != cur) {
      f = propagate_to(p.field, f, cur, target, steps_for(target - cur, p.x_steps), lambda, true);
      cur = target;
    }
    out[idx] = f;
  }
  return out;
}

}  // namespace

std::vector<OmegaPairValue> psi_along_x(const BoxContext& ctx, double lambda,
                                        const std::vector<double>& xs) {
  const auto& p = ctx.problem();
  auto gs = frames_along(p, p.P.matrix(), 0.0, xs, lambda);
  auto hs = frames_along(p, p.Q.matrix(), 1.0, xs, p.lambda2);
  std::vector<OmegaPairValue> out;
  out.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(psi_rho(gs[i], hs[i], ctx.a_tilde()));
  return out;
}

double delta_bound_higher_order(const SpectralProblem& p, double c_g, double c_h) {
  if (!p.alphas) throw Error(ErrorKind::InvalidInput, "delta bound needs a higher-order companion problem");
  if (!(c_g > 0) || !(c_h > 0)) throw Error(ErrorKind::InvalidInput, "volume ratios must be positive");
  const auto& al = *p.alphas;
  const int n = static_cast<int>(al.size()) - 1;
  const double k2 = p.kappas[0];
  const double kn1 = n >= 3 ? p.kappas[n - 3] : 1.0;
  double worst = 0.0;
  for (int i = 0; i <= p.x_steps; ++i) {
    double x = static_cast<double>(i) / p.x_steps;
    worst = std::max(worst, std::abs(kn1 / al[n].eval(x)) + std::abs(1.0 / k2));
  }
  return (p.lambda2 - p.lambda1) / (c_g * c_h) * worst;
}

BoundaryConditionCheck bc_conditions_check(const SpectralProblem& p) {
  if (!p.alphas) throw Error(ErrorKind::InvalidInput, "boundary condition check needs a higher-order problem");
  const int n = p.n();
  const int m = p.m();
  // integral of lambda2 - alpha_0 over [0,1], composite Simpson
  const int N = 2 * ((p.x_steps + 1) / 2);
  double s = 0.0;
  for (int i = 0; i <= N; ++i) {
    double x = static_cast<double>(i) / N;
    double w = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * (p.lambda2 - (*p.alphas)[0].eval(x));
  }
  const double integral = s / (3.0 * N);
  Eigen::MatrixXd a(n, n);
  a << p.P.matrix(), p.Q.matrix();
  Eigen::MatrixXd b = a;
  a.block(n - 1, m, 1, n - m) -= integral * p.Q.matrix().row(0);
  b.block(n - 1, 0, 1, m).setZero();
  b.block(n - 1, m, 1, n - m) = p.Q.matrix().row(0);
  BoundaryConditionCheck c;
  c.det_first = a.partialPivLu().determinant();
  c.det_second = b.partialPivLu().determinant();
  c.satisfied = std::abs(c.det_first) > 1e-12 || std::abs(c.det_second) > 1e-12;
  return c;
}

InvarianceReport constants_report(const SpectralProblem& p, const InvarianceOptions& opts) {
  BoxContext ctx(p);
  InvarianceReport r;
  const int n = p.n();
  const int m = p.m();
  const auto lambdas = ctx.lambda_grid();
  const auto& hp = ctx.h_path();

  std::vector<double> lam_for_a = p.field.affine_in_lambda
                                      ? std::vector<double>{p.lambda1, p.lambda2}
                                      : lambdas;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i <= p.x_steps; ++i) {
    double x = hp.xs[i];
    for (double lam : lam_for_a) {
      p.field.eval(x, lam, a);
      r.C_A = std::max(r.C_A, spectral_norm(a));
      r.C_a = std::max(r.C_a, std::abs(a.trace()));
    }
  }

  r.c_h = 1.0;
  for (std::size_t k = 0; k < hp.frames.size(); ++k) {
    const auto& h = hp.frames[k].matrix();
    r.c_h = std::min(r.c_h, column_volume_ratio(h));
    p.field.eval(hp.xs[k], p.lambda2, a);
    r.C_h = std::max(r.C_h, std::abs(log_volume_rate(h, a)));
  }

  const bool hadamard = p.alphas.has_value();
  const bool need_grid = m > 1 || !hadamard;
  double c_g = 1.0, rate_g = 0.0, delta_grid = 0.0;
  bool volumes_ok = true;
  std::vector<double> sweep;
  if (need_grid) {
    int lines = opts.lambda_lines > 0 ? opts.lambda_lines : p.lambda_steps;
    for (int j = 0; j <= lines; ++j) sweep.push_back(p.lambda1 + j * (p.lambda2 - p.lambda1) / lines);
    sweep.back() = p.lambda2;
  } else {
    sweep.push_back(p.lambda1);
  }
  Eigen::MatrixXd a2(n, n);
  for (double lam : sweep) {
    std::size_t k = 0;
    propagate(p.field, p.P.matrix(), 0.0, 1.0, p.x_steps, lam, true,
              [&](std::size_t, double x, const Eigen::MatrixXd& g, double) {
                const auto& h = hp.frames[k].matrix();
                double ratio = column_volume_ratio(g);
                c_g = std::min(c_g, ratio);
                p.field.eval(x, lam, a);
                rate_g = std::max(rate_g, std::abs(log_volume_rate(g, a)));
                if (need_grid) {
                  p.field.eval(x, p.lambda2, a2);
                  OmegaPairValue v = psi_rho(g, h, ctx.a_tilde());
                  double dw2 = omega2_derivative(g, h, ctx.a_tilde(), a, a2);
                  delta_grid = std::max(delta_grid, std::abs(dw2 / v.d));
                  double hr = column_volume_ratio(h);
                  if (v.d < (1.0 - 1e-9) * ratio * hr) volumes_ok = false;
                }
                ++k;
              });
  }

  r.C_g_measured = rate_g;
  if (m == 1) {
    r.c_g_exact = true;
    r.c_g = 1.0;
    r.C_g_bound = r.C_A;
    r.C_g = r.C_A;
  } else {
    r.c_g = c_g;
    r.C_g_bound = factorial(m) * r.C_A / (c_g * c_g);
    r.C_g = rate_g;
  }
  r.bounds_hold = volumes_ok && rate_g <= r.C_g_bound * (1.0 + 1e-9) + 1e-12;
  r.C_d = r.C_g + r.C_h;
  r.C = 2.0 * r.C_d + std::max(2.0 * r.C_a, 1.0) + 1.0;
  if (hadamard) {
    r.delta = delta_bound_higher_order(p, r.c_g, r.c_h);
    r.delta_method = "hadamard";
  } else {
    r.delta = delta_grid;
    r.delta_method = "grid";
  }
  r.rho0 = psi_rho(p.P.matrix(), hp.frames.front().matrix(), ctx.a_tilde()).rho;
  r.margin = r.rho0 - r.delta * r.delta / (2.0 * r.C) * std::expm1(r.C);
  r.certified = r.margin > 0.0;
  return r;
}

namespace {

struct Candidate {
  double x, lambda, rho;
};

// One round: (2*10+1)^2 local grid at ten times the spacing.
Candidate refine_round(const BoxContext& ctx, Candidate c, double hx, double hl) {
  const auto& p = ctx.problem();
  const int k = 10;
  std::vector<double> xs;
  for (int i = -k; i <= k; ++i) {
    double x = c.x + i * hx / k;
    if (x >= 0.0 && x <= 1.0) xs.push_back(x);
  }
  Candidate best = c;
  for (int j = -k; j <= k; ++j) {
    double lam = c.lambda + j * hl / k;
    if (lam < p.lambda1 || lam > p.lambda2) continue;
    auto vals = psi_along_x(ctx, lam, xs);
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (vals[i].rho < best.rho) best = {xs[i], lam, vals[i].rho};
  }
  return best;
}

// Newton on (psi1, psi2) = 0 with a finite-difference Jacobian.
Candidate newton_polish(const BoxContext& ctx, Candidate c) {
  const auto& p = ctx.problem();
  auto f = [&](double x, double lam) {
    auto v = ctx.evaluate(x, lam).value;
    return Eigen::Vector2d(v.psi1, v.psi2);
  };
  double x = c.x, lam = c.lambda;
  Eigen::Vector2d F = f(x, lam);
  for (int it = 0; it < 30; ++it) {
    const double ex = 1e-7, el = 1e-7 * std::max(1.0, std::abs(lam));
    Eigen::Matrix2d J;
    J.col(0) = (f(x + ex, lam) - f(x - ex, lam)) / (2 * ex);
    J.col(1) = (f(x, lam + el) - f(x, lam - el)) / (2 * el);
    if (std::abs(J.determinant()) < 1e-300) break;
    Eigen::Vector2d step = J.partialPivLu().solve(F);
    double nx = std::clamp(x - step(0), 0.0, 1.0);
    double nl = std::clamp(lam - step(1), p.lambda1, p.lambda2);
    Eigen::Vector2d nF = f(nx, nl);
    if (nF.squaredNorm() >= F.squaredNorm()) break;
    x = nx;
    lam = nl;
    F = nF;
    if (std::abs(step(0)) < 1e-14 && std::abs(step(1)) < 1e-14) break;
  }
  return {x, lam, 0.5 * F.squaredNorm()};
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  out.back() = b;
  return out;
}

std::vector<double> sign_changes(const std::vector<double>& ts, const std::vector<OmegaPairValue>& v) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    double a = v[i].psi1, b = v[i + 1].psi1;
    if (a == 0.0) out.push_back(ts[i]);
    else if ((a > 0) != (b > 0) && b != 0.0) out.push_back(ts[i] + a / (a - b) * (ts[i + 1] - ts[i]));
  }
  if (!v.empty() && v.back().psi1 == 0.0) out.push_back(ts.back());
  return out;
}

PathSamples samples(std::vector<double> ts, std::vector<OmegaPairValue> v) {
  PathSamples s;
  s.ts = std::move(ts);
  s.values = std::move(v);
  return s;
}

std::vector<OmegaPairValue> psi_along_lambda(const BoxContext& ctx, double x,
                                             const std::vector<double>& lams) {
  const auto& p = ctx.problem();
  std::vector<double> xs{x};
  auto hs = frames_along(p, p.Q.matrix(), 1.0, xs, p.lambda2);
  std::vector<OmegaPairValue> out;
  for (double lam : lams) {
    auto gs = frames_along(p, p.P.matrix(), 0.0, xs, lam);
    out.push_back(psi_rho(gs[0], hs[0], ctx.a_tilde()));
  }
  return out;
}

}  // namespace

int rectangle_index(const BoxContext& ctx, double x_lo, double x_hi, double l_lo, double l_hi,
                    int samples_per_side) {
  auto ls = linspace(l_lo, l_hi, samples_per_side + 1);
  auto xs = linspace(x_lo, x_hi, samples_per_side + 1);
  WindingOptions w;
  w.shelf = "sub-box bottom";
  int bottom = winding_index(samples(ls, psi_along_lambda(ctx, x_lo, ls)), w).index;
  w.shelf = "sub-box top";
  int top = winding_index(samples(ls, psi_along_lambda(ctx, x_hi, ls)), w).index;
  w.shelf = "sub-box right";
  int right = winding_index(samples(xs, psi_along_x(ctx, l_hi, xs)), w).index;
  w.shelf = "sub-box left";
  int left = winding_index(samples(xs, psi_along_x(ctx, l_lo, xs)), w).index;
  return bottom + right - top - left;
}

LossPoint classify_loss_point(const SpectralProblem& p, const LossPoint& point,
                              const std::vector<LossPoint>& others) {
  BoxContext ctx(p);
  LossPoint out = point;
  const double dl = (p.lambda2 - p.lambda1) / p.lambda_steps;
  const double dx = 1.0 / p.x_steps;
  const double w = 2.0 * dl;
  double h = 2.0 * dx;
  const double xs_ = point.x_star, ls_ = point.lambda_star;
  for (int attempt = 0; attempt < 5; ++attempt, h *= 2.0) {
    const double x_lo = std::max(0.0, xs_ - h), x_hi = std::min(1.0, xs_ + h);
    const double l_lo = std::max(p.lambda1, ls_ - w), l_hi = std::min(p.lambda2, ls_ + w);
    for (const auto& o : others) {
      if (o.x_star == point.x_star && o.lambda_star == point.lambda_star) continue;
      if (o.x_star >= x_lo && o.x_star <= x_hi && o.lambda_star >= l_lo && o.lambda_star <= l_hi)
        throw Error(ErrorKind::NeedsRefinement, "another loss point lies inside the classification box");
    }
    auto lams = linspace(l_lo, l_hi, 41);
    if (!sign_changes(lams, psi_along_lambda(ctx, x_lo, lams)).empty() ||
        !sign_changes(lams, psi_along_lambda(ctx, x_hi, lams)).empty())
      continue;
    auto xs = linspace(x_lo, x_hi, 401);
    auto left = sign_changes(xs, psi_along_x(ctx, l_lo, xs));
    auto right = sign_changes(xs, psi_along_x(ctx, l_hi, xs));
    int left_below = 0, left_above = 0, right_below = 0, right_above = 0;
    for (double x : left) (x < xs_ ? left_below : left_above)++;
    for (double x : right) (x < xs_ ? right_below : right_above)++;
    out.i_minus = left_below;
    out.i_plus = right_above;
    out.local_m = 2 * (out.i_plus - out.i_minus);
    out.consistent = left_below + right_below == left_above + right_above;
    out.classified = true;
    out.half_width = w;
    out.half_height = h;
    try {
      out.boundary_index = rectangle_index(ctx, x_lo, x_hi, l_lo, l_hi);
      out.boundary_index_valid = true;
    } catch (const InvarianceError&) {
      out.boundary_index_valid = false;
    }
    return out;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "could not isolate branch exits through vertical sides around (%.6g, %.6g)",
                point.x_star, point.lambda_star);
  throw Error(ErrorKind::NeedsRefinement, buf);
}

RhoScan rho_grid_scan(const SpectralProblem& p, const RhoScanOptions& opts) {
  BoxContext ctx(p);
  RhoScan s;
  const auto& hp = ctx.h_path();
  s.lambdas = ctx.lambda_grid();
  s.xs = hp.xs;
  const int nx = p.x_steps + 1;
  const int nl = static_cast<int>(s.lambdas.size());
  s.rho.resize(nx, nl);
  s.psi1.resize(nx, nl);
  for (int j = 0; j < nl; ++j) {
    std::size_t k = 0;
    propagate(p.field, p.P.matrix(), 0.0, 1.0, p.x_steps, s.lambdas[j], p.rescale,
              [&](std::size_t, double, const Eigen::MatrixXd& g, double) {
                OmegaPairValue v = psi_rho(g, hp.frames[k].matrix(), ctx.a_tilde());
                s.rho(k, j) = v.rho;
                s.psi1(k, j) = v.psi1;
                ++k;
              });
  }
  s.min_rho = s.rho(0, 0);
  s.argmin_x = s.xs[0];
  s.argmin_lambda = s.lambdas[0];
  for (int j = 0; j < nl; ++j)
    for (int i = 0; i < nx; ++i)
      if (s.rho(i, j) < s.min_rho) {
        s.min_rho = s.rho(i, j);
        s.argmin_x = s.xs[i];
        s.argmin_lambda = s.lambdas[j];
      }

  std::vector<Candidate> cands;
  for (int j = 0; j < nl; ++j)
    for (int i = 0; i < nx; ++i) {
      double r = s.rho(i, j);
      if (!(r < opts.candidate_rho)) continue;
      bool is_min = true;
      for (int dj = -1; dj <= 1 && is_min; ++dj)
        for (int di = -1; di <= 1; ++di) {
          int ii = i + di, jj = j + dj;
          if ((di || dj) && ii >= 0 && ii < nx && jj >= 0 && jj < nl && s.rho(ii, jj) < r) {
            is_min = false;
            break;
          }
        }
      if (is_min) cands.push_back({s.xs[i], s.lambdas[j], r});
    }

  const double dx = 1.0 / p.x_steps;
  const double dl = (p.lambda2 - p.lambda1) / p.lambda_steps;
  for (Candidate c : cands) {
    double hx = dx, hl = dl;
    for (int round = 0; round < opts.refine_rounds; ++round) {
      c = refine_round(ctx, c, hx, hl);
      hx /= 10;
      hl /= 10;
    }
    c = newton_polish(ctx, c);
    if (!(c.rho < opts.zero_rho)) continue;
    bool dup = false;
    for (const auto& lp : s.loss_points)
      if (std::abs(lp.x_star - c.x) < 1e-6 && std::abs(lp.lambda_star - c.lambda) < 1e-6) dup = true;
    if (dup) continue;
    LossPoint lp;
    lp.x_star = c.x;
    lp.lambda_star = c.lambda;
    lp.rho = c.rho;
    s.loss_points.push_back(lp);
  }
  std::sort(s.loss_points.begin(), s.loss_points.end(), [](const LossPoint& a, const LossPoint& b) {
    return a.lambda_star != b.lambda_star ? a.lambda_star < b.lambda_star : a.x_star < b.x_star;
  });
  if (opts.classify)
    for (auto& lp : s.loss_points) lp = classify_loss_point(p, lp, s.loss_points);
  return s;
}

}  // namespace maslov
