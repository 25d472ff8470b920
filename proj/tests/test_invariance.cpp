#include <doctest.h>

#include <cmath>

#include "maslov/error.hpp"
#include "maslov/invariance.hpp"

using namespace maslov;

namespace {

SpectralProblem zero_field() {
  CoefficientField f;
  f.n = 2;
  f.eval = [](double, double, Eigen::MatrixXd& out) { out.setZero(2, 2); };
  Eigen::MatrixXd P(2, 1), Q(2, 1);
  P << 1, 0;
  Q << 1, 1;
  return general_problem(f, P, Q, 0, 1, 100, 20);
}

ProblemConfig two_by_two(std::vector<std::vector<double>> P, std::vector<std::vector<double>> Q) {
  ProblemConfig c;
  c.kind = ProblemKind::HigherOrder;
  c.n = 2;
  c.alphas = {"1 + x", "0", "3"};
  c.kappas = {3};
  c.P.rows = std::move(P);
  c.Q.rows = std::move(Q);
  c.lambda1 = 0;
  c.lambda2 = 1;
  return c;
}

}  // namespace

TEST_CASE("zero field: constant frames and a trivially positive certificate") {
  SpectralProblem p = zero_field();
  InvarianceReport r = constants_report(p);
  CHECK(r.C_a == 0.0);
  CHECK(r.C_A == 0.0);
  CHECK(r.delta == 0.0);
  CHECK(r.rho0 > 0.0);
  CHECK(r.margin == r.rho0);
  CHECK(r.certified);
  CHECK(r.C == doctest::Approx(2.0));
  RhoScanOptions o;
  o.classify = false;
  RhoScan s = rho_grid_scan(p, o);
  CHECK(s.min_rho == doctest::Approx(r.rho0));
  CHECK(s.rho.maxCoeff() == doctest::Approx(r.rho0));
  CHECK(s.loss_points.empty());
}

TEST_CASE("Example 1 constants") {
  SpectralProblem p = load_problem(builtin_catalog("example1"));
  InvarianceReport r = constants_report(p);
  CHECK(r.c_g_exact);
  CHECK(r.c_g == 1.0);
  CHECK(r.C == doctest::Approx(2 * r.C_d + std::max(2 * r.C_a, 1.0) + 1));
  CHECK(r.certified == (r.margin > 0));
  CHECK(r.delta_method == "hadamard");
  CHECK(r.delta == doctest::Approx((1.0 / r.c_h) * (10.0 / 60 + 1.0 / 10)).epsilon(1e-12));
  CHECK(std::abs(r.delta - 0.2673) <= 0.002);
  CHECK(r.bounds_hold);
  CHECK(r.C_g_measured <= r.C_g_bound);
  // certificate soundness
  RhoScanOptions o;
  o.classify = false;
  CHECK(rho_grid_scan(p, o).min_rho > 0.0);
}

TEST_CASE("Hadamard delta vanishes in the large-kappa regime") {
  ProblemConfig c = builtin_catalog("example1");
  double prev = 1e300;
  for (double s : {1.0, 10.0, 100.0, 1000.0}) {
    c.alphas[2] = std::to_string(10 * s);
    c.alphas[3] = std::to_string(60 * s * s);
    c.kappas = {10 * s, 60 * s * s};
    SpectralProblem p = load_problem(c);
    double d = delta_bound_higher_order(p, 1.0, 1.0);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-3);
  SpectralProblem second = load_problem(builtin_catalog("example2"));
  CHECK_THROWS_AS(delta_bound_higher_order(second, 1, 1), Error);
}

TEST_CASE("boundary condition determinants") {
  // P = (0 1)^T, Q = (1 phi)^T: first determinant is nonzero
  auto ok = bc_conditions_check(load_problem(two_by_two({{0}, {1}}, {{1}, {0.3}})));
  CHECK(ok.satisfied);
  CHECK(std::abs(ok.det_first) > 0.5);
  // both Dirichlet: both determinants vanish
  auto dd = bc_conditions_check(load_problem(two_by_two({{0}, {1}}, {{0}, {1}})));
  CHECK(dd.det_first == 0.0);
  CHECK(dd.det_second == 0.0);
  CHECK_FALSE(dd.satisfied);
}

TEST_CASE("measured volume bounds for m > 1") {
  SpectralProblem p = load_problem(builtin_catalog("example2"));
  p.lambda_steps = 60;
  p.x_steps = 400;
  InvarianceReport r = constants_report(p);
  CHECK_FALSE(r.c_g_exact);
  CHECK(r.c_g > 0.0);
  CHECK(r.c_g <= 1.0);
  CHECK(r.delta_method == "grid");
  CHECK(r.bounds_hold);
  CHECK(r.C_g <= r.C_g_bound);
}

TEST_CASE("Example 3 loss point near lambda = -0.13 has local contribution -2") {
  SpectralProblem p = load_problem(builtin_catalog("example3"));
  LossPoint lp;
  lp.x_star = 0.86890557578787064;
  lp.lambda_star = -0.12880463990629087;
  BoxContext ctx(p);
  CHECK(ctx.evaluate(lp.x_star, lp.lambda_star).value.rho < 1e-9);
  LossPoint c = classify_loss_point(p, lp);
  CHECK(c.classified);
  CHECK(c.i_minus == 1);
  CHECK(c.i_plus == 0);
  CHECK(c.local_m == -2);
  CHECK(c.consistent);
  REQUIRE(c.boundary_index_valid);
  CHECK(c.boundary_index == c.local_m);
  LossPoint other = lp;
  other.x_star += 1e-4;
  CHECK_THROWS_AS(classify_loss_point(p, lp, {lp, other}), Error);
}
