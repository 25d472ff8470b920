#include <doctest.h>

#include <random>

#include "maslov/error.hpp"
#include "maslov/multilinear.hpp"
#include "maslov/problem.hpp"
#include "oracles.hpp"

using namespace maslov;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

BlockLambdaMatrix random_blocks(std::mt19937_64& rng, int n) {
  BlockLambdaMatrix b;
  b.first = random_matrix(rng, n, n);
  b.second = random_matrix(rng, n, n);
  b.first.diagonal().setZero();
  b.second.diagonal().setZero();
  return b;
}

}  // namespace

TEST_CASE("gram volume") {
  Eigen::MatrixXd e(3, 2);
  e << 1, 0, 0, 1, 0, 0;
  CHECK(gram_volume(e) == doctest::Approx(1.0));
  Eigen::MatrixXd s = e * 3.0;
  CHECK(gram_volume(s) == doctest::Approx(9.0));
  Eigen::MatrixXd dup(3, 2);
  dup << 1, 1, 2, 2, 3, 3;
  CHECK_THROWS_AS(gram_volume(dup), Error);
  Eigen::MatrixXd bad = e;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(gram_volume(bad), Error);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd m = random_matrix(rng, 5, 3);
    CHECK(gram_volume(m) == doctest::Approx(oracle::gram_volume(m)).epsilon(1e-10));
    CHECK(column_volume_ratio(m) <= 1.0 + 1e-12);
  }

  // unrescaled frames can carry entries far beyond sqrt(DBL_MAX)
  Eigen::MatrixXd m = random_matrix(rng, 4, 2);
  double ratio = column_volume_ratio(m);
  CHECK(column_volume_ratio(m * 1e200) == doctest::Approx(ratio).epsilon(1e-12));
  Eigen::MatrixXd mixed = m;
  mixed.col(0) *= 1e-200;
  mixed.col(1) *= 1e250;
  CHECK(column_volume_ratio(mixed) == doctest::Approx(ratio).epsilon(1e-12));
}

TEST_CASE("frames reject rank deficiency") {
  Eigen::MatrixXd dup(2, 2);
  dup << 1, 2, 1, 2;
  CHECK_THROWS_AS(Frame{dup}, Error);
  try {
    Frame f{dup};
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficiency);
  }
}

TEST_CASE("reduced forms agree with the full 2n x 2n forms") {
  std::mt19937_64 rng(2);
  for (int n : {2, 3, 4, 5}) {
    for (int m = 1; m < n; ++m) {
      for (int t = 0; t < 10; ++t) {
        Eigen::MatrixXd g = random_matrix(rng, n, m), h = random_matrix(rng, n, n - m);
        BlockLambdaMatrix at = random_blocks(rng, n);
        Eigen::MatrixXd f = oracle::big_frame(g, h);
        double w1 = oracle::omega1_full(f);
        double w2 = oracle::omega2_full(f, oracle::block_diag(at.first, at.second));
        CHECK(omega1_eval(g, h) == doctest::Approx(w1).epsilon(1e-10));
        CHECK(omega2_eval(g, h, at) == doctest::Approx(w2).epsilon(1e-10).scale(1.0));
      }
    }
  }
}

TEST_CASE("transversal and non-transversal pairs") {
  Eigen::MatrixXd g(2, 1), h(2, 1);
  g << 1, 0;
  h << 0, 1;
  CHECK(omega1_eval(g, h) == 1.0);
  h << 2, 0;
  CHECK(omega1_eval(g, h) == 0.0);
  Eigen::MatrixXd wrong(3, 1);
  wrong << 1, 0, 0;
  CHECK_THROWS_AS(omega1_eval(g, wrong), Error);
}

TEST_CASE("psi and rho are invariant under a change of basis") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const int n = 4, m = 2;
    Eigen::MatrixXd g = random_matrix(rng, n, m), h = random_matrix(rng, n, n - m);
    BlockLambdaMatrix at = random_blocks(rng, n);
    OmegaPairValue v = psi_rho(g, h, at);
    Eigen::MatrixXd mg = random_matrix(rng, m, m), mh = random_matrix(rng, n - m, n - m);
    OmegaPairValue w = psi_rho(g * mg, h * mh, at);
    double sign = ((mg.determinant() > 0) == (mh.determinant() > 0)) ? 1.0 : -1.0;
    CHECK(w.psi1 == doctest::Approx(sign * v.psi1).epsilon(1e-9).scale(1.0));
    CHECK(w.psi2 == doctest::Approx(sign * v.psi2).epsilon(1e-9).scale(1.0));
    CHECK(w.rho == doctest::Approx(v.rho).epsilon(1e-9));
  }
}

TEST_CASE("A~ zeroes the diagonal of A(0; lambda)") {
  SpectralProblem p = load_problem(builtin_catalog("example1"));
  BlockLambdaMatrix at = build_A_tilde(p.field, -1.0, 0.0);
  Eigen::MatrixXd a1 = p.field(0.0, -1.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(at.first(i, i) == 0.0);
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(at.first(i, j) == a1(i, j));
  }
  CHECK(at.full().rows() == 6);
  CHECK_THROWS_AS(build_A_tilde(p.field, 0.0, 0.0), Error);
}

TEST_CASE("analytic derivatives match finite differences of the flow") {
  // G(x) = exp(A x) G0 for constant A, so derivatives are exact products.
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const int n = 4, m = 2;
    Eigen::MatrixXd ag = random_matrix(rng, n, n) * 0.5, ah = random_matrix(rng, n, n) * 0.5;
    Eigen::MatrixXd g0 = random_matrix(rng, n, m), h0 = random_matrix(rng, n, n - m);
    BlockLambdaMatrix at = random_blocks(rng, n);
    auto flow = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& f, double s) {
      // exp(a s) f via a truncated series, accurate for the small steps used here
      Eigen::MatrixXd term = f, sum = f;
      for (int k = 1; k < 30; ++k) {
        term = a * term * (s / k);
        sum += term;
      }
      return sum;
    };
    const double e = 1e-5;
    auto w1 = [&](double s) { return omega1_eval(flow(ag, g0, s), flow(ah, h0, s)); };
    auto w2 = [&](double s) { return omega2_eval(flow(ag, g0, s), flow(ah, h0, s), at); };
    auto vol = [&](double s) { return gram_volume(flow(ag, g0, s)); };
    double fd1 = (w1(e) - w1(-e)) / (2 * e);
    double fd2 = (w2(e) - w2(-e)) / (2 * e);
    double fdv = (std::log(vol(e)) - std::log(vol(-e))) / (2 * e);
    CHECK(omega1_derivative(g0, h0, ag, ah) == doctest::Approx(fd1).epsilon(1e-6).scale(1.0));
    CHECK(omega2_derivative(g0, h0, at, ag, ah) == doctest::Approx(fd2).epsilon(1e-6).scale(1.0));
    CHECK(log_volume_rate(g0, ag) == doctest::Approx(fdv).epsilon(1e-6).scale(1.0));
  }
}
