#include <doctest.h>

#include <cmath>

#include "maslov/error.hpp"
#include "maslov/problem.hpp"
#include "maslov/propagation.hpp"

using namespace maslov;

TEST_CASE("higher-order companion matches the printed Example 1 matrix") {
  const double x = 0.3, lam = -0.4;
  const double a0 = .2 * std::cos(10 * x) - .5 * std::cos(x / 10), a1 = 2 * std::sin(5 * x);
  Eigen::MatrixXd out;
  companion_higher_order({a0, a1, 10, 60}, {10, 60}, lam, out);
  Eigen::MatrixXd expect(3, 3);
  expect << 0, 1.0 / 10, 0, 0, 0, 10.0 / 60, lam - a0, -a1 / 10, -10.0 / 60;
  CHECK((out - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("higher-order companion with n = 4 and general kappas") {
  Eigen::MatrixXd out;
  // alpha_0..alpha_4, kappa_2..kappa_4
  companion_higher_order({1, 2, 3, 4, 5}, {2, 8, 16}, 0.5, out);
  Eigen::MatrixXd expect(4, 4);
  expect << 0, 1.0 / 2, 0, 0,
            0, 0, 2.0 / 8, 0,
            0, 0, 0, 8.0 / 5,
            0.5 - 1, -2.0 / 2, -3.0 / 8, -4.0 / 5;
  CHECK((out - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("companion builders reject bad input") {
  Eigen::MatrixXd out;
  CHECK_THROWS_AS(companion_higher_order({1, 2, 3, 0}, {10, 60}, 0, out), Error);
  try {
    companion_higher_order({1, 2, 3, -1}, {10, 60}, 0, out);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateCoefficient);
  }
  CHECK_THROWS_AS(companion_higher_order({1, 2, 3, 1}, {10}, 0, out), Error);
  Eigen::VectorXd b(2);
  b << 1, 0;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2, 2);
  try {
    companion_second_order(b, z, z, 0, out);
    FAIL("expected singular B");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularMatrix);
  }
}

TEST_CASE("second-order companion layout") {
  Eigen::VectorXd b(2);
  b << 2, 4;
  Eigen::MatrixXd v(2, 2), w(2, 2), out;
  v << 1, 2, 3, 4;
  w << 5, 6, 7, 8;
  companion_second_order(b, v, w, 1.5, out);
  Eigen::MatrixXd expect(4, 4);
  expect << 0, 0, 0.5, 0,
            0, 0, 0, 0.25,
            1 - 1.5, 2, 5 * 0.5, 6 * 0.25,
            3, 4 - 1.5, 7 * 0.5, 8 * 0.25;
  CHECK((out - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("harmonic frame follows the closed-form solution") {
  SpectralProblem p = load_problem(builtin_catalog("harmonic-dirichlet"));
  const double lam = 30.0, k = std::sqrt(lam);
  FramePath path = integrate_frame(p.field, p.P, 0.0, 1.0, 2000, lam, false);
  REQUIRE(path.xs.size() == 2001);
  for (std::size_t i = 0; i < path.xs.size(); i += 100) {
    double x = path.xs[i];
    CHECK(path.frames[i].matrix()(0, 0) == doctest::Approx(std::sin(k * x) / k).epsilon(1e-9).scale(1.0));
    CHECK(path.frames[i].matrix()(1, 0) == doctest::Approx(std::cos(k * x)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("rescaling only changes column lengths") {
  SpectralProblem p = load_problem(builtin_catalog("example2"));
  FramePath raw = integrate_frame(p.field, p.P, 0.0, 1.0, 500, -3.0, false);
  FramePath scaled = integrate_frame(p.field, p.P, 0.0, 1.0, 500, -3.0, true);
  for (std::size_t i = 0; i < raw.xs.size(); i += 50) {
    const auto& r = raw.frames[i].matrix();
    const auto& s = scaled.frames[i].matrix();
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      CHECK(s.col(j).norm() == doctest::Approx(1.0));
      CHECK((r.col(j).normalized() - s.col(j)).norm() < 1e-9);
    }
    double logs = 0.0;
    for (Eigen::Index j = 0; j < r.cols(); ++j) logs += std::log(r.col(j).norm());
    CHECK(scaled.log_scale[i] == doctest::Approx(logs).epsilon(1e-9));
  }
}

TEST_CASE("backward paths are stored in increasing x") {
  SpectralProblem p = load_problem(builtin_catalog("example1"));
  FramePath h = integrate_frame(p.field, p.Q, 1.0, 0.0, 100, 0.0);
  CHECK(h.xs.front() == doctest::Approx(0.0));
  CHECK(h.xs.back() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < h.xs.size(); ++i) CHECK(h.xs[i] > h.xs[i - 1]);
  CHECK((h.frames.back().matrix() - p.Q.matrix()).norm() < 1e-15);
}

TEST_CASE("blow-up is reported") {
  CoefficientField f;
  f.n = 2;
  f.eval = [](double, double, Eigen::MatrixXd& out) { out << 1e10, 0, 0, 2e10; };
  Eigen::MatrixXd init(2, 1);
  init << 1, 1;
  CHECK_THROWS_AS(propagate_to(f, init, 0, 1, 10, 0, false), BlowUpError);
  CHECK_NOTHROW(propagate_to(f, init, 0, 1, 1000, 0, true));
}
