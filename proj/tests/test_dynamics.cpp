#include "optocorr/dynamics.hpp"

#include "optocorr/gaussian.hpp"
#include "optocorr/model.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

using namespace optocorr;

TEST_CASE("drift matrix: structure, couplings, and eigenvalues") {
  SUBCASE("no coupling leaves pure diagonal decay") {
    const Matrix8d a = drift_matrix(SystemParams(0.0, 1.0, 0.0, 0.4)).entries;
    Matrix8d expected = Matrix8d::Zero();
    for (int i = 0; i < 4; ++i) expected(i, i) = -0.2;   // mirrors: -gamma/2
    for (int i = 4; i < 8; ++i) expected(i, i) = -0.5;   // fields: -kappa/2
    CHECK((a - expected).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("beam-splitter coupling strength") {
    // G = sqrt(C * gamma * kappa) / 2; C=16, gamma=kappa=1 gives G=2
    const Matrix8d a = drift_matrix(SystemParams(16.0, 0.0, 0.0, 1.0)).entries;
    CHECK(a(0, 4) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(a(4, 0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(a(2, 6) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(a(6, 2) == doctest::Approx(-2.0).epsilon(1e-15));
    // no cross-cavity or quadrature-mixing entries
    CHECK(a(0, 6) == 0.0);
    CHECK(a(0, 5) == 0.0);
    CHECK(a(1, 4) == 0.0);
  }

  SUBCASE("matched-damping eigenvalues sit at -1/2 +- i/2") {
    // gamma = kappa = 1 and C = 1: each 2x2 block has eigenvalues
    // -(gamma+kappa)/4 +- sqrt((kappa-gamma)^2/16 - G^2) = -0.5 +- 0.5i
    const Matrix8d a = drift_matrix(SystemParams(1.0, 0.0, 0.0, 1.0)).entries;
    const Eigen::EigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(a)};
    for (int i = 0; i < 8; ++i) {
      CHECK(std::abs(es.eigenvalues()(i).real() + 0.5) < 1e-12);
      CHECK(std::abs(std::abs(es.eigenvalues()(i).imag()) - 0.5) < 1e-12);
    }
    CHECK(spectral_abscissa(a) == doctest::Approx(-0.5).epsilon(1e-12));
  }
}

TEST_CASE("diffusion matrix: thermal, squeezing, and cross terms") {
  SUBCASE("vacuum inputs give bare damping rates") {
    const Matrix8d d =
        diffusion_matrix(SystemParams(3.0, 0.0, 0.0, 0.4)).entries;
    for (int i = 0; i < 4; ++i)
      CHECK(d(i, i) == doctest::Approx(0.2).epsilon(1e-15));
    for (int i = 4; i < 8; ++i)
      CHECK(d(i, i) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d(4, 6) == 0.0);
    CHECK(d(0, 4) == 0.0);
  }

  SUBCASE("thermal occupation scales the mirror entries") {
    const Matrix8d d =
        diffusion_matrix(SystemParams(3.0, 0.0, 2.0, 1.0)).entries;
    for (int i = 0; i < 4; ++i)
      CHECK(d(i, i) == doctest::Approx(2.5).epsilon(1e-15));  // (1/2)(2*2+1)
  }

  SUBCASE("squeezed drive correlates the two field inputs") {
    const Matrix8d d =
        diffusion_matrix(SystemParams(3.0, 1.0, 0.0, 1.0)).entries;
    const double c = std::cosh(2.0) / 2;
    const double s = std::sinh(2.0) / 2;
    for (int i = 4; i < 8; ++i)
      CHECK(d(i, i) == doctest::Approx(c).epsilon(1e-15));
    CHECK(d(4, 6) == doctest::Approx(1.8134302039235094).epsilon(1e-15));
    CHECK(d(5, 7) == doctest::Approx(-s).epsilon(1e-15));
    CHECK(d(4, 6) == doctest::Approx(s).epsilon(1e-15));
    CHECK(d(6, 4) == d(4, 6));
    // mirror block untouched by the drive
    CHECK(d(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d(0, 2) == 0.0);
  }

  SUBCASE("diffusion is positive semidefinite for physical inputs") {
    for (double r : {0.0, 0.7, 1.5, 2.5}) {
      for (double nth : {0.0, 1.0, 25.0}) {
        const Matrix8d d =
            diffusion_matrix(SystemParams(10.0, r, nth, 0.05)).entries;
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{
            Eigen::MatrixXd(d)};
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
      }
    }
  }
}

TEST_CASE("lyapunov solver: exact solution, residual, and guard rails") {
  SUBCASE("pure relaxation to a thermal state") {
    // A = -(g/2) I, D = (g/2)(2n+1) I  =>  V = ((2n+1)/2) I exactly
    const double g = 0.8, n = 3.0;
    Eigen::MatrixXd a = -(g / 2) * Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd d =
        (g / 2) * (2 * n + 1) * Eigen::MatrixXd::Identity(2, 2);
    const LyapunovSolution sol = solve_lyapunov(a, d);
    CHECK((sol.cm.matrix() - 3.5 * Eigen::MatrixXd::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK(sol.residual < 1e-12);
  }

  SUBCASE("dimension mismatch is rejected") {
    Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd d = Eigen::MatrixXd::Identity(4, 4);
    CHECK_THROWS_AS(solve_lyapunov(a, d), std::invalid_argument);
  }

  SUBCASE("an unstable drift is refused, not silently solved") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd d = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(solve_lyapunov(a, d), std::runtime_error);
  }
}

TEST_CASE("steady state: vacuum fixed point and hand-solvable anchor") {
  // vacuum inputs through a beam-splitter coupling stay vacuum, any C
  const LyapunovSolution vac = steady_state_cm(SystemParams(7.0, 0.0, 0.0, 0.3));
  CHECK((vac.cm.matrix() - 0.5 * Eigen::MatrixXd::Identity(8, 8))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // C=1, r=0, nth=1, gamma/kappa=1: the full 8x8 solve must land on
  // mirror variance 1.25, field variance 0.75, and mirror-field
  // cross-correlation -0.25 within each cavity.
  const LyapunovSolution sol = steady_state_cm(SystemParams(1.0, 0.0, 1.0, 1.0));
  const Eigen::MatrixXd &v = sol.cm.matrix();
  for (int i = 0; i < 4; ++i) CHECK(std::abs(v(i, i) - 1.25) < 1e-12);
  for (int i = 4; i < 8; ++i) CHECK(std::abs(v(i, i) - 0.75) < 1e-12);
  CHECK(std::abs(v(0, 4) + 0.25) < 1e-12);
  CHECK(std::abs(v(1, 5) + 0.25) < 1e-12);
  CHECK(std::abs(v(0, 2)) < 1e-12);  // no mirror-mirror correlation here
  CHECK(std::abs(v(0, 6)) < 1e-12);  // no cross-cavity correlation here
  CHECK(std::abs(v(4, 6)) < 1e-12);
  CHECK(sol.residual < 1e-12);
}

TEST_CASE("steady state agrees with the closed-form blocks") {
  const SystemParams p(34.0, 1.5, 3.0, 0.05);
  const BlockComparison c =
      compare_cm(closed_form_blocks(p), steady_state_cm(p), 1e-10);
  CHECK(c.pass);
  CHECK(c.max_abs < 1e-10);
  CHECK(c.dev_v1 < 1e-10);
  CHECK(c.dev_v13 < 1e-10);
  CHECK(c.dev_v2 < 1e-10);
  CHECK(c.dev_v57 < 1e-10);
}

TEST_CASE("compare_cm flags a corrupted block") {
  const SystemParams p(8.0, 1.0, 1.0, 0.2);
  const LyapunovSolution sol = steady_state_cm(p);
  ClosedFormBlocks b = closed_form_blocks(p);
  b.v1 += 0.01;
  const BlockComparison c = compare_cm(b, sol, 1e-10);
  CHECK_FALSE(c.pass);
  CHECK(c.dev_v1 == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("rate-unit invariance: kappa rescales without moving the state") {
  const SystemParams p(20.0, 1.2, 2.0, 0.1);
  const Eigen::MatrixXd base = steady_state_cm(p, 1.0).cm.matrix();
  for (double kappa : {0.3, 2.0, 10.0}) {
    const Eigen::MatrixXd scaled = steady_state_cm(p, kappa).cm.matrix();
    CHECK((base - scaled).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("frequency-domain oracle reproduces the algebraic elements") {
  SUBCASE("decoupled cavity is a plain Lorentzian") {
    // C = 0: mirror variance integrates to nth + 1/2 = 1.2 exactly, and
    // the mirror-mirror cross element vanishes
    const SystemParams p(0.0, 0.0, 0.7, 1.0);
    CHECK(std::abs(spectral_cm_element(p, CmElement::v1) - 1.2) < 1e-8);
    CHECK(std::abs(spectral_cm_element(p, CmElement::v13)) < 1e-8);
  }

  SUBCASE("coupled system matches the closed forms") {
    const SystemParams p(34.0, 1.0, 0.0, 0.05);
    const ClosedFormBlocks b = closed_form_blocks(p);
    CHECK(std::abs(spectral_cm_element(p, CmElement::v1) - b.v1) < 1e-6);
    CHECK(std::abs(spectral_cm_element(p, CmElement::v13) - b.v13) < 1e-6);
    CHECK(std::abs(spectral_cm_element(p, CmElement::v2) - b.v2) < 1e-6);
    CHECK(std::abs(spectral_cm_element(p, CmElement::v57) - b.v57) < 1e-6);
  }
}
