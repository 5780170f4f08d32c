#include "optocorr/dynamics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace optocorr {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kQuadratureTol = 1e-8;

// Index of entry (i, j), i <= j, in the packed upper triangle (row-major).
int packed_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

std::pair<int, int> element_position(CmElement e) {
  switch (e) {
    case CmElement::v1:
      return {0, 0};
    case CmElement::v13:
      return {0, 2};
    case CmElement::v2:
      return {4, 4};
    case CmElement::v57:
      return {4, 6};
    case CmElement::v15:
      return {0, 4};
    case CmElement::v17:
      return {0, 6};
  }
  throw std::invalid_argument("spectral_cm_element: unknown element");
}

}  // namespace

DriftMatrix drift_matrix(const SystemParams& p, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("drift_matrix: kappa must be positive");
  }
  const double gamma = p.damping_ratio * kappa;
  const double g = 0.5 * std::sqrt(p.coop * gamma * kappa);
  Matrix8d a = Matrix8d::Zero();
  for (int cavity = 0; cavity < 2; ++cavity) {
    const int m = 2 * cavity;      // mirror quadrature offset
    const int o = 4 + 2 * cavity;  // field quadrature offset
    for (int q = 0; q < 2; ++q) {
      a(m + q, m + q) = -0.5 * gamma;
      a(o + q, o + q) = -0.5 * kappa;
      a(m + q, o + q) = g;
      a(o + q, m + q) = -g;
    }
  }
  return {a};
}

DiffusionMatrix diffusion_matrix(const SystemParams& p, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("diffusion_matrix: kappa must be positive");
  }
  const double gamma = p.damping_ratio * kappa;
  const double mirror = 0.5 * gamma * (1.0 + 2.0 * p.nth);
  const double field = 0.5 * kappa * std::cosh(2.0 * p.squeeze);
  const double cross = 0.5 * kappa * std::sinh(2.0 * p.squeeze);
  Matrix8d d = Matrix8d::Zero();
  d(0, 0) = d(1, 1) = d(2, 2) = d(3, 3) = mirror;
  d(4, 4) = d(5, 5) = d(6, 6) = d(7, 7) = field;
  d(4, 6) = d(6, 4) = cross;
  d(5, 7) = d(7, 5) = -cross;
  return {d};
}

LyapunovSolution solve_lyapunov(const Eigen::MatrixXd& drift,
                                const Eigen::MatrixXd& diffusion) {
  const int n = static_cast<int>(drift.rows());
  if (drift.cols() != n || diffusion.rows() != n || diffusion.cols() != n) {
    throw std::invalid_argument("solve_lyapunov: dimension mismatch");
  }
  if (!drift.allFinite() || !diffusion.allFinite()) {
    throw std::invalid_argument("solve_lyapunov: non-finite input");
  }
  if ((diffusion - diffusion.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("solve_lyapunov: diffusion not symmetric");
  }
  const double abscissa = spectral_abscissa(drift);
  if (!(abscissa < 0.0)) {
    std::ostringstream os;
    os << "solve_lyapunov: drift is not stable (spectral abscissa "
       << abscissa << "); the steady-state system is singular";
    throw std::runtime_error(os.str());
  }

  // Unknowns: packed upper triangle of V. Equation (i, j):
  //   sum_k A_ik V_kj + sum_k A_jk V_ik = -D_ij.
  const int m = n * (n + 1) / 2;
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const int row = packed_index(n, i, j);
      rhs(row) = -diffusion(i, j);
      for (int k = 0; k < n; ++k) {
        sys(row, packed_index(n, k, j)) += drift(i, k);
        sys(row, packed_index(n, i, k)) += drift(j, k);
      }
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
  Eigen::VectorXd x = lu.solve(rhs);
  x += lu.solve(rhs - sys * x);  // one refinement pass

  Eigen::MatrixXd v(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      v(i, j) = v(j, i) = x(packed_index(n, i, j));
    }
  }
  const double residual =
      (drift * v + v * drift.transpose() + diffusion).cwiseAbs().maxCoeff();
  if (!(residual < kResidualTol)) {
    std::ostringstream os;
    os << "solve_lyapunov: residual " << residual << " exceeds "
       << kResidualTol;
    throw std::runtime_error(os.str());
  }
  return {GeneralCM(std::move(v)), residual};
}

LyapunovSolution steady_state_cm(const SystemParams& p, double kappa) {
  return solve_lyapunov(drift_matrix(p, kappa).entries,
                        diffusion_matrix(p, kappa).entries);
}

double spectral_cm_element(const SystemParams& p, CmElement element) {
  using Complex = std::complex<double>;
  using Matrix8cd = Eigen::Matrix<Complex, 8, 8>;

  const Matrix8d a = drift_matrix(p).entries;
  const Matrix8d d = diffusion_matrix(p).entries;
  const auto [ei, ej] = element_position(element);

  // (chi D chi^dagger)_ij needs only rows i and j of chi = (A + i w)^-1,
  // i.e. two solves against (A + i w)^T.
  const auto integrand = [&](double w) -> double {
    Matrix8cd shifted = a.transpose().cast<Complex>();
    for (int q = 0; q < 8; ++q) shifted(q, q) += Complex(0.0, w);
    const Eigen::PartialPivLU<Matrix8cd> lu(shifted);
    Eigen::Matrix<Complex, 8, 2> rhs = Eigen::Matrix<Complex, 8, 2>::Zero();
    rhs(ei, 0) = 1.0;
    rhs(ej, 1) = 1.0;
    const Eigen::Matrix<Complex, 8, 2> rows = lu.solve(rhs);
    const Complex value =
        rows.col(0).transpose() * d.cast<Complex>() * rows.col(1).conjugate();
    return value.real();
  };

  double error = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          integrand, -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), 15, 1e-10, &error);
  if (!(error < kQuadratureTol)) {
    std::ostringstream os;
    os << "spectral_cm_element: quadrature error estimate " << error
       << " exceeds " << kQuadratureTol;
    throw std::runtime_error(os.str());
  }
  return integral / (2.0 * M_PI);
}

BlockComparison compare_cm(const ClosedFormBlocks& closed,
                           const LyapunovSolution& solved, double tol) {
  const Eigen::MatrixXd& v = solved.cm.matrix();
  if (v.rows() != 8) {
    throw std::invalid_argument("compare_cm: expected an 8x8 steady state");
  }

  const auto pattern = [](double diag, double cross) {
    Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
    b(0, 0) = b(1, 1) = b(2, 2) = b(3, 3) = diag;
    b(0, 2) = b(2, 0) = cross;
    b(1, 3) = b(3, 1) = -cross;
    return b;
  };

  BlockComparison r{};
  const Eigen::Matrix4d mech = v.block<4, 4>(0, 0);
  const Eigen::Matrix4d opt = v.block<4, 4>(4, 4);

  r.dev_v1 = 0.0;
  r.dev_v2 = 0.0;
  for (int q = 0; q < 4; ++q) {
    r.dev_v1 = std::max(r.dev_v1, std::abs(mech(q, q) - closed.v1));
    r.dev_v2 = std::max(r.dev_v2, std::abs(opt(q, q) - closed.v2));
  }
  r.dev_v13 = std::max(
      std::max(std::abs(mech(0, 2) - closed.v13),
               std::abs(mech(2, 0) - closed.v13)),
      std::max(std::abs(mech(1, 3) + closed.v13),
               std::abs(mech(3, 1) + closed.v13)));
  r.dev_v57 = std::max(
      std::max(std::abs(opt(0, 2) - closed.v57),
               std::abs(opt(2, 0) - closed.v57)),
      std::max(std::abs(opt(1, 3) + closed.v57),
               std::abs(opt(3, 1) + closed.v57)));

  const double mech_dev =
      (mech - pattern(closed.v1, closed.v13)).cwiseAbs().maxCoeff();
  const double opt_dev =
      (opt - pattern(closed.v2, closed.v57)).cwiseAbs().maxCoeff();
  r.max_abs = std::max(mech_dev, opt_dev);
  r.pass = r.max_abs < tol;
  return r;
}

double spectral_abscissa(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("spectral_abscissa: need a square matrix");
  }
  const Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("spectral_abscissa: eigensolve failed");
  }
  return es.eigenvalues().real().maxCoeff();
}

}  // namespace optocorr
