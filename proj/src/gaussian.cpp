#include "optocorr/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace optocorr {

namespace {

// Tolerance below the exact entropy-function domain boundary that is still
// treated as the boundary itself.
constexpr double kEntropyClamp = 1e-12;

// Max accepted asymmetry |V - V^T| for a GeneralCM.
constexpr double kSymmetryTol = 1e-12;

[[noreturn]] void fail_domain(const std::string& msg) {
  throw std::domain_error(msg);
}

}  // namespace

double f_entropy(double x) {
  if (!(x >= kVacuumVariance - kEntropyClamp)) {  // also rejects NaN
    std::ostringstream os;
    os << "f_entropy: argument " << x << " below 1/2";
    fail_domain(os.str());
  }
  if (x <= kVacuumVariance) return 0.0;
  const double p = x + 0.5;
  const double q = x - 0.5;
  return p * std::log(p) - q * std::log(q);
}

SymmetricTwoModeCM::SymmetricTwoModeCM(double s, double k) : s_(s), k_(k) {
  if (!std::isfinite(s) || !std::isfinite(k)) {
    fail_domain("SymmetricTwoModeCM: non-finite entries");
  }
  if (s <= 0.0) fail_domain("SymmetricTwoModeCM: s must be positive");
  const double disc = s * s - k * k;
  if (disc < 0.25 - kPhysicalityTol) {
    std::ostringstream os;
    os << "SymmetricTwoModeCM: unphysical state, s^2 - k^2 = " << disc
       << " < 1/4 (s = " << s << ", k = " << k << ")";
    fail_domain(os.str());
  }
}

SymplecticSpectrum symplectic_eigs_symmetric(const SymmetricTwoModeCM& cm) {
  const double s = cm.s();
  const double k = cm.k();
  if (k == 0.0) return {s, s};  // uncoupled thermal pair, keep exact
  // Delta = 2(s^2 - k^2) and det V = (s^2 - k^2)^2, so the spectrum is
  // doubly degenerate at sqrt(s^2 - k^2). The constructor guarantees the
  // discriminant is >= 1/4 up to kPhysicalityTol; snap boundary noise back
  // onto the boundary so downstream entropies stay in-domain.
  const double disc = std::max(s * s - k * k, 0.25);
  const double eta = std::sqrt(disc);
  return {eta, eta};
}

double pt_min_symplectic_eig(const SymmetricTwoModeCM& cm) {
  return cm.s() - std::abs(cm.k());
}

GeneralCM::GeneralCM(Eigen::MatrixXd entries) : mat_(std::move(entries)) {
  if (mat_.rows() == 0 || mat_.rows() != mat_.cols() || mat_.rows() % 2 != 0) {
    throw std::invalid_argument("GeneralCM: need a square 2n x 2n matrix");
  }
  if (!mat_.allFinite()) {
    throw std::invalid_argument("GeneralCM: non-finite entries");
  }
  const double asym = (mat_ - mat_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol) {
    std::ostringstream os;
    os << "GeneralCM: asymmetry " << asym << " exceeds " << kSymmetryTol;
    throw std::invalid_argument(os.str());
  }
  mat_ = ((mat_ + mat_.transpose()) / 2.0).eval();  // exact symmetry
  Eigen::LLT<Eigen::MatrixXd> llt(mat_);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("GeneralCM: matrix is not positive definite");
  }
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  if (n_modes <= 0) throw std::invalid_argument("symplectic_form: n_modes <= 0");
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int m = 0; m < n_modes; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

std::vector<double> symplectic_eigs_numeric(const GeneralCM& cm) {
  const int n = cm.modes();
  const Eigen::MatrixXd m = symplectic_form(n) * cm.matrix();
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("symplectic_eigs_numeric: eigensolve failed");
  }
  const double scale = std::max(m.norm(), 1.0);
  const Eigen::MatrixXcd mc = m.cast<std::complex<double>>();
  std::vector<double> mags(2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    const std::complex<double> lambda = es.eigenvalues()(i);
    const Eigen::VectorXcd v = es.eigenvectors().col(i);
    const double resid = (mc * v - lambda * v).norm();
    if (resid > 1e-10 * scale) {
      std::ostringstream os;
      os << "symplectic_eigs_numeric: eigensolve residual " << resid
         << " exceeds 1e-10 * " << scale;
      throw std::runtime_error(os.str());
    }
    mags[static_cast<std::size_t>(i)] = std::abs(lambda);
  }
  // Eigenvalues of Omega*V come in +/- i*eta pairs; after taking moduli the
  // sorted list must pair up exactly.
  std::sort(mags.begin(), mags.end());
  std::vector<double> eigs(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double a = mags[static_cast<std::size_t>(2 * j)];
    const double b = mags[static_cast<std::size_t>(2 * j + 1)];
    if (std::abs(a - b) > 1e-8 * std::max(1.0, b)) {
      std::ostringstream os;
      os << "symplectic_eigs_numeric: moduli " << a << " and " << b
         << " do not pair up";
      throw std::runtime_error(os.str());
    }
    eigs[static_cast<std::size_t>(j)] = 0.5 * (a + b);
  }
  std::sort(eigs.begin(), eigs.end(), std::greater<double>());
  return eigs;
}

PhysicalityReport validate_physical(const GeneralCM& cm, double tol) {
  const std::vector<double> eigs = symplectic_eigs_numeric(cm);
  const double min_eig = eigs.back();  // sorted descending
  return {min_eig >= kVacuumVariance - tol, min_eig};
}

GeneralCM two_mode_cm(double s, double k) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = s;
  m(0, 2) = m(2, 0) = k;
  m(1, 3) = m(3, 1) = -k;
  return GeneralCM(std::move(m));
}

GeneralCM to_general(const SymmetricTwoModeCM& cm) {
  return two_mode_cm(cm.s(), cm.k());
}

GeneralCM partial_transpose(const GeneralCM& cm, int mode) {
  const int n = cm.modes();
  if (mode < 0 || mode >= n) {
    throw std::invalid_argument("partial_transpose: mode out of range");
  }
  Eigen::VectorXd flip = Eigen::VectorXd::Ones(2 * n);
  flip(2 * mode + 1) = -1.0;
  Eigen::MatrixXd m =
      flip.asDiagonal() * cm.matrix() * flip.asDiagonal();
  return GeneralCM(std::move(m));
}

GeneralCM permute_modes(const GeneralCM& cm, const std::vector<int>& order) {
  const int n = cm.modes();
  if (static_cast<int>(order.size()) != n) {
    throw std::invalid_argument("permute_modes: order has wrong length");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int old : order) {
    if (old < 0 || old >= n || seen[static_cast<std::size_t>(old)]) {
      throw std::invalid_argument("permute_modes: order is not a permutation");
    }
    seen[static_cast<std::size_t>(old)] = true;
  }
  Eigen::MatrixXd m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m.block<2, 2>(2 * i, 2 * j) =
          cm.matrix().block<2, 2>(2 * order[static_cast<std::size_t>(i)],
                                  2 * order[static_cast<std::size_t>(j)]);
    }
  }
  return GeneralCM(std::move(m));
}

GeneralCM reduced_cm(const GeneralCM& cm, const std::vector<int>& modes) {
  const int n = cm.modes();
  if (modes.empty()) throw std::invalid_argument("reduced_cm: no modes given");
  for (int m : modes) {
    if (m < 0 || m >= n) {
      throw std::invalid_argument("reduced_cm: mode out of range");
    }
  }
  const int r = static_cast<int>(modes.size());
  Eigen::MatrixXd out(2 * r, 2 * r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      out.block<2, 2>(2 * i, 2 * j) =
          cm.matrix().block<2, 2>(2 * modes[static_cast<std::size_t>(i)],
                                  2 * modes[static_cast<std::size_t>(j)]);
    }
  }
  return GeneralCM(std::move(out));
}

}  // namespace optocorr
