#pragma once

#include <Eigen/Dense>

#include <vector>

// Symplectic algebra and entropy primitives for Gaussian states.
//
// Conventions, fixed here for the whole library:
//   - hbar = 1, quadratures X = (a^+ + a)/sqrt(2), Y = (a - a^+)/(i sqrt(2)),
//     so each vacuum quadrature has variance 1/2;
//   - covariance matrices are ordered (X1, Y1, X2, Y2, ...), one adjacent
//     quadrature pair per mode;
//   - a state is physical iff every symplectic eigenvalue is >= 1/2;
//   - entropies use natural logarithms (nats).

namespace optocorr {

// Variance of each vacuum quadrature; doubles as the physicality floor for
// symplectic eigenvalues.
inline constexpr double kVacuumVariance = 0.5;

// Slack accepted when classifying a covariance matrix assembled from
// floating-point expressions as physical. Pure squeezed states built from
// cosh/sinh pairs can sit below the exact boundary by a few 1e-12 through
// input rounding alone, so this is deliberately looser than one ulp.
inline constexpr double kPhysicalityTol = 1e-9;

// Covariance matrix of a symmetric two-mode squeezed thermal state: both
// single-mode blocks are diag(s, s) and the cross block is diag(k, -k).
// Construction rejects matrices with s^2 - k^2 < 1/4 - kPhysicalityTol,
// so a live instance is always (numerically) physical.
class SymmetricTwoModeCM {
 public:
  SymmetricTwoModeCM(double s, double k);

  double s() const { return s_; }
  double k() const { return k_; }

 private:
  double s_;
  double k_;
};

// A full 2n x 2n covariance matrix. Construction checks shape, symmetry
// (max asymmetry 1e-12) and positive definiteness; it does NOT require
// quantum physicality -- see validate_physical for that.
class GeneralCM {
 public:
  explicit GeneralCM(Eigen::MatrixXd entries);

  int modes() const { return static_cast<int>(mat_.rows()) / 2; }
  const Eigen::MatrixXd& matrix() const { return mat_; }

 private:
  Eigen::MatrixXd mat_;
};

struct SymplecticSpectrum {
  double eta_plus;   // larger symplectic eigenvalue
  double eta_minus;  // smaller symplectic eigenvalue
};

struct PhysicalityReport {
  bool physical;
  double min_symplectic_eig;
};

// f(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2), the entropy of a
// bosonic mode with symplectic eigenvalue x, in nats. Values in
// [1/2 - 1e-12, 1/2] are clamped to the boundary (f = 0); anything lower
// throws std::domain_error.
double f_entropy(double x);

// Symplectic spectrum of a symmetric two-mode state. Both eigenvalues
// coincide at sqrt(s^2 - k^2); k == 0 short-circuits to {s, s} exactly so
// product states keep exact entropies.
SymplecticSpectrum symplectic_eigs_symmetric(const SymmetricTwoModeCM& cm);

// Smallest symplectic eigenvalue after partial transposition of one mode.
// For this family the radical collapses algebraically to s - |k|; the
// factored form is used because it stays exact where the radical loses
// ~1e-11 to cancellation at large s. The state is entangled iff the
// result is < 1/2.
double pt_min_symplectic_eig(const SymmetricTwoModeCM& cm);

// Symplectic eigenvalues of an arbitrary covariance matrix, computed as the
// moduli of the eigenvalues of i*Omega*V (conjugate pairs averaged), sorted
// descending, n values for n modes. Throws std::runtime_error if the
// eigensolve residual exceeds 1e-10 * ||Omega*V|| or the moduli fail to
// pair up.
std::vector<double> symplectic_eigs_numeric(const GeneralCM& cm);

// Checks min symplectic eigenvalue >= 1/2 - tol and reports the minimum.
PhysicalityReport validate_physical(const GeneralCM& cm,
                                    double tol = kPhysicalityTol);

// Symplectic form for n modes: block-diagonal [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int n_modes);

// 4x4 covariance matrix with diagonal blocks diag(s, s) and cross block
// diag(k, -k), without the physicality gate of SymmetricTwoModeCM (only
// positive definiteness is required). Exists so unphysical-but-PD inputs
// can be fed to the numeric routines in tests.
GeneralCM two_mode_cm(double s, double k);

// Embeds a validated symmetric state as a GeneralCM.
GeneralCM to_general(const SymmetricTwoModeCM& cm);

// Partial transposition of one mode: flips the sign of that mode's Y row
// and column.
GeneralCM partial_transpose(const GeneralCM& cm, int mode);

// Reorders modes; `order[i]` names the old index of new mode i and must be
// a permutation of 0..n-1.
GeneralCM permute_modes(const GeneralCM& cm, const std::vector<int>& order);

// Covariance matrix of the subsystem spanned by `modes` (pairs kept
// adjacent, in the order given).
GeneralCM reduced_cm(const GeneralCM& cm, const std::vector<int>& modes);

}  // namespace optocorr
