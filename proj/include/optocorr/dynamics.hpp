#pragma once

#include "optocorr/gaussian.hpp"
#include "optocorr/model.hpp"

#include <Eigen/Dense>

// Independent route to the steady state: build the linearised quadrature
// Langevin drift/diffusion pair and solve A V + V A^T + D = 0 directly, or
// integrate the noise spectrum in the frequency domain. These reproduce the
// closed-form blocks without sharing any algebra with them, so agreement is
// a real cross-check.
//
// Quadrature layout everywhere: (X_m1, Y_m1, X_m2, Y_m2, X_o1, Y_o1,
// X_o2, Y_o2) -- mirrors first, then fields, matching GeneralCM mode order
// (m1, m2, o1, o2).

namespace optocorr {

using Matrix8d = Eigen::Matrix<double, 8, 8>;

struct DriftMatrix {
  Matrix8d entries;
};

struct DiffusionMatrix {
  Matrix8d entries;
};

struct LyapunovSolution {
  GeneralCM cm;
  double residual;  // max-abs of A V + V A^T + D
};

// Named covariance entries used by the frequency-domain oracle.
enum class CmElement {
  v1,   // (X_m1, X_m1)
  v13,  // (X_m1, X_m2)
  v2,   // (X_o1, X_o1)
  v57,  // (X_o1, X_o2)
  v15,  // (X_m1, X_o1)
  v17,  // (X_m1, X_o2)
};

// Red-sideband rotating-wave drift. Per cavity, the (mirror, field)
// quadrature pairs couple through the beam-splitter block
//   [[-gamma/2,  G], [-G, -kappa/2]]
// acting identically on X and Y; the two cavities do not couple through
// the drift. G is recovered from the cooperativity, G =
// sqrt(coop * gamma * kappa) / 2. `kappa` rescales the overall time unit
// (the steady state must not depend on it).
DriftMatrix drift_matrix(const SystemParams& p, double kappa = 1.0);

// Input noise: each mirror sees a thermal bath with occupation nth,
// diffusion (gamma/2)(2 nth + 1) per quadrature; each field sees its half
// of the two-mode squeezed vacuum, diffusion (kappa/2) cosh 2r per
// quadrature; the two fields share the squeezing cross term
// +/- (kappa/2) sinh 2r on (X_o1 X_o2) / (Y_o1 Y_o2).
DiffusionMatrix diffusion_matrix(const SystemParams& p, double kappa = 1.0);

// Dense solve of A V + V A^T + D = 0 over the n(n+1)/2 independent entries
// of symmetric V, with one iterative-refinement pass. Throws
// std::runtime_error if A is not Hurwitz-stable (the steady state would not
// exist) or if the final residual exceeds 1e-10.
LyapunovSolution solve_lyapunov(const Eigen::MatrixXd& drift,
                                const Eigen::MatrixXd& diffusion);

// Steady state of the full 8x8 model at parameter point p.
LyapunovSolution steady_state_cm(const SystemParams& p, double kappa = 1.0);

// Same covariance entry from the frequency domain:
//   V = (1/2pi) Integral chi(w) D chi(w)^dagger dw,  chi(w) = (A + i w)^-1.
// Adaptive Gauss-Kronrod over the real line; throws std::runtime_error if
// the estimated quadrature error cannot be pushed below 1e-8.
double spectral_cm_element(const SystemParams& p, CmElement element);

// Entry-wise comparison of a solved steady state against the closed-form
// blocks: per-entry worst deviations plus the max over the full mechanical
// and optical 4x4 blocks (off-pattern positions are compared against 0).
struct BlockComparison {
  double dev_v1;
  double dev_v13;
  double dev_v2;
  double dev_v57;
  double max_abs;
  bool pass;
};

BlockComparison compare_cm(const ClosedFormBlocks& closed,
                           const LyapunovSolution& solved, double tol);

// Largest real part over the eigenvalues of a (drift) matrix; negative
// means stable.
double spectral_abscissa(const Eigen::MatrixXd& m);

}  // namespace optocorr
