#pragma once

#include "optocorr/gaussian.hpp"

// Steady state of two identical single-mode cavities whose mirrors are
// mechanically independent and whose optical inputs are the two halves of a
// broadband two-mode squeezed vacuum, each cavity driven on its lower
// motional sideband. In the rotating-wave regime the steady-state
// covariance matrix has closed-form blocks; this header exposes those
// blocks, the two-mode mechanical/optical subsystem states built from them,
// and the dimensionless knobs the rest of the library runs on.
//
// Everything is expressed in units of the cavity linewidth: kappa = 1 and
// the mechanical damping enters as gamma = damping_ratio * kappa.

namespace optocorr {

inline constexpr double kHBar = 1.054571817e-34;  // J s

// Dimensionless operating point.
//   coop           single-cavity cooperativity C = 4 G^2 / (gamma kappa)
//   squeeze        squeezing parameter r of the optical drive
//   nth            thermal phonon occupation of each mirror bath
//   damping_ratio  gamma / kappa
struct SystemParams {
  double coop;
  double squeeze;
  double nth;
  double damping_ratio;

  SystemParams(double coop, double squeeze, double nth, double damping_ratio);
};

// Physical build of one cavity, for deriving the dimensionless knobs from
// lab numbers. Frequencies are angular (rad/s), mass in kg, length in m,
// power in W.
struct RawCavityParams {
  double mass;
  double length;
  double cavity_freq;    // omega_a
  double mech_freq;      // omega_M
  double laser_freq;     // omega_L
  double input_power;    // P
  double kappa;          // cavity decay
  double gamma;          // mechanical damping

  RawCavityParams(double mass, double length, double cavity_freq,
                  double mech_freq, double laser_freq, double input_power,
                  double kappa, double gamma);
};

// The four independent entries of the steady-state covariance matrix:
// mechanical diagonal (v1) and mechanical cross (v13), optical diagonal
// (v2) and optical cross (v57). Both two-mode subsystems are symmetric
// squeezed thermal states built from these.
struct ClosedFormBlocks {
  double v1;
  double v13;
  double v2;
  double v57;
};

// Steady-state blocks, kappa = 1 units:
//   v1  = [kappa C cosh 2r + (1 + 2 nth)(kappa + gamma + gamma C)] / d
//   v13 =  kappa C sinh 2r / d
//   v2  = [(kappa + gamma + kappa C) cosh 2r + (1 + 2 nth) gamma C] / d
//   v57 =  (kappa + gamma + kappa C) sinh 2r / d
// with d = 2 (kappa + gamma)(1 + C).
ClosedFormBlocks closed_form_blocks(const SystemParams& p);

// Two-mirror state (s = v1, k = v13). With coop = 0 the mirrors decouple
// from the light and this is a product of thermal states (k = 0); with
// coop -> infinity it approaches the injected squeezed state itself.
SymmetricTwoModeCM mechanical_subsystem(const ClosedFormBlocks& b);

// Intracavity two-mode field (s = v2, k = v57).
SymmetricTwoModeCM optical_subsystem(const ClosedFormBlocks& b);

// Full 8 x 8 steady-state covariance matrix, quadratures ordered
// (X_m1, Y_m1, X_m2, Y_m2, X_o1, Y_o1, X_o2, Y_o2). Diagonal 4x4 blocks
// come from the closed forms above; the mirror-field cross block has no
// closed form here and is filled from the steady-state equation solver
// (results memoised per parameter point; safe to call concurrently).
GeneralCM full_cm(const SystemParams& p);

// C = 4 G^2 / (gamma kappa) for an effective linearised coupling G.
double cooperativity(double coupling, double gamma, double kappa);

// Single-photon coupling g = (omega_a / L) sqrt(hbar / (m omega_M)).
double vacuum_coupling(const RawCavityParams& p);

// Steady intracavity amplitude at red-sideband drive,
// |alpha| = sqrt(2 kappa P / (hbar omega_L)) / sqrt(kappa^2/4 + omega_M^2).
double steady_amplitude(const RawCavityParams& p);

// Effective linearised coupling G = g |alpha|.
double effective_coupling(const RawCavityParams& p);

// Cooperativity of a physical build: 4 (g|alpha|)^2 / (gamma kappa).
double cooperativity_from_raw(const RawCavityParams& p);

// Mechanical quality factor omega_M / gamma.
double mechanical_quality_factor(const RawCavityParams& p);

}  // namespace optocorr
