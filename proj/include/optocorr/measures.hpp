#pragma once

#include "optocorr/gaussian.hpp"

// Correlation measures for symmetric two-mode squeezed thermal states, all
// in nats. Each takes a validated SymmetricTwoModeCM, so inputs are
// physical by construction; results are clamped to 0 when rounding leaves
// them within 1e-12 below zero.

namespace optocorr {

enum class SubsystemKind { mechanical, optical };

struct MeasureTriple {
  double eof;
  double gqd;
  double qc;
};

// Relative entropy of coherence: 2 f(s) - f(eta+) - f(eta-). The diagonal
// of the covariance matrix is all s, so the nearest incoherent state is a
// thermal pair with that occupation; zero iff k == 0.
double quantum_coherence(const SymmetricTwoModeCM& cm);

// Entanglement of formation. With theta = smallest symplectic eigenvalue
// after partial transposition, the state is separable (EoF = 0) for
// theta >= 1/2 and otherwise EoF = f((theta^2 + 1/4) / (2 theta)), which
// -> 0 continuously as theta -> 1/2.
double eof(const SymmetricTwoModeCM& cm);

// Deliberately wrong variant with denominator 2 theta^2 instead of
// 2 theta. It jumps by f(1/2 + 1/4) ~ 0.95 at the separability boundary;
// kept as the negative control for the continuity check, never for
// physics.
double eof_with_squared_denominator(const SymmetricTwoModeCM& cm);

// Gaussian quantum discord (measurement on the second mode):
// f(s) - f(eta+) - f(eta-) + f(phi) with phi = s - 2 k^2 / (1 + 2 s).
// That rewriting of (s + 2 s^2 - 2 k^2) / (1 + 2 s) is exact at k == 0, so
// product states give exactly zero.
double gqd(const SymmetricTwoModeCM& cm);

// All three measures at once.
MeasureTriple measure_triple(const SymmetricTwoModeCM& cm);

}  // namespace optocorr
