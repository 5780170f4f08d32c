#include "optocorr/measures.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace optocorr {

namespace {

constexpr double kNegativeSlack = 1e-12;

// Rounding can leave a mathematically non-negative measure a hair below
// zero; clamp that, but treat anything further below as a real numerical
// failure rather than silently hiding it.
double clamp_measure(double v, const char* name) {
  if (v >= 0.0) return v;
  if (v >= -kNegativeSlack) return 0.0;
  std::ostringstream os;
  os << name << ": value " << v << " is negative beyond rounding slack";
  throw std::runtime_error(os.str());
}

}  // namespace

double quantum_coherence(const SymmetricTwoModeCM& cm) {
  const SymplecticSpectrum eta = symplectic_eigs_symmetric(cm);
  const double v = 2.0 * f_entropy(cm.s()) - f_entropy(eta.eta_plus) -
                   f_entropy(eta.eta_minus);
  return clamp_measure(v, "quantum_coherence");
}

double eof(const SymmetricTwoModeCM& cm) {
  const double theta = pt_min_symplectic_eig(cm);
  if (theta >= 0.5) return 0.0;
  const double arg = (theta * theta + 0.25) / (2.0 * theta);
  return clamp_measure(f_entropy(arg), "eof");
}

double eof_with_squared_denominator(const SymmetricTwoModeCM& cm) {
  const double theta = pt_min_symplectic_eig(cm);
  if (theta >= 0.5) return 0.0;
  const double arg = (theta * theta + 0.25) / (2.0 * theta * theta);
  return clamp_measure(f_entropy(arg), "eof_with_squared_denominator");
}

double gqd(const SymmetricTwoModeCM& cm) {
  const double s = cm.s();
  const double k = cm.k();
  const SymplecticSpectrum eta = symplectic_eigs_symmetric(cm);
  const double phi = s - 2.0 * k * k / (1.0 + 2.0 * s);
  const double v = f_entropy(s) - f_entropy(eta.eta_plus) -
                   f_entropy(eta.eta_minus) + f_entropy(phi);
  return clamp_measure(v, "gqd");
}

MeasureTriple measure_triple(const SymmetricTwoModeCM& cm) {
  return {eof(cm), gqd(cm), quantum_coherence(cm)};
}

}  // namespace optocorr
