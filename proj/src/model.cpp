#include "optocorr/model.hpp"

#include "optocorr/dynamics.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace optocorr {

namespace {

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "parameter " << name << " is not finite";
    throw std::invalid_argument(os.str());
  }
}

void check_nonnegative(double v, const char* name) {
  check_finite(v, name);
  if (v < 0.0) {
    std::ostringstream os;
    os << "parameter " << name << " must be >= 0, got " << v;
    throw std::invalid_argument(os.str());
  }
}

void check_positive(double v, const char* name) {
  check_finite(v, name);
  if (v <= 0.0) {
    std::ostringstream os;
    os << "parameter " << name << " must be > 0, got " << v;
    throw std::invalid_argument(os.str());
  }
}

// Writes the 4x4 pattern [[a,0,c,0],[0,a,0,-c],[c,0,a,0],[0,-c,0,a]] that
// every two-mode block of the steady state follows.
void fill_pair_block(Eigen::MatrixXd& m, int row, int col, double diag,
                     double cross) {
  m(row + 0, col + 0) = diag;
  m(row + 1, col + 1) = diag;
  m(row + 2, col + 2) = diag;
  m(row + 3, col + 3) = diag;
  m(row + 0, col + 2) = cross;
  m(row + 2, col + 0) = cross;
  m(row + 1, col + 3) = -cross;
  m(row + 3, col + 1) = -cross;
}

// Mirror-field cross entries (X_m1 X_o1 and X_m1 X_o2 covariances) from the
// steady-state equation solver, memoised per parameter point. The map is
// guarded by a single mutex: one writer populates, concurrent readers hit
// the fast path.
std::pair<double, double> cross_block_entries(const SystemParams& p) {
  using Key = std::array<double, 4>;
  static std::mutex mu;
  static std::map<Key, std::pair<double, double>> cache;

  const Key key{p.coop, p.squeeze, p.nth, p.damping_ratio};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const LyapunovSolution sol = steady_state_cm(p);
  const std::pair<double, double> entries{sol.cm.matrix()(0, 4),
                                          sol.cm.matrix()(0, 6)};
  cache.emplace(key, entries);
  return entries;
}

}  // namespace

SystemParams::SystemParams(double coop, double squeeze, double nth,
                           double damping_ratio)
    : coop(coop), squeeze(squeeze), nth(nth), damping_ratio(damping_ratio) {
  check_nonnegative(coop, "coop");
  check_nonnegative(squeeze, "squeeze");
  check_nonnegative(nth, "nth");
  check_positive(damping_ratio, "damping_ratio");
}

RawCavityParams::RawCavityParams(double mass, double length,
                                 double cavity_freq, double mech_freq,
                                 double laser_freq, double input_power,
                                 double kappa, double gamma)
    : mass(mass),
      length(length),
      cavity_freq(cavity_freq),
      mech_freq(mech_freq),
      laser_freq(laser_freq),
      input_power(input_power),
      kappa(kappa),
      gamma(gamma) {
  check_positive(mass, "mass");
  check_positive(length, "length");
  check_positive(cavity_freq, "cavity_freq");
  check_positive(mech_freq, "mech_freq");
  check_positive(laser_freq, "laser_freq");
  check_nonnegative(input_power, "input_power");
  check_positive(kappa, "kappa");
  check_positive(gamma, "gamma");
}

ClosedFormBlocks closed_form_blocks(const SystemParams& p) {
  const double kappa = 1.0;
  const double gamma = p.damping_ratio;
  const double c = p.coop;
  const double ch = std::cosh(2.0 * p.squeeze);
  const double sh = std::sinh(2.0 * p.squeeze);
  const double nbar = 1.0 + 2.0 * p.nth;
  const double d = 2.0 * (kappa + gamma) * (1.0 + c);
  ClosedFormBlocks b;
  b.v1 = (kappa * c * ch + nbar * (kappa + gamma + gamma * c)) / d;
  b.v13 = kappa * c * sh / d;
  b.v2 = ((kappa + gamma + kappa * c) * ch + nbar * gamma * c) / d;
  b.v57 = (kappa + gamma + kappa * c) * sh / d;
  return b;
}

SymmetricTwoModeCM mechanical_subsystem(const ClosedFormBlocks& b) {
  return SymmetricTwoModeCM(b.v1, b.v13);
}

SymmetricTwoModeCM optical_subsystem(const ClosedFormBlocks& b) {
  return SymmetricTwoModeCM(b.v2, b.v57);
}

GeneralCM full_cm(const SystemParams& p) {
  const ClosedFormBlocks b = closed_form_blocks(p);
  const auto [v15, v17] = cross_block_entries(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
  fill_pair_block(m, 0, 0, b.v1, b.v13);
  fill_pair_block(m, 4, 4, b.v2, b.v57);
  // Mirror-field coupling: X_m1 correlates with X_o1 (v15) and with the
  // other cavity's field X_o2 (v17); the pattern matrix is symmetric, so
  // the transposed block is identical.
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(8, 8);
  fill_pair_block(cross, 0, 4, v15, v17);
  m.block<4, 4>(0, 4) = cross.block<4, 4>(0, 4);
  m.block<4, 4>(4, 0) = cross.block<4, 4>(0, 4).transpose();
  return GeneralCM(std::move(m));
}

double cooperativity(double coupling, double gamma, double kappa) {
  check_nonnegative(coupling, "coupling");
  check_positive(gamma, "gamma");
  check_positive(kappa, "kappa");
  return 4.0 * coupling * coupling / (gamma * kappa);
}

double vacuum_coupling(const RawCavityParams& p) {
  return (p.cavity_freq / p.length) * std::sqrt(kHBar / (p.mass * p.mech_freq));
}

double steady_amplitude(const RawCavityParams& p) {
  const double drive = std::sqrt(2.0 * p.kappa * p.input_power /
                                 (kHBar * p.laser_freq));
  return drive / std::sqrt(0.25 * p.kappa * p.kappa +
                           p.mech_freq * p.mech_freq);
}

double effective_coupling(const RawCavityParams& p) {
  return vacuum_coupling(p) * steady_amplitude(p);
}

double cooperativity_from_raw(const RawCavityParams& p) {
  return cooperativity(effective_coupling(p), p.gamma, p.kappa);
}

double mechanical_quality_factor(const RawCavityParams& p) {
  return p.mech_freq / p.gamma;
}

}  // namespace optocorr
