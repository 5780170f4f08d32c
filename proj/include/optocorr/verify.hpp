#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

// Self-verification suite: cross-checks the closed-form steady state
// against the independent dynamics oracles and exercises every documented
// property of the correlation measures. The CLI's `verify` subcommand and
// the test suite both run through here.

namespace optocorr {

struct VerifyOptions {
  double tol = 1e-10;        // closed-form vs oracle agreement gate
  int grid_points = 200;     // randomized operating points for the grid
  int spectral_points = 20;  // frequency-domain spot checks
  double spectral_tol = 1e-6;
  std::uint64_t seed = 20240817;  // grid sampling seed (fixed => reproducible)

  // Fault hooks that let tests prove the detectors detect. Flipping either
  // one must turn the corresponding check red:
  //   defect_drift_coupling  solves the steady state from a drift whose
  //                          per-cavity block is [[-g/2, G], [-k/2, -G]]
  //                          (decay and coupling misplaced) -> the oracle
  //                          equivalence check must fail;
  //   defect_eof_denominator routes EoF through the 2*theta^2 denominator
  //                          variant -> the pure-state identity check must
  //                          fail.
  bool defect_drift_coupling = false;
  bool defect_eof_denominator = false;
};

struct CheckResult {
  std::string name;
  bool passed;
  double worst;        // worst observed deviation or margin (check-specific)
  std::string detail;  // human-readable summary of what was measured
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

// Runs every check; never throws for in-suite failures (they are reported),
// only for malformed options.
VerifyReport run_verification(const VerifyOptions& options = {});

// One aligned "[PASS]/[FAIL] name  worst  detail" line per check plus a
// summary line.
void print_report(std::ostream& os, const VerifyReport& report);

// The same report as a single JSON document.
std::string report_json(const VerifyReport& report);

namespace detail {

// Deterministic, platform-independent uniform sampler (splitmix64 core)
// used for the verification grids; std::uniform_real_distribution is not
// pinned down by the standard, this is.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi) with 53-bit resolution.
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::uint64_t state_;
};

}  // namespace detail

}  // namespace optocorr
