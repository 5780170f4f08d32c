#pragma once

#include "optocorr/measures.hpp"
#include "optocorr/model.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Parameter sweeps over the closed-form steady state. Rows are independent,
// so run_sweep fans them out with OpenMP; run_sweep_serial is the plain
// reference kept for testing (both must produce byte-identical CSV).

namespace optocorr {

enum class SweepVariable { nth, coop };

struct SubsystemSelection {
  bool mechanical = true;
  bool optical = true;
};

// One sweep: `variable` runs over `points` uniform values in
// [start, stop]; the other knobs are pinned by `fixed` (whose own value of
// the swept field is ignored). `subsystems` only tags which panel a preset
// plots -- every row always carries all six measure columns.
struct SweepSpec {
  SweepVariable variable = SweepVariable::nth;
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  SystemParams fixed{1.0, 0.0, 0.0, 1.0};
  SubsystemSelection subsystems{};

  void validate() const;  // throws std::invalid_argument
};

struct SweepRow {
  double x;
  MeasureTriple mech;
  MeasureTriple opt;
};

// Measures at a single operating point (both subsystems).
SweepRow sweep_point(const SystemParams& p, double x);

// OpenMP kernel: rows computed concurrently, identical values to the serial
// route. A failing row rethrows std::invalid_argument tagged with the row
// index and abscissa (the lowest failing index wins).
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Serial reference implementation.
std::vector<SweepRow> run_sweep_serial(const SweepSpec& spec);

// CSV with header "x,eof_mech,gqd_mech,qc_mech,eof_opt,gqd_opt,qc_opt",
// values printed with %.17g (round-trip exact), '\n' line ends. Identical
// spec => identical bytes.
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
std::string csv_string(const std::vector<SweepRow>& rows);

// Named presets reproducing the reference sweeps:
//   fig2a..fig2d  thermal sweeps, nth in [0, 30], 121 points, coop = 34,
//                 damping_ratio = 0.05; a/c at squeeze = 1, b/d at 1.5;
//                 a/b tag the mechanical panel, c/d the optical one.
//   fig3a..fig3d  cooperativity sweeps, coop in [0, 100], 101 points,
//                 squeeze = 1.5, damping_ratio = 0.05; a/c at nth = 1,
//                 b/d at nth = 2; a/b mechanical, c/d optical.
std::optional<SweepSpec> preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace optocorr
