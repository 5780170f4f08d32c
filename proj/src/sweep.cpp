#include "optocorr/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace optocorr {

namespace {

double abscissa(const SweepSpec& spec, int i) {
  if (i == 0) return spec.start;
  if (i == spec.points - 1) return spec.stop;
  return spec.start +
         (spec.stop - spec.start) * static_cast<double>(i) /
             static_cast<double>(spec.points - 1);
}

SystemParams point_params(const SweepSpec& spec, double x) {
  switch (spec.variable) {
    case SweepVariable::nth:
      return SystemParams(spec.fixed.coop, spec.fixed.squeeze, x,
                          spec.fixed.damping_ratio);
    case SweepVariable::coop:
      return SystemParams(x, spec.fixed.squeeze, spec.fixed.nth,
                          spec.fixed.damping_ratio);
  }
  throw std::invalid_argument("run_sweep: unknown sweep variable");
}

SweepRow compute_row(const SweepSpec& spec, int i) {
  const double x = abscissa(spec, i);
  try {
    return sweep_point(point_params(spec, x), x);
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "sweep row " << i << " (x = " << x << "): " << e.what();
    throw std::invalid_argument(os.str());
  }
}

void append_value(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

void SweepSpec::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop)) {
    throw std::invalid_argument("sweep: start/stop must be finite");
  }
  if (!(start < stop)) {
    throw std::invalid_argument("sweep: need start < stop");
  }
  if (points < 2) {
    throw std::invalid_argument("sweep: need at least 2 points");
  }
  if (!subsystems.mechanical && !subsystems.optical) {
    throw std::invalid_argument("sweep: select at least one subsystem");
  }
  // `fixed` was validated at construction; the swept variable's own bounds
  // are validated per row (e.g. a negative start fails at row 0).
}

SweepRow sweep_point(const SystemParams& p, double x) {
  const ClosedFormBlocks b = closed_form_blocks(p);
  return {x, measure_triple(mechanical_subsystem(b)),
          measure_triple(optical_subsystem(b))};
}

std::vector<SweepRow> run_sweep_serial(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows(static_cast<std::size_t>(spec.points));
  for (int i = 0; i < spec.points; ++i) {
    rows[static_cast<std::size_t>(i)] = compute_row(spec, i);
  }
  return rows;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows(static_cast<std::size_t>(spec.points));
  int err_row = -1;
  std::string err_msg;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < spec.points; ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = compute_row(spec, i);
    } catch (const std::exception& e) {
#pragma omp critical(optocorr_sweep_error)
      {
        if (err_row < 0 || i < err_row) {
          err_row = i;
          err_msg = e.what();
        }
      }
    }
  }
  if (err_row >= 0) throw std::invalid_argument(err_msg);
  return rows;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << csv_string(rows);
}

std::string csv_string(const std::vector<SweepRow>& rows) {
  std::string out = "x,eof_mech,gqd_mech,qc_mech,eof_opt,gqd_opt,qc_opt\n";
  for (const SweepRow& r : rows) {
    append_value(out, r.x);
    for (double v : {r.mech.eof, r.mech.gqd, r.mech.qc, r.opt.eof, r.opt.gqd,
                     r.opt.qc}) {
      out += ',';
      append_value(out, v);
    }
    out += '\n';
  }
  return out;
}

std::optional<SweepSpec> preset(std::string_view name) {
  const auto thermal = [](double squeeze, bool mech_panel) {
    SweepSpec s;
    s.variable = SweepVariable::nth;
    s.start = 0.0;
    s.stop = 30.0;
    s.points = 121;
    s.fixed = SystemParams(34.0, squeeze, 0.0, 0.05);
    s.subsystems = {mech_panel, !mech_panel};
    return s;
  };
  const auto transfer = [](double nth, bool mech_panel) {
    SweepSpec s;
    s.variable = SweepVariable::coop;
    s.start = 0.0;
    s.stop = 100.0;
    s.points = 101;
    s.fixed = SystemParams(0.0, 1.5, nth, 0.05);
    s.subsystems = {mech_panel, !mech_panel};
    return s;
  };
  if (name == "fig2a") return thermal(1.0, true);
  if (name == "fig2b") return thermal(1.5, true);
  if (name == "fig2c") return thermal(1.0, false);
  if (name == "fig2d") return thermal(1.5, false);
  if (name == "fig3a") return transfer(1.0, true);
  if (name == "fig3b") return transfer(2.0, true);
  if (name == "fig3c") return transfer(1.0, false);
  if (name == "fig3d") return transfer(2.0, false);
  return std::nullopt;
}

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig2c", "fig2d",
          "fig3a", "fig3b", "fig3c", "fig3d"};
}

}  // namespace optocorr
