// optocorr: steady-state correlation measures of a two-cavity
// optomechanical system fed by two-mode squeezed light.
//
// Subcommands:
//   measures  eof/gqd/qc at one operating point
//   sweep     CSV parameter sweeps (presets fig2a..fig3d or custom)
//   cm        covariance blocks / full steady-state matrix
//   verify    oracle cross-check suite
//
// Exit codes: 0 success, 1 validation error, 2 verification failure.

#include "optocorr/dynamics.hpp"
#include "optocorr/gaussian.hpp"
#include "optocorr/measures.hpp"
#include "optocorr/model.hpp"
#include "optocorr/sweep.hpp"
#include "optocorr/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json params_json(const optocorr::SystemParams& p) {
  return {{"coop", p.coop},
          {"squeeze", p.squeeze},
          {"nth", p.nth},
          {"damping_ratio", p.damping_ratio}};
}

json triple_json(const optocorr::MeasureTriple& t) {
  return {{"eof", t.eof}, {"gqd", t.gqd}, {"qc", t.qc}};
}

void emit(const std::string& text, const std::string& out_file) {
  if (out_file.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_file, std::ios::binary);
  if (!os) throw std::invalid_argument("cannot open output file " + out_file);
  os << text;
}

struct ParamOptions {
  double coop = 0.0;
  double squeeze = 0.0;
  double nth = 0.0;
  double damping_ratio = 0.0;

  void attach(CLI::App* cmd, bool required) {
    auto* c = cmd->add_option("--coop", coop, "cooperativity C");
    auto* s = cmd->add_option("--squeeze", squeeze, "squeezing parameter r");
    auto* n = cmd->add_option("--nth", nth, "thermal phonon occupation");
    auto* d = cmd->add_option("--damping-ratio", damping_ratio,
                              "mechanical damping over cavity decay");
    if (required) {
      c->required();
      s->required();
      n->required();
      d->required();
    }
  }

  optocorr::SystemParams build() const {
    return {coop, squeeze, nth, damping_ratio};
  }
};

int run_measures(const ParamOptions& opts, const std::string& subsystem,
                 bool as_json) {
  const optocorr::SystemParams p = opts.build();
  const optocorr::ClosedFormBlocks b = optocorr::closed_form_blocks(p);
  const bool want_mech = subsystem != "opt";
  const bool want_opt = subsystem != "mech";

  std::optional<optocorr::MeasureTriple> mech, opt;
  if (want_mech) {
    mech = optocorr::measure_triple(optocorr::mechanical_subsystem(b));
  }
  if (want_opt) {
    opt = optocorr::measure_triple(optocorr::optical_subsystem(b));
  }

  if (as_json) {
    json j;
    j["params"] = params_json(p);
    if (mech) j["mech"] = triple_json(*mech);
    if (opt) j["opt"] = triple_json(*opt);
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << "subsystem,eof,gqd,qc\n";
  if (mech) {
    std::cout << "mech," << g17(mech->eof) << ',' << g17(mech->gqd) << ','
              << g17(mech->qc) << '\n';
  }
  if (opt) {
    std::cout << "opt," << g17(opt->eof) << ',' << g17(opt->gqd) << ','
              << g17(opt->qc) << '\n';
  }
  return 0;
}

int run_sweep_cmd(const optocorr::SweepSpec& spec, const std::string& out_file,
                  bool as_json) {
  const std::vector<optocorr::SweepRow> rows = optocorr::run_sweep(spec);
  if (as_json) {
    json j;
    j["variable"] =
        spec.variable == optocorr::SweepVariable::nth ? "nth" : "coop";
    j["start"] = spec.start;
    j["stop"] = spec.stop;
    j["points"] = spec.points;
    j["fixed"] = params_json(spec.fixed);
    j["rows"] = json::array();
    for (const optocorr::SweepRow& r : rows) {
      j["rows"].push_back({{"x", r.x},
                           {"eof_mech", r.mech.eof},
                           {"gqd_mech", r.mech.gqd},
                           {"qc_mech", r.mech.qc},
                           {"eof_opt", r.opt.eof},
                           {"gqd_opt", r.opt.gqd},
                           {"qc_opt", r.opt.qc}});
    }
    emit(j.dump(2) + "\n", out_file);
    return 0;
  }
  emit(optocorr::csv_string(rows), out_file);
  return 0;
}

int run_cm(const ParamOptions& opts, bool full, bool as_json) {
  const optocorr::SystemParams p = opts.build();
  const optocorr::ClosedFormBlocks b = optocorr::closed_form_blocks(p);
  std::optional<optocorr::GeneralCM> cm;
  if (full) cm = optocorr::full_cm(p);

  if (as_json) {
    json j;
    j["params"] = params_json(p);
    j["blocks"] = {
        {"v1", b.v1}, {"v13", b.v13}, {"v2", b.v2}, {"v57", b.v57}};
    j["mech"] = {{"s", b.v1}, {"k", b.v13}};
    j["opt"] = {{"s", b.v2}, {"k", b.v57}};
    if (cm) {
      json rows = json::array();
      for (int i = 0; i < 8; ++i) {
        json row = json::array();
        for (int c = 0; c < 8; ++c) row.push_back(cm->matrix()(i, c));
        rows.push_back(row);
      }
      j["full"] = rows;
    }
    std::cout << j.dump(2) << '\n';
    return 0;
  }

  std::cout << "v1," << g17(b.v1) << "\nv13," << g17(b.v13) << "\nv2,"
            << g17(b.v2) << "\nv57," << g17(b.v57) << '\n';
  if (cm) {
    std::cout << "full\n";
    for (int i = 0; i < 8; ++i) {
      for (int c = 0; c < 8; ++c) {
        std::cout << (c ? " " : "") << g17(cm->matrix()(i, c));
      }
      std::cout << '\n';
    }
  }
  return 0;
}

int run_verify(const optocorr::VerifyOptions& options,
               const std::string& report_file, bool as_json) {
  const optocorr::VerifyReport report = optocorr::run_verification(options);
  if (as_json) {
    std::cout << optocorr::report_json(report);
  } else {
    optocorr::print_report(std::cout, report);
  }
  if (!report_file.empty()) {
    std::ofstream os(report_file, std::ios::binary);
    if (!os) {
      throw std::invalid_argument("cannot open report file " + report_file);
    }
    os << optocorr::report_json(report);
  }
  return report.all_passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "steady-state quantum correlations of a double-cavity "
      "optomechanical system driven by two-mode squeezed light"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json,
               "emit a single JSON document instead of text");

  // measures
  auto* measures_cmd = app.add_subcommand(
      "measures", "eof/gqd/qc of a subsystem at one operating point");
  ParamOptions measures_params;
  measures_params.attach(measures_cmd, /*required=*/true);
  std::string subsystem = "both";
  measures_cmd
      ->add_option("--subsystem", subsystem, "mech, opt, or both")
      ->check(CLI::IsMember({"mech", "opt", "both"}));
  measures_cmd->add_flag("--json", as_json,
                         "emit a single JSON document instead of text");

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "parameter sweep emitted as CSV");
  std::string preset_name;
  std::string variable;
  std::string out_file;
  double start = 0.0, stop = 0.0;
  int points = 0;
  ParamOptions sweep_params;
  auto* preset_opt =
      sweep_cmd->add_option("--preset", preset_name, "named preset")
          ->check(CLI::IsMember(optocorr::preset_names()));
  auto* variable_opt =
      sweep_cmd->add_option("--variable", variable, "swept parameter")
          ->check(CLI::IsMember({"nth", "coop"}));
  auto* start_opt = sweep_cmd->add_option("--start", start, "first abscissa");
  auto* stop_opt = sweep_cmd->add_option("--stop", stop, "last abscissa");
  auto* points_opt =
      sweep_cmd->add_option("--points", points, "number of rows (>= 2)");
  sweep_params.attach(sweep_cmd, /*required=*/false);
  sweep_cmd->add_option("--out", out_file, "output file (default: stdout)");
  sweep_cmd->add_flag("--json", as_json,
                      "emit a single JSON document instead of text");
  preset_opt->excludes(variable_opt, start_opt, stop_opt, points_opt);

  // cm
  auto* cm_cmd = app.add_subcommand(
      "cm", "steady-state covariance blocks at one operating point");
  ParamOptions cm_params;
  cm_params.attach(cm_cmd, /*required=*/true);
  bool full = false;
  cm_cmd->add_flag("--full", full,
                   "also print the full 8x8 matrix (solver-backed cross "
                   "blocks included)");
  cm_cmd->add_flag("--json", as_json,
                   "emit a single JSON document instead of text");

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "run the oracle cross-check suite");
  optocorr::VerifyOptions vopts;
  std::string report_file;
  verify_cmd->add_option("--tol", vopts.tol,
                         "closed-form vs oracle gate (default 1e-10)");
  verify_cmd->add_option("--grid-points", vopts.grid_points,
                         "equivalence grid size (default 200)");
  verify_cmd->add_option("--spectral-points", vopts.spectral_points,
                         "frequency-domain spot checks (default 20)");
  verify_cmd->add_option("--spectral-tol", vopts.spectral_tol,
                         "frequency-domain gate (default 1e-6)");
  verify_cmd->add_option("--seed", vopts.seed, "grid sampling seed");
  verify_cmd->add_option("--report", report_file,
                         "also write the JSON report to this file");
  verify_cmd->add_flag("--inject-drift-defect", vopts.defect_drift_coupling,
                       "detector sanity: corrupt the drift coupling block "
                       "(the equivalence check must then fail)");
  verify_cmd->add_flag("--inject-eof-defect", vopts.defect_eof_denominator,
                       "detector sanity: use the squared-denominator eof "
                       "variant (identity checks must then fail)");
  verify_cmd->add_flag("--json", as_json,
                       "emit a single JSON document instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*measures_cmd) {
      return run_measures(measures_params, subsystem, as_json);
    }
    if (*sweep_cmd) {
      optocorr::SweepSpec spec;
      if (preset_opt->count() > 0) {
        spec = *optocorr::preset(preset_name);
      } else {
        if (variable_opt->count() == 0 || start_opt->count() == 0 ||
            stop_opt->count() == 0 || points_opt->count() == 0) {
          throw std::invalid_argument(
              "sweep: give --preset, or all of --variable/--start/--stop/"
              "--points (plus the fixed parameters)");
        }
        spec.variable = variable == "nth" ? optocorr::SweepVariable::nth
                                          : optocorr::SweepVariable::coop;
        spec.start = start;
        spec.stop = stop;
        spec.points = points;
        spec.fixed = sweep_params.build();
      }
      return run_sweep_cmd(spec, out_file, as_json);
    }
    if (*cm_cmd) {
      return run_cm(cm_params, full, as_json);
    }
    if (*verify_cmd) {
      return run_verify(vopts, report_file, as_json);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
