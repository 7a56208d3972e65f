// Copyright 2026 The probespec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command line front end. Subcommands:
//   sweep     simulate a frequency sweep and detect peaks
//   predict   analytic spectrum from the transition table
//   validate  cross-check a sweep against the exact transition table
//   prepare   walk the system into a target eigenstate
//
// Exit codes: 0 success, 1 domain failure (validation failed, chain
// aborted, propagation error), 2 empty spectrum (no peak above threshold),
// 3 bad configuration or input syntax, 4 I/O failure, 5 resource cap.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "probespec/probespec.hpp"

namespace {

using namespace probespec;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return 4;
    case ErrorCode::Resource: return 5;
    case ErrorCode::Propagation:
    case ErrorCode::Projection:
    case ErrorCode::ChainStep: return 1;
    default: return 3;
  }
}

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct CommonOptions {
  std::string model_path;
  double c_override = std::numeric_limits<double>::quiet_NaN();
  double tau_override = std::numeric_limits<double>::quiet_NaN();
  std::string coupling_preset;
  int threads = 0;
};

struct WindowOptions {
  double omega_min = 0.0;
  double omega_max = 0.0;
  int points = 0;
  std::string mode = "absorption";
};

struct DetectOptions {
  double floor = 1e-4;
  double relative = 0.05;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--model", opts.model_path, "model JSON file")
      ->required();
  cmd->add_option("--c", opts.c_override,
                  "override the probe coupling strength");
  cmd->add_option("--tau", opts.tau_override,
                  "override the probe evolution time");
  cmd->add_option("--coupling-preset", opts.coupling_preset,
                  "replace the model coupling (eq5, eq6, eq7, uniform_x)");
  cmd->add_option("--threads", opts.threads,
                  "worker threads for sweeps (0 = hardware)");
}

void add_window(CLI::App* cmd, WindowOptions& opts, bool required) {
  auto* lo = cmd->add_option("--omega-min", opts.omega_min,
                             "sweep window lower edge");
  auto* hi = cmd->add_option("--omega-max", opts.omega_max,
                             "sweep window upper edge");
  auto* pts = cmd->add_option("--points", opts.points,
                              "number of grid intervals");
  if (required) {
    lo->required();
    hi->required();
    pts->required();
  }
  cmd->add_option("--mode", opts.mode, "absorption or emission")
      ->check(CLI::IsMember({"absorption", "emission"}));
}

void add_detect(CLI::App* cmd, DetectOptions& opts) {
  cmd->add_option("--threshold", opts.floor,
                  "absolute detection floor (default 1e-4)");
  cmd->add_option("--relative-fraction", opts.relative,
                  "relative detection threshold (default 0.05)");
}

Model load_with_overrides(const CommonOptions& opts) {
  Model model = load_model(opts.model_path);
  if (!std::isnan(opts.c_override)) model.probe.c = opts.c_override;
  if (!std::isnan(opts.tau_override)) model.probe.tau = opts.tau_override;
  if (!opts.coupling_preset.empty()) {
    model.coupling = preset_coupling(opts.coupling_preset, model.system.width);
  }
  validate_model(model);
  return model;
}

SweepPlan plan_from(const WindowOptions& w) {
  SweepPlan plan;
  plan.omega_min = w.omega_min;
  plan.omega_max = w.omega_max;
  plan.points = w.points;
  plan.mode = w.mode == "emission" ? SweepMode::Emission
                                   : SweepMode::Absorption;
  return plan;
}

void print_model_line(const Model& model) {
  std::cout << "model: " << model.name << " (" << model.system.width
            << " qubits";
  if (model.system.is_dense()) {
    std::cout << ", dense block " << model.system.embedded_dim();
  } else {
    std::cout << ", " << model.system.pauli_form->terms.size()
              << " Pauli terms";
  }
  std::cout << ", coupling "
            << (model.coupling.label.empty() ? "custom" : model.coupling.label)
            << ")\n";
}

void print_peaks(const std::vector<Peak>& peaks, double threshold) {
  std::cout << "peaks above threshold " << fmt(threshold) << ": "
            << peaks.size() << "\n";
  if (peaks.empty()) return;
  std::printf("  %12s %12s %12s %-12s %s\n", "center", "height", "fwhm",
              "span", "assignment");
  for (const auto& p : peaks) {
    const std::string span =
        "[" + std::to_string(p.span_lo) + "," + std::to_string(p.span_hi) + "]";
    std::printf("  %12.6g %12.6g %12.6g %-12s %s\n", p.center, p.height,
                p.fwhm, span.c_str(),
                p.assignment.empty() ? "-" : p.assignment.c_str());
  }
}

void write_spectrum_outputs(const Spectrum& spectrum,
                            const std::vector<Peak>& peaks,
                            const std::string& csv, const std::string& json,
                            const std::string& plot) {
  if (!csv.empty()) {
    write_spectrum_csv(csv, spectrum);
    std::cout << "wrote " << csv << "\n";
  }
  if (!json.empty()) {
    write_text_file(json, spectrum_to_json(spectrum, peaks).dump(2) + "\n");
    std::cout << "wrote " << json << "\n";
  }
  if (!plot.empty()) {
    write_plot_data(plot, spectrum);
    std::cout << "wrote " << plot << "\n";
  }
}

void warn_resolution(const Spectrum& spectrum) {
  if (!spectrum.resolution_flagged) return;
  std::cerr << "warning: grid spacing " << fmt(grid_spacing(spectrum.plan))
            << " exceeds the minimum peak width 1/tau = "
            << fmt(1.0 / spectrum.tau) << "; narrow peaks may fall between "
            << "grid points\n";
}

int run_sweep_command(const CommonOptions& common, const WindowOptions& window,
                      const DetectOptions& detect, const std::string& method,
                      std::int64_t trotter_steps, std::int64_t shots,
                      std::uint64_t seed, const std::string& out_csv,
                      const std::string& out_json, const std::string& out_plot,
                      bool predict_only) {
  const Model model = load_with_overrides(common);
  SweepPlan plan = plan_from(window);
  plan.method = method == "trotter" ? Method::Trotter : Method::Exact;
  if (trotter_steps > 0) {
    plan.trotter = TrotterPlan{2, trotter_steps};
  }
  if (shots > 0) {
    plan.shots = ShotPlan{shots, seed};
  }
  print_model_line(model);
  std::cout << (predict_only ? "predict: " : "sweep: ")
            << sweep_mode_name(plan.mode) << ", "
            << (predict_only ? "analytic" : method_name(plan.method)) << ", "
            << plan.points << " points in [" << fmt(plan.omega_min) << ", "
            << fmt(plan.omega_max) << "], c=" << fmt(model.probe.c)
            << ", tau=" << fmt(model.probe.tau) << "\n";
  const Spectrum spectrum = predict_only
                                ? predict_spectrum(model, plan)
                                : run_sweep(model, plan, common.threads);
  warn_resolution(spectrum);
  ThresholdPolicy policy;
  policy.absolute_floor = detect.floor;
  policy.relative_fraction = detect.relative;
  const std::vector<Peak> peaks = detect_peaks(spectrum, policy);
  double max_p = 0.0;
  for (const auto& pt : spectrum.points) max_p = std::max(max_p, pt.probability);
  write_spectrum_outputs(spectrum, peaks, out_csv, out_json, out_plot);
  print_peaks(peaks, effective_threshold(policy, max_p));
  return peaks.empty() ? 2 : 0;
}

int run_validate_command(const CommonOptions& common,
                         const WindowOptions& window,
                         const DetectOptions& detect,
                         const std::string& spectrum_path,
                         const std::string& out_json, bool window_given) {
  const Model model = load_with_overrides(common);
  ThresholdPolicy policy;
  policy.absolute_floor = detect.floor;
  policy.relative_fraction = detect.relative;
  print_model_line(model);
  ValidationReport report;
  if (!spectrum_path.empty()) {
    auto [spectrum, peaks] = load_spectrum(spectrum_path);
    std::cout << "validating spectrum from " << spectrum_path << " ("
              << spectrum.points.size() << " points)\n";
    if (spectrum.tau > 0.0 && spectrum.tau != model.probe.tau) {
      std::cerr << "warning: spectrum was recorded at tau="
                << fmt(spectrum.tau) << ", model says tau="
                << fmt(model.probe.tau) << "; using the recorded value\n";
    }
    report = validate_spectrum(model, spectrum, policy);
  } else {
    if (!window_given) {
      throw Error(ErrorCode::Config,
                  "validate needs either --spectrum or a sweep window "
                  "(--omega-min/--omega-max/--points)");
    }
    report = validate_model_sweep(model, plan_from(window), policy,
                                  common.threads);
  }
  warn_resolution(report.spectrum);
  if (!out_json.empty()) {
    write_text_file(out_json, validation_report_to_json(report).dump(2) + "\n");
    std::cout << "wrote " << out_json << "\n";
  }
  print_peaks(report.peaks, report.threshold);
  std::cout << "transitions in window: " << report.table.records.size()
            << " (expected visible: "
            << report.table.records.size() - report.suppressed_records.size() -
                   report.missing_expected.size()
            << " matched, " << report.suppressed_records.size()
            << " below the visibility cut, " << report.missing_expected.size()
            << " missing)\n";
  if (!report.suppressed_records.empty()) {
    std::cout << "note: " << report.suppressed_records.size()
              << " in-window transitions are suppressed (selection rule or "
                 "negligible initial-state overlap); no peak is expected "
                 "there\n";
  }
  if (!report.spurious_peaks.empty()) {
    std::cout << "spurious peaks: " << report.spurious_peaks.size() << "\n";
  }
  std::cout << "validation: " << (report.passed() ? "PASS" : "FAIL") << "\n";
  return report.passed() ? 0 : 1;
}

int run_prepare_command(const CommonOptions& common,
                        const std::vector<std::string>& transitions,
                        double min_step_probability,
                        const std::string& out_json) {
  const Model model = load_with_overrides(common);
  std::vector<std::pair<int, int>> path;
  for (const auto& t : transitions) {
    const auto bad_pair = [&t] {
      return Error(ErrorCode::Parse,
                   "transition '" + t + "' must look like i:j");
    };
    const std::size_t colon = t.find(':');
    if (colon == std::string::npos) throw bad_pair();
    try {
      std::size_t parsed_i = 0;
      std::size_t parsed_j = 0;
      const int i = std::stoi(t.substr(0, colon), &parsed_i);
      const int j = std::stoi(t.substr(colon + 1), &parsed_j);
      if (parsed_i != colon || parsed_j != t.size() - colon - 1) {
        throw bad_pair();
      }
      path.emplace_back(i, j);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw bad_pair();
    }
  }
  print_model_line(model);
  ChainOptions options;
  options.min_step_probability = min_step_probability;
  const ChainResult result = prepare_eigenstate_chain(model, path, options);
  for (std::size_t s = 0; s < result.steps.size(); ++s) {
    const auto& step = result.steps[s];
    std::cout << "step " << (s + 1) << ": " << step.i << "->" << step.j << " "
              << sweep_mode_name(step.mode) << " omega=" << fmt(step.omega)
              << " tau=" << fmt(step.tau)
              << " p_flip=" << fmt(step.success_probability) << "\n";
  }
  std::cout << "final fidelity vs eigenstate " << result.target << ": "
            << fmt(result.fidelity, "%.8g") << "\n";
  if (!out_json.empty()) {
    write_text_file(out_json, chain_result_to_json(result).dump(2) + "\n");
    std::cout << "wrote " << out_json << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probe-qubit spectroscopy simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "probespec 0.1.0");

  CommonOptions sweep_common, predict_common, validate_common, prepare_common;
  WindowOptions sweep_window, predict_window, validate_window;
  DetectOptions sweep_detect, predict_detect, validate_detect;

  auto* sweep = app.add_subcommand("sweep", "simulate a frequency sweep");
  add_common(sweep, sweep_common);
  add_window(sweep, sweep_window, true);
  add_detect(sweep, sweep_detect);
  std::string sweep_method = "exact";
  std::int64_t sweep_trotter_steps = 0;
  std::int64_t sweep_shots = 0;
  std::uint64_t sweep_seed = 0;
  std::string sweep_csv = "spectrum.csv";
  std::string sweep_json = "spectrum.json";
  std::string sweep_plot = "spectrum.dat";
  sweep->add_option("--method", sweep_method, "exact or trotter")
      ->check(CLI::IsMember({"exact", "trotter"}));
  sweep->add_option("--trotter-steps", sweep_trotter_steps,
                    "fixed step count (0 = automatic)");
  sweep->add_option("--shots", sweep_shots,
                    "sample this many shots per point instead of exact "
                    "probabilities");
  sweep->add_option("--seed", sweep_seed, "shot sampling seed");
  sweep->add_option("--out-csv", sweep_csv,
                    "spectrum CSV path (default spectrum.csv)");
  sweep->add_option("--out-json", sweep_json,
                    "spectrum JSON path (default spectrum.json)");
  sweep->add_option("--out-plot", sweep_plot,
                    "two-column plot data path (default spectrum.dat)");

  auto* predict = app.add_subcommand(
      "predict", "analytic spectrum from the transition table");
  add_common(predict, predict_common);
  add_window(predict, predict_window, true);
  add_detect(predict, predict_detect);
  std::string predict_csv = "predicted.csv";
  std::string predict_json = "predicted.json";
  std::string predict_plot = "predicted.dat";
  predict->add_option("--out-csv", predict_csv,
                      "spectrum CSV path (default predicted.csv)");
  predict->add_option("--out-json", predict_json,
                      "spectrum JSON path (default predicted.json)");
  predict->add_option("--out-plot", predict_plot,
                      "two-column plot data path (default predicted.dat)");

  auto* validate = app.add_subcommand(
      "validate", "cross-check a sweep against the exact transition table");
  add_common(validate, validate_common);
  add_window(validate, validate_window, false);
  add_detect(validate, validate_detect);
  std::string validate_spectrum_path, validate_json;
  validate->add_option("--spectrum", validate_spectrum_path,
                       "validate this spectrum JSON instead of sweeping");
  validate->add_option("--out-json", validate_json, "report JSON path");

  auto* prepare = app.add_subcommand(
      "prepare", "drive the system along a chain of eigenstate transitions");
  add_common(prepare, prepare_common);
  std::vector<std::string> prepare_transitions;
  double prepare_min_p = 1e-3;
  std::string prepare_json;
  prepare->add_option("--transition", prepare_transitions,
                      "transition i:j (repeat for multi-step chains)");
  prepare->add_option("--min-step-probability", prepare_min_p,
                      "abort when a step's flip probability drops below this");
  prepare->add_option("--out-json", prepare_json, "chain report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (sweep->parsed()) {
      return run_sweep_command(sweep_common, sweep_window, sweep_detect,
                               sweep_method, sweep_trotter_steps, sweep_shots,
                               sweep_seed, sweep_csv, sweep_json, sweep_plot,
                               false);
    }
    if (predict->parsed()) {
      return run_sweep_command(predict_common, predict_window, predict_detect,
                               "exact", 0, 0, 0, predict_csv, predict_json,
                               predict_plot, true);
    }
    if (validate->parsed()) {
      const bool window_given = validate->count("--omega-min") &&
                                validate->count("--omega-max") &&
                                validate->count("--points");
      return run_validate_command(validate_common, validate_window,
                                  validate_detect, validate_spectrum_path,
                                  validate_json, window_given);
    }
    if (prepare->parsed()) {
      return run_prepare_command(prepare_common, prepare_transitions,
                                 prepare_min_p, prepare_json);
    }
  } catch (const probespec::Error& e) {
    std::cerr << "error: " << error_token(e.code()) << " "
              << one_line(e.what()) << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: E_INTERNAL " << one_line(e.what()) << "\n";
    return 70;
  }
  return 3;
}
