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

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "probespec/errors.hpp"
#include "probespec/model.hpp"
#include "probespec/spectroscopy.hpp"
#include "probespec/types.hpp"
#include "probespec/validate.hpp"

namespace probespec {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Files

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::Io, "read from '" + path + "' failed");
  }
  return buffer.str();
}

inline void write_text_file(const std::string& path,
                            std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) {
    throw Error(ErrorCode::Io, "write to '" + path + "' failed");
  }
}

inline Json parse_json(const std::string& text, const std::string& context) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, context + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Pauli sums

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw Error(ErrorCode::Parse,
              "expected a number or [re, im] pair, got " + j.dump());
}

inline Json complex_to_json(const Complex& z) {
  if (z.imag() == 0.0) return Json(z.real());
  return Json::array({z.real(), z.imag()});
}

/// Array form: [{"coef": -0.5, "paulis": "ZII"}, ...]; coef may be a number
/// or an [re, im] pair.
inline PauliSum pauli_sum_from_json(const Json& j, int expected_width = -1) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::Parse, "expected a non-empty array of Pauli terms");
  }
  std::vector<PauliString> terms;
  for (const auto& entry : j) {
    if (!entry.is_object() || !entry.contains("coef") ||
        !entry.contains("paulis") || !entry["paulis"].is_string()) {
      throw Error(ErrorCode::Parse,
                  "Pauli term must look like {\"coef\": c, \"paulis\": "
                  "\"IIZ\"}, got " +
                      entry.dump());
    }
    terms.push_back(make_pauli(complex_from_json(entry["coef"]),
                               entry["paulis"].get<std::string>()));
  }
  PauliSum sum = make_pauli_sum(std::move(terms));
  if (expected_width >= 0 && sum.width != expected_width) {
    throw Error(ErrorCode::Structure,
                "Pauli terms are " + std::to_string(sum.width) +
                    " qubits wide, expected " + std::to_string(expected_width));
  }
  return sum;
}

inline Json pauli_sum_to_json(const PauliSum& sum) {
  Json out = Json::array();
  for (const auto& t : sum.terms) {
    out.push_back(
        {{"coef", complex_to_json(t.coefficient)}, {"paulis", t.letters_str()}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model files

namespace detail {

inline Eigen::MatrixXcd dense_block_from_json(const Json& rows) {
  if (!rows.is_array() || rows.empty()) {
    throw Error(ErrorCode::Parse, "dense block must be a non-empty 2D array");
  }
  const auto d = static_cast<std::int64_t>(rows.size());
  Eigen::MatrixXcd h(d, d);
  for (std::int64_t r = 0; r < d; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<std::int64_t>(row.size()) != d) {
      throw Error(ErrorCode::Parse, "dense block rows must form a square matrix");
    }
    for (std::int64_t c = 0; c < d; ++c) {
      h(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
  }
  return h;
}

inline Eigen::VectorXcd initial_from_json(const Json& j, int width) {
  if (j.is_string()) {
    const std::string bits = j.get<std::string>();
    if (static_cast<int>(bits.size()) != width) {
      throw Error(ErrorCode::Structure,
                  "initial bitstring '" + bits + "' must have " +
                      std::to_string(width) + " bits");
    }
    return Statevector::from_bitstring(bits).amplitudes;
  }
  if (j.is_array()) {
    const std::int64_t dim = std::int64_t{1} << width;
    if (static_cast<std::int64_t>(j.size()) != dim) {
      throw Error(ErrorCode::Structure,
                  "initial amplitude list must have 2^n entries");
    }
    Eigen::VectorXcd psi(dim);
    for (std::int64_t s = 0; s < dim; ++s) {
      psi(s) = complex_from_json(j[static_cast<std::size_t>(s)]);
    }
    const double norm = psi.norm();
    if (norm <= 0.0) {
      throw Error(ErrorCode::Validation, "initial amplitudes are all zero");
    }
    return psi / norm;
  }
  throw Error(ErrorCode::Parse,
              "initial state must be a bitstring or an amplitude array");
}

}  // namespace detail

/// Loads a model description:
/// {
///   "n": 5,
///   "system": {"pauli": [...]} | {"dense": [[...]], "padding": 0.0},
///   "coupling": {"preset": "eq5"} | {"pauli": [...], "label": "..."},
///   "probe": {"c": 0.005, "tau": 500.0, "init": "excited"},
///   "initial": "00010"            (optional, default all zeros)
/// }
/// When "padding" is omitted the padding levels default to 1000 times the
/// largest block entry, far outside any reasonable sweep window.
inline Model model_from_json(const Json& j, const std::string& context) {
  try {
    if (!j.is_object()) {
      throw Error(ErrorCode::Parse, context + ": model must be a JSON object");
    }
    if (!j.contains("n") || !j["n"].is_number_integer()) {
      throw Error(ErrorCode::Parse, context + ": missing qubit count \"n\"");
    }
    const int n = j["n"].get<int>();
    if (n < 1) {
      throw Error(ErrorCode::Validation, context + ": n must be >= 1");
    }
    if (!j.contains("system") || !j["system"].is_object()) {
      throw Error(ErrorCode::Parse, context + ": missing \"system\" object");
    }
    Model model;
    const Json& system = j["system"];
    if (system.contains("pauli") == system.contains("dense")) {
      throw Error(ErrorCode::Parse,
                  context + ": system needs exactly one of \"pauli\" or "
                            "\"dense\"");
    }
    if (system.contains("pauli")) {
      model.system = system_from_pauli(pauli_sum_from_json(system["pauli"], n));
    } else {
      const Eigen::MatrixXcd block =
          detail::dense_block_from_json(system["dense"]);
      double padding;
      if (system.contains("padding")) {
        if (!system["padding"].is_number()) {
          throw Error(ErrorCode::Parse, context + ": padding must be a number");
        }
        padding = system["padding"].get<double>();
      } else {
        padding = 1000.0 * std::max(1.0, block.cwiseAbs().maxCoeff());
      }
      model.system = embed_dense(block, n, padding);
    }
    if (!j.contains("coupling") || !j["coupling"].is_object()) {
      throw Error(ErrorCode::Parse, context + ": missing \"coupling\" object");
    }
    const Json& coupling = j["coupling"];
    if (coupling.contains("preset") == coupling.contains("pauli")) {
      throw Error(ErrorCode::Parse,
                  context + ": coupling needs exactly one of \"preset\" or "
                            "\"pauli\"");
    }
    if (coupling.contains("preset")) {
      if (!coupling["preset"].is_string()) {
        throw Error(ErrorCode::Parse, context + ": preset must be a string");
      }
      model.coupling = preset_coupling(coupling["preset"].get<std::string>(), n);
    } else {
      model.coupling =
          make_coupling(pauli_sum_from_json(coupling["pauli"], n),
                        coupling.value("label", std::string{}));
    }
    if (!j.contains("probe") || !j["probe"].is_object()) {
      throw Error(ErrorCode::Parse, context + ": missing \"probe\" object");
    }
    const Json& probe = j["probe"];
    if (!probe.contains("c") || !probe["c"].is_number() ||
        !probe.contains("tau") || !probe["tau"].is_number()) {
      throw Error(ErrorCode::Parse,
                  context + ": probe needs numeric \"c\" and \"tau\"");
    }
    model.probe.c = probe["c"].get<double>();
    model.probe.tau = probe["tau"].get<double>();
    const std::string init = probe.value("init", std::string("excited"));
    if (init == "excited") {
      model.probe.init = ProbeState::Excited;
    } else if (init == "ground") {
      model.probe.init = ProbeState::Ground;
    } else {
      throw Error(ErrorCode::Parse,
                  context + ": probe init must be \"excited\" or \"ground\"");
    }
    validate_probe(model.probe);
    if (j.contains("initial")) {
      model.initial = detail::initial_from_json(j["initial"], n);
    } else {
      model.initial = Statevector::basis_state(n, 0).amplitudes;
    }
    model.name = j.value("name", std::string{});
    validate_model(model);
    return model;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, context + ": " + e.what());
  }
}

/// Serializes a model back into the schema load_model reads. Couplings whose
/// label names a builtin preset are written as {"preset": name} unless
/// inline_coupling forces the explicit term list; basis-state initials are
/// written as bitstrings.
inline Json model_to_json(const Model& model, bool inline_coupling = false) {
  Json j;
  if (!model.name.empty()) j["name"] = model.name;
  j["n"] = model.system.width;
  if (model.system.is_dense()) {
    const auto& dense = *model.system.dense_form;
    const std::int64_t d = dense.embedded_dim;
    Json rows = Json::array();
    for (std::int64_t r = 0; r < d; ++r) {
      Json row = Json::array();
      for (std::int64_t c = 0; c < d; ++c) {
        row.push_back(complex_to_json(dense.matrix(r, c)));
      }
      rows.push_back(std::move(row));
    }
    j["system"] = {{"dense", std::move(rows)},
                   {"padding", dense.padding_diagonal}};
  } else {
    j["system"] = {{"pauli", pauli_sum_to_json(*model.system.pauli_form)}};
  }
  const bool preset_label = model.coupling.label == "eq5" ||
                            model.coupling.label == "eq6" ||
                            model.coupling.label == "eq7" ||
                            model.coupling.label == "uniform_x";
  if (preset_label && !inline_coupling) {
    j["coupling"] = {{"preset", model.coupling.label}};
  } else {
    j["coupling"] = {{"pauli", pauli_sum_to_json(model.coupling.op)}};
    if (!model.coupling.label.empty()) {
      j["coupling"]["label"] = model.coupling.label;
    }
  }
  j["probe"] = {
      {"c", model.probe.c},
      {"tau", model.probe.tau},
      {"init", model.probe.init == ProbeState::Excited ? "excited" : "ground"}};
  std::int64_t basis = -1;
  for (Eigen::Index s = 0; s < model.initial.size(); ++s) {
    if (model.initial(s) == Complex{1.0, 0.0}) {
      if (basis >= 0) {
        basis = -2;
        break;
      }
      basis = s;
    } else if (model.initial(s) != Complex{0.0, 0.0}) {
      basis = -2;
      break;
    }
  }
  if (basis >= 0) {
    std::string bits(static_cast<std::size_t>(model.system.width), '0');
    for (int q = 0; q < model.system.width; ++q) {
      if ((basis >> q) & 1) {
        bits[static_cast<std::size_t>(model.system.width - 1 - q)] = '1';
      }
    }
    j["initial"] = bits;
  } else {
    Json amplitudes = Json::array();
    for (Eigen::Index s = 0; s < model.initial.size(); ++s) {
      amplitudes.push_back(complex_to_json(model.initial(s)));
    }
    j["initial"] = std::move(amplitudes);
  }
  return j;
}

inline Model load_model(const std::string& path) {
  const Json j = parse_json(read_text_file(path), "model file '" + path + "'");
  Model model = model_from_json(j, "model file '" + path + "'");
  if (model.name.empty()) {
    const std::size_t slash = path.find_last_of("/\\");
    const std::size_t start = slash == std::string::npos ? 0 : slash + 1;
    const std::size_t dot = path.find_last_of('.');
    model.name = path.substr(
        start, dot == std::string::npos || dot < start ? std::string::npos
                                                       : dot - start);
  }
  return model;
}

// ---------------------------------------------------------------------------
// Spectra

inline Json sweep_plan_to_json(const SweepPlan& plan) {
  Json out{{"omega_min", plan.omega_min},
           {"omega_max", plan.omega_max},
           {"points", plan.points},
           {"mode", sweep_mode_name(plan.mode)},
           {"method", method_name(plan.method)}};
  if (plan.trotter) {
    out["trotter"] = {{"order", plan.trotter->order},
                      {"steps", plan.trotter->steps}};
  }
  if (plan.shots) {
    out["shots"] = {{"count", plan.shots->count}, {"seed", plan.shots->seed}};
  }
  return out;
}

inline SweepPlan sweep_plan_from_json(const Json& j) {
  SweepPlan plan;
  plan.omega_min = j.at("omega_min").get<double>();
  plan.omega_max = j.at("omega_max").get<double>();
  plan.points = j.at("points").get<int>();
  const std::string mode = j.value("mode", std::string("absorption"));
  if (mode == "absorption") {
    plan.mode = SweepMode::Absorption;
  } else if (mode == "emission") {
    plan.mode = SweepMode::Emission;
  } else {
    throw Error(ErrorCode::Parse, "unknown sweep mode '" + mode + "'");
  }
  const std::string method = j.value("method", std::string("exact"));
  if (method == "exact") {
    plan.method = Method::Exact;
  } else if (method == "trotter") {
    plan.method = Method::Trotter;
  } else {
    throw Error(ErrorCode::Parse, "unknown method '" + method + "'");
  }
  if (j.contains("trotter") && !j["trotter"].is_null()) {
    TrotterPlan tp;
    tp.order = j["trotter"].at("order").get<int>();
    tp.steps = j["trotter"].at("steps").get<std::int64_t>();
    plan.trotter = tp;
  }
  if (j.contains("shots") && !j["shots"].is_null()) {
    ShotPlan sp;
    sp.count = j["shots"].at("count").get<std::int64_t>();
    sp.seed = j["shots"].at("seed").get<std::uint64_t>();
    plan.shots = sp;
  }
  return plan;
}

inline Json peaks_to_json(const std::vector<Peak>& peaks) {
  Json out = Json::array();
  for (const auto& p : peaks) {
    Json entry{{"center", p.center},
               {"height", p.height},
               {"fwhm", p.fwhm},
               {"span", Json::array({p.span_lo, p.span_hi})}};
    if (!p.assignment.empty()) entry["assignment"] = p.assignment;
    out.push_back(std::move(entry));
  }
  return out;
}

inline std::vector<Peak> peaks_from_json(const Json& j) {
  std::vector<Peak> peaks;
  if (!j.is_array()) {
    throw Error(ErrorCode::Parse, "peaks must be an array");
  }
  for (const auto& entry : j) {
    Peak p;
    p.center = entry.at("center").get<double>();
    p.height = entry.at("height").get<double>();
    p.fwhm = entry.at("fwhm").get<double>();
    p.span_lo = entry.at("span").at(0).get<int>();
    p.span_hi = entry.at("span").at(1).get<int>();
    p.assignment = entry.value("assignment", std::string{});
    peaks.push_back(std::move(p));
  }
  return peaks;
}

inline Json spectrum_to_json(const Spectrum& spectrum,
                             const std::vector<Peak>& peaks = {}) {
  Json points = Json::array();
  for (const auto& pt : spectrum.points) {
    Json entry{{"k", pt.k}, {"omega", pt.omega}, {"probability", pt.probability}};
    if (pt.sampled()) {
      entry["flips"] = pt.flips;
      entry["shots"] = pt.shots;
    }
    points.push_back(std::move(entry));
  }
  return Json{{"plan", sweep_plan_to_json(spectrum.plan)},
              {"probe", Json{{"c", spectrum.c}, {"tau", spectrum.tau}}},
              {"resolution_flagged", spectrum.resolution_flagged},
              {"points", std::move(points)},
              {"peaks", peaks_to_json(peaks)}};
}

inline std::pair<Spectrum, std::vector<Peak>> spectrum_from_json(
    const Json& j, const std::string& context) {
  try {
    Spectrum spectrum;
    spectrum.plan = sweep_plan_from_json(j.at("plan"));
    validate_sweep_plan(spectrum.plan);
    spectrum.c = j.at("probe").at("c").get<double>();
    spectrum.tau = j.at("probe").at("tau").get<double>();
    spectrum.resolution_flagged = j.value("resolution_flagged", false);
    const Json& points = j.at("points");
    if (!points.is_array() || points.empty()) {
      throw Error(ErrorCode::Parse, context + ": empty point list");
    }
    for (const auto& entry : points) {
      SpectrumPoint pt;
      pt.k = entry.at("k").get<int>();
      pt.omega = entry.at("omega").get<double>();
      pt.probability = entry.at("probability").get<double>();
      if (entry.contains("flips")) {
        pt.flips = entry.at("flips").get<std::int64_t>();
        pt.shots = entry.at("shots").get<std::int64_t>();
      }
      if (!std::isfinite(pt.probability) || pt.probability < -1e-9 ||
          pt.probability > 1.0 + 1e-9) {
        throw Error(ErrorCode::Parse,
                    context + ": probability out of range at k=" +
                        std::to_string(pt.k));
      }
      spectrum.points.push_back(pt);
    }
    if (spectrum.points.size() !=
        static_cast<std::size_t>(spectrum.plan.points)) {
      throw Error(ErrorCode::Parse,
                  context + ": point count does not match the plan");
    }
    std::vector<Peak> peaks;
    if (j.contains("peaks")) peaks = peaks_from_json(j["peaks"]);
    return {std::move(spectrum), std::move(peaks)};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, context + ": " + e.what());
  }
}

inline std::pair<Spectrum, std::vector<Peak>> load_spectrum(
    const std::string& path) {
  const Json j =
      parse_json(read_text_file(path), "spectrum file '" + path + "'");
  return spectrum_from_json(j, "spectrum file '" + path + "'");
}

// ---------------------------------------------------------------------------
// CSV and plot data

namespace detail {

inline void append_number(std::string& out, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  out += buf;
}

}  // namespace detail

/// Header "k,omega,probability", extended by ",flips,shots" when the sweep
/// sampled shots. Numbers are written with 17 significant digits so the file
/// re-parses to identical doubles.
inline std::string spectrum_to_csv(const Spectrum& spectrum) {
  const bool sampled = spectrum.plan.shots.has_value();
  std::string out = sampled ? "k,omega,probability,flips,shots\n"
                            : "k,omega,probability\n";
  for (const auto& pt : spectrum.points) {
    out += std::to_string(pt.k);
    out += ',';
    detail::append_number(out, pt.omega);
    out += ',';
    detail::append_number(out, pt.probability);
    if (sampled) {
      out += ',';
      out += std::to_string(pt.flips);
      out += ',';
      out += std::to_string(pt.shots);
    }
    out += '\n';
  }
  return out;
}

inline void write_spectrum_csv(const std::string& path,
                               const Spectrum& spectrum) {
  write_text_file(path, spectrum_to_csv(spectrum));
}

/// Two columns "omega probability", gnuplot-ready.
inline std::string spectrum_to_plot_data(const Spectrum& spectrum) {
  std::string out;
  for (const auto& pt : spectrum.points) {
    detail::append_number(out, pt.omega);
    out += ' ';
    detail::append_number(out, pt.probability);
    out += '\n';
  }
  return out;
}

inline void write_plot_data(const std::string& path, const Spectrum& spectrum) {
  write_text_file(path, spectrum_to_plot_data(spectrum));
}

// ---------------------------------------------------------------------------
// Reports

inline Json transition_table_to_json(const TransitionTable& table) {
  Json out = Json::array();
  for (const auto& rec : table.records) {
    out.push_back({{"i", rec.i},
                   {"j", rec.j},
                   {"delta_e", rec.delta_e},
                   {"matrix_element", rec.matrix_element},
                   {"overlap", rec.overlap},
                   {"padded", rec.padded}});
  }
  return out;
}

inline Json validation_report_to_json(const ValidationReport& report) {
  Json matches = Json::array();
  for (const auto& m : report.matches.matches) {
    Json entry{{"peak", m.peak}, {"ambiguous", m.ambiguous}};
    if (m.record) {
      entry["record"] = *m.record;
      entry["distance"] = m.distance;
    }
    entry["candidates"] = m.candidates;
    matches.push_back(std::move(entry));
  }
  return Json{{"passed", report.passed()},
              {"threshold", report.threshold},
              {"table", transition_table_to_json(report.table)},
              {"tolerances", report.tolerances},
              {"predicted_heights", report.predicted_heights},
              {"peaks", peaks_to_json(report.peaks)},
              {"matches", std::move(matches)},
              {"missing_expected", report.missing_expected},
              {"suppressed_records", report.suppressed_records},
              {"spurious_peaks", report.spurious_peaks}};
}

inline Json chain_result_to_json(const ChainResult& result) {
  Json steps = Json::array();
  for (const auto& s : result.steps) {
    steps.push_back({{"i", s.i},
                     {"j", s.j},
                     {"omega", s.omega},
                     {"tau", s.tau},
                     {"mode", sweep_mode_name(s.mode)},
                     {"success_probability", s.success_probability}});
  }
  Json amplitudes = Json::array();
  for (Eigen::Index s = 0; s < result.final_state.size(); ++s) {
    amplitudes.push_back(Json::array(
        {result.final_state(s).real(), result.final_state(s).imag()}));
  }
  return Json{{"steps", std::move(steps)},
              {"target", result.target},
              {"fidelity", result.fidelity},
              {"final_state", std::move(amplitudes)}};
}

}  // namespace probespec
