// Command-line front end: estimate, export, checkpoints.
//
// Exit codes: 0 ok, 2 input error, 3 capacity error.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmean/dataset_io.hpp"
#include "qmean/encoding.hpp"
#include "qmean/experiments.hpp"
#include "qmean/mean_circuit.hpp"
#include "qmean/qasm.hpp"

namespace qmean::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCapacity = 3;

enum class Mode { Exact, Sampled };

struct RunConfig {
  std::string input;
  std::string format;  // empty: from extension
  int experiment = 0;  // 0: use input
  std::uint64_t shots = experiments::kReferenceShots;
  std::uint64_t seed = 0;
  Mode mode = Mode::Sampled;
  bool sign_resolution = false;
  std::string qasm_out;
  bool json = false;
};

struct ResultReport {
  std::size_t n = 0;
  std::size_t n_index = 0;
  std::size_t original_count = 0;
  double scale = 1.0;
  std::size_t pad_count = 0;
  Mode mode = Mode::Sampled;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::uint64_t ones_count = 0;
  double p1 = 0.0;
  double magnitude = 0.0;
  std::optional<double> signed_mean;
  double classical_mean = 0.0;
  double epsilon = 0.0;
  // In caller units over the unpadded values: magnitude * scale * N / count.
  double raw_magnitude = 0.0;
  double raw_classical_mean = 0.0;
  double wall_time = 0.0;  // seconds
};

inline nlohmann::json to_json(const ResultReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["n_index"] = r.n_index;
  j["original_count"] = r.original_count;
  j["scale"] = r.scale;
  j["pad_count"] = r.pad_count;
  j["mode"] = r.mode == Mode::Exact ? "exact" : "sampled";
  j["shots"] = r.shots;
  j["seed"] = r.seed;
  j["ones_count"] = r.ones_count;
  j["p1"] = r.p1;
  j["magnitude"] = r.magnitude;
  j["signed_mean"] = r.signed_mean ? nlohmann::json(*r.signed_mean) : nlohmann::json(nullptr);
  j["classical_mean"] = r.classical_mean;
  j["epsilon"] = r.epsilon;
  j["raw_magnitude"] = r.raw_magnitude;
  j["raw_classical_mean"] = r.raw_classical_mean;
  j["wall_time"] = r.wall_time;
  return j;
}

inline std::vector<double> load_raw(const RunConfig& cfg) {
  if (cfg.experiment != 0) {
    const auto data = experiments::builtin(cfg.experiment);
    return {data.begin(), data.end()};
  }
  if (cfg.input.empty()) throw InputError("one of --input or --experiment is required");
  const InputFormat fmt = cfg.format.empty() ? format_from_path(cfg.input) : format_from_name(cfg.format);
  return load_dataset(cfg.input, fmt);
}

/// Full pipeline: rescale, build, simulate, read out. The sign-resolution run
/// in sampled mode uses seed + 1.
inline ResultReport cmd_estimate(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> raw = load_raw(cfg);
  const Dataset ds = rescale(raw);
  const double truth = classical_mean(ds);

  ResultReport r;
  r.n = ds.size();
  r.n_index = ds.n_index();
  r.original_count = raw.size();
  r.scale = ds.scale();
  r.pad_count = ds.pad_count();
  r.mode = cfg.mode;
  r.seed = cfg.seed;
  r.classical_mean = truth;

  MeanEstimate e;
  if (cfg.mode == Mode::Exact) {
    e = estimate_mean_exact(ds);
  } else {
    e = estimate_mean(ds, cfg.shots, cfg.seed);
    r.shots = cfg.shots;
  }
  r.ones_count = e.ones_count;
  r.p1 = e.p1;
  r.magnitude = e.magnitude;
  if (cfg.sign_resolution) {
    r.signed_mean = cfg.mode == Mode::Exact ? resolve_sign_exact(ds) : resolve_sign(ds, cfg.shots, cfg.seed + 1);
    r.epsilon = std::abs(*r.signed_mean - truth);
  } else {
    r.epsilon = std::abs(r.magnitude - std::abs(truth));
  }

  const double count = static_cast<double>(raw.size());
  const double padded = static_cast<double>(ds.size());
  r.raw_magnitude = r.magnitude * ds.scale() * padded / count;
  double raw_sum = 0.0;
  for (double v : raw) raw_sum += v;
  r.raw_classical_mean = raw_sum / count;

  if (!cfg.qasm_out.empty()) write_qasm(export_qasm(build_mean_circuit(ds)), cfg.qasm_out);

  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline void print_human(const ResultReport& r, std::ostream& out) {
  char line[160];
  auto emit = [&](const char* key, const std::string& value) {
    std::snprintf(line, sizeof line, "%-18s %s\n", key, value.c_str());
    out << line;
  };
  auto num = [](double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.12g", v);
    return std::string(b);
  };
  emit("N", std::to_string(r.n) + " (n_index " + std::to_string(r.n_index) + ", " +
                std::to_string(r.original_count) + " values, " + std::to_string(r.pad_count) + " padded)");
  emit("scale", num(r.scale));
  if (r.mode == Mode::Exact) {
    emit("mode", "exact");
  } else {
    emit("mode", "sampled, " + std::to_string(r.shots) + " shots, seed " + std::to_string(r.seed));
    emit("ones", std::to_string(r.ones_count));
  }
  emit("p1", num(r.p1));
  emit("|mean|", num(r.magnitude));
  if (r.signed_mean) emit("signed mean", num(*r.signed_mean));
  emit("classical mean", num(r.classical_mean));
  emit("epsilon", num(r.epsilon));
  if (r.pad_count > 0 || r.scale != 1.0) {
    emit("|mean| (raw)", num(r.raw_magnitude));
    emit("classical (raw)", num(r.raw_classical_mean));
  }
  emit("wall time [s]", num(r.wall_time));
}

struct ExportResult {
  std::size_t gate_count = 0;
  std::string text;
};

inline ExportResult cmd_export(const RunConfig& cfg) {
  const Dataset ds = rescale(load_raw(cfg));
  const QasmDocument doc = export_qasm(build_mean_circuit(ds));
  if (!cfg.qasm_out.empty()) {
    const std::filesystem::path parent = std::filesystem::path(cfg.qasm_out).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
      throw InputError("output directory does not exist: " + parent.string());
    }
    try {
      write_qasm(doc, cfg.qasm_out);
    } catch (const std::runtime_error& e) {
      throw InputError(e.what());
    }
  }
  return {doc.gate_count, doc.text};
}

struct StageDeviation {
  Stage stage;
  double max_deviation;
};

/// Max amplitude-wise |simulated - analytic| at each marker.
inline std::vector<StageDeviation> cmd_checkpoints(const RunConfig& cfg) {
  const Dataset ds = rescale(load_raw(cfg));
  if (ds.n_index() > kMaxAnalyticIndexQubits) {
    throw CapacityError("checkpoints limited to n_index <= " + std::to_string(kMaxAnalyticIndexQubits));
  }
  const CircuitRun run = apply_circuit_with_checkpoints(new_ground_state(ds.layout()), build_mean_circuit(ds));
  std::vector<StageDeviation> out;
  for (const Snapshot& snap : run.snapshots) {
    const CheckpointState cp = expected_checkpoint(ds, snap.stage);
    double worst = 0.0;
    for (std::size_t i = 0; i < cp.amps.size(); ++i) worst = std::max(worst, std::abs(snap.state[i] - cp.amps[i]));
    out.push_back({snap.stage, worst});
  }
  return out;
}

namespace detail {

inline void add_input_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.input, "CSV or JSON file of input values");
  sub->add_option("--format", cfg.format, "Input format (csv|json); default from file extension")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--experiment", cfg.experiment, "Built-in reference data set (1|2)")
      ->check(CLI::IsMember({1, 2}));
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum mean-estimation circuit simulator", "qmean"};
  app.require_subcommand(1);

  RunConfig cfg;
  bool exact = false;

  auto* estimate = app.add_subcommand("estimate", "Estimate the mean of a data set");
  detail::add_input_options(estimate, cfg);
  estimate->add_option("--shots", cfg.shots, "Measurement shots")->check(CLI::PositiveNumber);
  estimate->add_option("--seed", cfg.seed, "Sampler seed");
  estimate->add_flag("--exact", exact, "Use the exact probability instead of shots");
  estimate->add_flag("--sign", cfg.sign_resolution, "Recover the sign with a shifted second run");
  estimate->add_option("--qasm-out", cfg.qasm_out, "Also write the circuit as OpenQASM 2.0");
  estimate->add_flag("--json", cfg.json, "Emit a JSON object");

  auto* exporter = app.add_subcommand("export", "Write the circuit as OpenQASM 2.0");
  detail::add_input_options(exporter, cfg);
  exporter->add_option("--qasm-out", cfg.qasm_out, "Output path (stdout if omitted)");

  auto* checkpoints = app.add_subcommand("checkpoints", "Compare simulated psi1..psi5 with analytic states");
  detail::add_input_options(checkpoints, cfg);
  checkpoints->add_flag("--json", cfg.json, "Emit a JSON object");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  cfg.mode = exact ? Mode::Exact : Mode::Sampled;

  try {
    if (estimate->parsed()) {
      const ResultReport r = cmd_estimate(cfg);
      if (cfg.json) {
        out << to_json(r).dump(2) << "\n";
      } else {
        print_human(r, out);
      }
    } else if (exporter->parsed()) {
      const ExportResult r = cmd_export(cfg);
      if (cfg.qasm_out.empty()) {
        out << r.text;
        err << r.gate_count << " gates\n";
      } else {
        out << "wrote " << cfg.qasm_out << " (" << r.gate_count << " gates)\n";
      }
    } else if (checkpoints->parsed()) {
      const auto devs = cmd_checkpoints(cfg);
      if (cfg.json) {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& d : devs) j[std::string(stage_name(d.stage))] = d.max_deviation;
        out << j.dump(2) << "\n";
      } else {
        for (const auto& d : devs) {
          char line[64];
          std::snprintf(line, sizeof line, "%s  max |dev| = %.3e\n", std::string(stage_name(d.stage)).c_str(),
                        d.max_deviation);
          out << line;
        }
      }
    }
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace qmean::cli
