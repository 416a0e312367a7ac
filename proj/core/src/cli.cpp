#include "chemolab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "chemolab/error.hpp"

namespace chemolab {

namespace {

std::optional<BlowupClassification> classify_records(const RunConfig& config, const std::vector<DiagnosticsRecord>& records,
                                                     std::string& note) {
  std::vector<double> t, y;
  for (const auto& r : records) {
    const bool keep = config.classify_from > 0.0 ? r.t >= config.classify_from : r.t > 0.0;
    if (keep && r.sup_u > 0.0 && (t.empty() || r.t > t.back())) {
      t.push_back(r.t);
      y.push_back(r.sup_u);
    }
  }
  try {
    return classify_blowup(t, y);
  } catch (const ConfigError& e) {
    note = e.what();
    return std::nullopt;
  }
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '_') c = '_';
  }
  return s;
}

}  // namespace

int exit_code_for(RunStatus status) {
  switch (status) {
    case RunStatus::ReachedTEnd:
      return kExitOk;
    case RunStatus::SupNormGuard:
      return kExitSupNormGuard;
    case RunStatus::DtUnderflow:
      return kExitSolverFailure;
  }
  return kExitSolverFailure;
}

std::filesystem::path resolve_output_dir(const RunConfig& config, const std::filesystem::path& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (!config.output_dir.empty()) return config.output_dir;
  return std::filesystem::path("out") / config.label;
}

RunSummary execute_run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  RunSummary summary;
  const auto fail = [&](int code, const std::string& status, const std::string& what) {
    summary.exit_code = code;
    summary.status = status;
    log << "[" << config.label << "] " << status << ": " << what << '\n';
    return summary;
  };

  std::optional<RadialGrid> grid;
  std::optional<MotilitySpec> spec;
  State initial;
  try {
    grid.emplace(config.make_grid());
    spec.emplace(config.make_motility());
    summary.motility_report = validate_motility(*spec);
    if (!summary.motility_report.structurally_valid()) {
      std::string msg = "motility failed validation";
      for (const auto& m : summary.motility_report.messages) msg += "; " + m;
      return fail(kExitInvalidConfig, "InvalidConfig", msg);
    }
    for (const auto& m : summary.motility_report.messages) log << "[" << config.label << "] warning: " << m << '\n';
    initial = config.make_initial_state(*grid);
    check_initial_state(*grid, initial);
  } catch (const ConfigError& e) {
    return fail(kExitInvalidConfig, "InvalidConfig", e.what());
  }

  summary.initial = energy_report(*grid, initial);
  summary.initial_energy_literal = lyapunov(*grid, initial, kLiteralGradientWeight);
  summary.snapshot_times = config.options.snapshot_times;

  try {
    const RunResult result = run(*grid, *spec, initial, config.control, config.options);
    summary.status = std::string(to_string(result.status));
    summary.exit_code = exit_code_for(result.status);
    summary.monitors = result.monitors;
    summary.final_time = result.final_state.t;
    summary.final_sup_u = result.final_state.u.max();
    summary.classification = classify_records(config, result.records, summary.classification_note);

    std::filesystem::create_directories(out_dir);
    write_series_csv(out_dir / "series.csv", result.records);
    summary.snapshot_times.clear();
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
      write_snapshot_csv(out_dir / snapshot_file_name(k), *grid, result.snapshots[k]);
      summary.snapshot_times.push_back(result.snapshots[k].t);
    }
    write_meta_json(out_dir / "meta.json", config, summary);

    log << "[" << config.label << "] " << summary.status << " at t = " << summary.final_time
        << ", sup u = " << summary.final_sup_u << ", F0 = " << summary.initial.energy;
    if (summary.classification) log << ", classify = " << to_string(summary.classification->label);
    log << '\n';
    return summary;
  } catch (const SolverFailure& e) {
    fail(kExitSolverFailure, "SolverFailure", e.what());
  } catch (const InternalError& e) {
    fail(kExitSolverFailure, "SolverFailure", std::string("internal error: ") + e.what());
  } catch (const ConfigError& e) {
    return fail(kExitInvalidConfig, "InvalidConfig", e.what());
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (!ec) write_meta_json(out_dir / "meta.json", config, summary);
  return summary;
}

int cmd_run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  return execute_run(config, out_dir, log).exit_code;
}

int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, std::ostream& log) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    log << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  return cmd_run(config, resolve_output_dir(config, out_dir), log);
}

int cmd_verify(std::string_view suite, std::ostream& out, const VerifyOptions& options) {
  std::vector<CheckResult> results;
  try {
    results = run_verify(suite, options);
  } catch (const ConfigError& e) {
    out << e.what() << "; known suites: all";
    for (const auto& s : verify_suites()) out << ", " << s;
    out << '\n';
    return kExitInvalidConfig;
  }
  print_check_table(out, results);
  const bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
  return ok ? kExitOk : kExitCheckFailed;
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("CHEMOLAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::string> split_values(std::string_view csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', start), csv.size());
    std::string item(csv.substr(start, comma - start));
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
    start = comma + 1;
  }
  return out;
}

int cmd_sweep(const RunConfig& base, const std::string& axis, const std::vector<std::string>& values,
              const std::filesystem::path& out_dir, std::ostream& log, unsigned threads) {
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), axis) == keys.end()) {
    log << "sweep: unknown axis '" << axis << "'\n";
    return kExitInvalidConfig;
  }
  if (values.empty()) {
    log << "sweep: empty value list\n";
    return kExitInvalidConfig;
  }

  const std::size_t count = values.size();
  std::vector<SweepRow> rows(count);
  std::vector<std::string> logs(count);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t j = next++; j < count; j = next++) {
      std::ostringstream child_log;
      SweepRow& row = rows[j];
      row.axis = axis;
      row.value = values[j];
      try {
        RunConfig cfg = with_override(base, axis, values[j]);
        cfg.label = base.label + "_" + std::to_string(j);
        const auto dir = out_dir / (std::to_string(j) + "_" + sanitize(values[j]));
        const RunSummary s = execute_run(cfg, dir, child_log);
        row.exit_code = s.exit_code;
        row.status = s.status;
        if (s.status != "InvalidConfig") {
          row.initial_energy = s.initial.energy;
        }
        if (s.exit_code != kExitInvalidConfig && s.status != "SolverFailure") row.final_sup_u = s.final_sup_u;
        if (s.classification) row.label = std::string(to_string(s.classification->label));
      } catch (const ConfigError& e) {
        row.exit_code = kExitInvalidConfig;
        row.status = "InvalidConfig";
        child_log << "[" << values[j] << "] InvalidConfig: " << e.what() << '\n';
      }
      logs[j] = child_log.str();
    }
  };

  if (threads == 0) threads = sweep_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (axis == "grid.M" && count >= 3) {
    for (std::size_t j = 2; j < count; ++j) {
      if (rows[j].final_sup_u && rows[j - 1].final_sup_u && rows[j - 2].final_sup_u) {
        const double d1 = std::abs(*rows[j - 1].final_sup_u - *rows[j - 2].final_sup_u);
        const double d2 = std::abs(*rows[j].final_sup_u - *rows[j - 1].final_sup_u);
        if (d1 > 0.0 && d2 > 0.0) rows[j].refinement_order = std::log2(d1 / d2);
      }
    }
  }

  for (const auto& l : logs) log << l;
  write_sweep_summary(out_dir / "sweep_summary.csv", rows);
  int worst = kExitOk;
  for (const auto& r : rows) worst = std::max(worst, r.exit_code);
  return worst;
}

int cmd_sweep(const std::filesystem::path& config_path, const std::string& axis,
              const std::vector<std::string>& values, const std::filesystem::path& out_dir, std::ostream& log,
              unsigned threads) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    log << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  return cmd_sweep(config, axis, values, resolve_output_dir(config, out_dir), log, threads);
}

}  // namespace chemolab
