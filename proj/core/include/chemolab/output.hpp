#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chemolab/config.hpp"
#include "chemolab/diagnostics.hpp"
#include "chemolab/motility.hpp"
#include "chemolab/scenarios.hpp"
#include "chemolab/stepper.hpp"

namespace chemolab {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Column order of series.csv.
const std::vector<std::string>& series_columns();

/// Formats with 17 significant digits, which round-trips every double.
std::string format_number(double x);

void write_series_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records);
void write_series_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);

/// Columns r,u,v,w with w = (I - Delta_h)^{-1} u.
void write_snapshot_csv(const std::filesystem::path& path, const RadialGrid& grid, const State& state);

/// File name used for the k-th snapshot.
std::string snapshot_file_name(std::size_t index);

/// Hex FNV-1a hash of the config source text, used to tag figures.
std::string config_hash(const std::string& text);

struct RunSummary {
  /// A RunStatus name, or "SolverFailure" when the run was aborted.
  std::string status = "ReachedTEnd";
  int exit_code = 0;
  EnergyReport initial;
  double initial_energy_literal = 0.0;
  ValidationReport motility_report;
  std::optional<BlowupClassification> classification;
  std::string classification_note;
  RunMonitors monitors;
  std::vector<double> snapshot_times;
  double final_sup_u = 0.0;
  double final_time = 0.0;
};

void write_meta_json(const std::filesystem::path& path, const RunConfig& config, const RunSummary& summary);

struct SweepRow {
  std::string axis;
  std::string value;
  std::optional<double> final_sup_u;
  std::optional<double> initial_energy;
  std::string status;
  std::string label;
  int exit_code = 0;
  /// log2 of successive-difference ratios of final sup u; only filled for
  /// grid.M sweeps with at least three rows.
  std::optional<double> refinement_order;
};

/// Header: axis,value,final_sup_u,F0,status,classify_label,exit_code,refinement_order.
void write_sweep_summary(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

}  // namespace chemolab
