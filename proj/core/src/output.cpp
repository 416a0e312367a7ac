#include "chemolab/output.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "chemolab/error.hpp"
#include "json.hpp"

namespace chemolab {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw SolverFailure("cannot write " + path.string());
  return out;
}

nlohmann::json to_json(const ValidationReport& r) {
  return {{"positivity", r.positivity},
          {"monotonicity", r.monotonicity},
          {"vanishing", r.vanishing},
          {"structurally_valid", r.structurally_valid()},
          {"s_max", r.s_max},
          {"vanish_tol", r.vanish_tol},
          {"gamma_at_s_max", r.gamma_at_s_max},
          {"max_derivative_mismatch", r.max_derivative_mismatch},
          {"messages", r.messages}};
}

nlohmann::json to_json(const RunMonitors& m) {
  return {{"steps_accepted", m.steps_accepted},
          {"steps_retried", m.steps_retried},
          {"initial_mass", m.initial_mass},
          {"max_step_mass_drift_rel", m.max_step_mass_drift_rel},
          {"total_mass_drift_rel", m.total_mass_drift_rel},
          {"min_u", m.min_u},
          {"min_w", m.min_w},
          {"sup_w0", m.sup_w0},
          {"max_growth_margin_rel", m.max_growth_margin_rel},
          {"max_energy_increase_rel", m.max_energy_increase_rel},
          {"energy_violations", m.energy_violations},
          {"max_energy_increase_rel_literal", m.max_energy_increase_rel_literal},
          {"energy_violations_literal", m.energy_violations_literal},
          {"max_w_residual_next", m.max_w_residual_next},
          {"max_w_residual_prev", m.max_w_residual_prev},
          {"max_z_residual", m.max_z_residual},
          {"max_dissipation_residual", m.max_dissipation_residual},
          {"max_dissipation_residual_with_signal_term", m.max_dissipation_residual_full},
          {"best_fit_gradient_weight", m.best_fit_gradient_weight},
          {"min_dt", m.min_dt},
          {"max_dt", m.max_dt}};
}

nlohmann::json to_json(const BlowupClassification& c) {
  return {{"label", std::string(to_string(c.label))},
          {"ambiguous", c.ambiguous},
          {"growth_per_decade", c.growth_per_decade},
          {"r2_loglog", c.r2_loglog},
          {"r2_semilog", c.r2_semilog},
          {"growth_slope", c.growth_slope},
          {"r2_singular", c.r2_singular},
          {"t_star", c.t_star},
          {"t_star_interior", c.t_star_interior},
          {"singular_exponent", c.singular_exponent},
          {"tail_samples", c.tail_samples}};
}

std::string optional_number(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

}  // namespace

const std::vector<std::string>& series_columns() {
  static const std::vector<std::string> cols = {"t",      "dt_used",  "mass",  "F",     "D",    "w_identity_residual",
                                                "w_growth_margin", "vw_ratio", "sup_u", "sup_v", "min_u"};
  return cols;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_series_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records) {
  const auto& cols = series_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : records) {
    out << format_number(r.t) << ',' << format_number(r.dt_used) << ',' << format_number(r.mass) << ','
        << format_number(r.energy) << ',' << optional_number(r.dissipation) << ','
        << format_number(r.w_identity_residual) << ',' << format_number(r.w_growth_margin) << ','
        << format_number(r.vw_ratio) << ',' << format_number(r.sup_u) << ',' << format_number(r.sup_v) << ','
        << format_number(r.min_u) << '\n';
  }
}

void write_series_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records) {
  auto out = open_for_write(path);
  write_series_csv(out, records);
}

void write_snapshot_csv(const std::filesystem::path& path, const RadialGrid& grid, const State& state) {
  const Field w = aux_w(grid, state);
  auto out = open_for_write(path);
  out << "r,u,v,w\n";
  const auto& r = grid.centers();
  for (std::size_t i = 0; i < grid.cells(); ++i) {
    out << format_number(r[i]) << ',' << format_number(state.u[i]) << ',' << format_number(state.v[i]) << ','
        << format_number(w[i]) << '\n';
  }
}

std::string snapshot_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%04zu.csv", index);
  return buf;
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

void write_meta_json(const std::filesystem::path& path, const RunConfig& config, const RunSummary& summary) {
  nlohmann::json meta;
  meta["artifact"] = "chemolab";
  meta["artifact_version"] = kArtifactVersion;
  meta["label"] = config.label;
  meta["config_hash"] = config_hash(config.source_text);
  meta["config_text"] = config.source_text;
  meta["config"] = config.entries;
  meta["resolved"] = {{"grid", {{"n", config.dimension}, {"R", config.radius}, {"M", config.cells}}},
                      {"motility", config.make_motility().label()},
                      {"scenario", std::string(to_string(config.scenario.kind))},
                      {"stepper",
                       {{"dt_init", config.control.dt_init},
                        {"dt_min", config.control.dt_min},
                        {"dt_max", config.control.dt_max},
                        {"safety", config.control.safety},
                        {"growth_cap", config.control.growth_cap},
                        {"target_rel_change", config.control.target_rel_change},
                        {"neg_tol", config.options.neg_tol_rel}}},
                      {"run",
                       {{"T_end", config.options.t_end},
                        {"sample_every", config.options.sample_every},
                        {"samples_per_decade", config.options.samples_per_decade},
                        {"sup_guard", config.options.sup_guard},
                        {"energy_tol", config.options.energy_tol},
                        {"classify_from", config.classify_from}}}};
  if (config.scenario.kind == ScenarioKind::SmallMassBump || config.scenario.kind == ScenarioKind::NegativeEnergyBump) {
    meta["initial_signal_construction"] = "v0 = (I - Delta_h)^{-1} u0";
  }
  meta["motility_validation"] = to_json(summary.motility_report);
  meta["initial_energy_report"] = {{"mass", summary.initial.mass},
                                   {"F", summary.initial.energy},
                                   {"F_gradient_weight", kLyapunovGradientWeight},
                                   {"F_literal", summary.initial_energy_literal},
                                   {"F_literal_gradient_weight", kLiteralGradientWeight},
                                   {"sup_u", summary.initial.sup_u},
                                   {"sup_v", summary.initial.sup_v}};
  meta["status"] = summary.status;
  meta["exit_code"] = summary.exit_code;
  meta["final_time"] = summary.final_time;
  meta["final_sup_u"] = summary.final_sup_u;
  const ClassifierThresholds thresholds;
  meta["classifier_thresholds"] = {{"bounded_growth_per_decade", thresholds.bounded_growth_per_decade},
                                   {"min_r2", thresholds.min_r2},
                                   {"horizon_factor", thresholds.horizon_factor}};
  if (summary.classification) {
    meta["classification"] = to_json(*summary.classification);
  } else {
    meta["classification"] = nullptr;
  }
  if (!summary.classification_note.empty()) meta["classification_note"] = summary.classification_note;
  meta["monitors"] = to_json(summary.monitors);
  nlohmann::json snaps = nlohmann::json::array();
  for (std::size_t k = 0; k < summary.snapshot_times.size(); ++k) {
    snaps.push_back({{"t", summary.snapshot_times[k]}, {"file", snapshot_file_name(k)}});
  }
  meta["snapshots"] = snaps;
  meta["series"] = {{"file", "series.csv"}, {"columns", series_columns()}};

  auto out = open_for_write(path);
  out << meta.dump(2) << '\n';
}

void write_sweep_summary(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  auto out = open_for_write(path);
  out << "axis,value,final_sup_u,F0,status,classify_label,exit_code,refinement_order\n";
  for (const auto& r : rows) {
    out << r.axis << ',' << r.value << ',' << optional_number(r.final_sup_u) << ','
        << optional_number(r.initial_energy) << ',' << r.status << ',' << r.label << ',' << r.exit_code << ','
        << optional_number(r.refinement_order) << '\n';
  }
}

}  // namespace chemolab
