#include "chemolab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chemolab/error.hpp"

namespace chemolab {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw ConfigError("config: " + key + " expects a number, got '" + text + "'");
  }
  return value;
}

long parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("config: " + key + " expects an integer, got '" + text + "'");
  }
  return value;
}

// Accepts plain numbers and "R/x" relative to the ball radius.
double parse_length(const std::string& key, const std::string& text, double radius) {
  const std::string t = trim(text);
  if (t.size() > 2 && (t[0] == 'R' || t[0] == 'r') && t[1] == '/') {
    const double divisor = parse_double(key, t.substr(2));
    if (divisor == 0.0) throw ConfigError("config: " + key + " divides R by zero");
    return radius / divisor;
  }
  return parse_double(key, t);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

MotilityKind parse_motility_kind(const std::string& name) {
  if (name == "exponential") return MotilityKind::Exponential;
  if (name == "power_law") return MotilityKind::PowerLaw;
  if (name == "custom") throw ConfigError("config: custom motility is only available through the library API");
  throw ConfigError("config: unknown motility.kind '" + name + "'");
}

void apply_entries(RunConfig& cfg) {
  const auto& e = cfg.entries;
  auto get = [&](const char* key) -> const std::string* {
    const auto it = e.find(key);
    return it == e.end() ? nullptr : &it->second;
  };

  if (auto s = get("grid.n")) cfg.dimension = static_cast<int>(parse_integer("grid.n", *s));
  if (auto s = get("grid.R")) cfg.radius = parse_double("grid.R", *s);
  if (auto s = get("grid.M")) {
    const long m = parse_integer("grid.M", *s);
    if (m < 0) throw ConfigError("config: grid.M must be positive");
    cfg.cells = static_cast<std::size_t>(m);
  }

  if (auto s = get("motility.kind")) cfg.motility_kind = parse_motility_kind(*s);
  if (auto s = get("motility.k")) cfg.motility_exponent = parse_double("motility.k", *s);

  ScenarioSpec& sc = cfg.scenario;
  if (auto s = get("scenario.kind")) sc.kind = parse_scenario_kind(*s);
  if (auto s = get("scenario.c")) sc.level = parse_double("scenario.c", *s);
  if (auto s = get("scenario.m")) {
    sc.mass = parse_double("scenario.m", *s);
    sc.rescale_custom = true;
  }
  if (auto s = get("scenario.width")) sc.width = parse_length("scenario.width", *s, cfg.radius);
  if (auto s = get("scenario.epsilon")) sc.epsilon = parse_length("scenario.epsilon", *s, cfg.radius);
  if (auto s = get("scenario.profile")) cfg.profile_path = *s;

  StepControl& ctl = cfg.control;
  if (auto s = get("stepper.dt_init")) ctl.dt_init = parse_double("stepper.dt_init", *s);
  if (auto s = get("stepper.dt_min")) ctl.dt_min = parse_double("stepper.dt_min", *s);
  if (auto s = get("stepper.dt_max")) ctl.dt_max = parse_double("stepper.dt_max", *s);
  if (auto s = get("stepper.safety")) ctl.safety = parse_double("stepper.safety", *s);
  if (auto s = get("stepper.growth_cap")) ctl.growth_cap = parse_double("stepper.growth_cap", *s);
  if (auto s = get("stepper.target_rel_change")) {
    ctl.target_rel_change = parse_double("stepper.target_rel_change", *s);
  }

  RunOptions& opt = cfg.options;
  if (auto s = get("stepper.neg_tol")) opt.neg_tol_rel = parse_double("stepper.neg_tol", *s);
  if (auto s = get("run.T_end")) opt.t_end = parse_double("run.T_end", *s);
  if (auto s = get("run.sample_every")) opt.sample_every = parse_double("run.sample_every", *s);
  if (auto s = get("run.samples_per_decade")) {
    opt.samples_per_decade = static_cast<int>(parse_integer("run.samples_per_decade", *s));
  }
  if (auto s = get("run.snapshot_times")) opt.snapshot_times = parse_list("run.snapshot_times", *s);
  if (auto s = get("run.sup_guard")) opt.sup_guard = parse_double("run.sup_guard", *s);
  if (auto s = get("run.energy_tol")) opt.energy_tol = parse_double("run.energy_tol", *s);
  if (auto s = get("run.classify_from")) cfg.classify_from = parse_double("run.classify_from", *s);
  if (auto s = get("run.label")) cfg.label = *s;
  if (auto s = get("run.out")) cfg.output_dir = *s;
}

// Module preconditions, checked before any compute.
void validate(const RunConfig& cfg) {
  (void)cfg.make_grid();
  (void)cfg.make_motility();
  cfg.control.validate();
  if (!(cfg.options.t_end > 0.0)) throw ConfigError("config: run.T_end must be positive");
  if (!(cfg.options.sample_every > 0.0)) throw ConfigError("config: run.sample_every must be positive");
  if (cfg.options.samples_per_decade < 0) throw ConfigError("config: run.samples_per_decade must be >= 0");
  if (!(cfg.options.sup_guard > 0.0)) throw ConfigError("config: run.sup_guard must be positive");
  if (!(cfg.options.neg_tol_rel >= 0.0)) throw ConfigError("config: stepper.neg_tol must be >= 0");
  if (cfg.scenario.kind == ScenarioKind::Custom && cfg.profile_path.empty()) {
    throw ConfigError("config: scenario.kind = custom needs scenario.profile");
  }
  if (cfg.label.empty() || cfg.label.find('/') != std::string::npos) {
    throw ConfigError("config: run.label must be a non-empty name without '/'");
  }
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "grid.n",          "grid.R",           "grid.M",
      "motility.kind",   "motility.k",       "scenario.kind",
      "scenario.c",      "scenario.m",       "scenario.width",
      "scenario.epsilon", "scenario.profile", "stepper.dt_init",
      "stepper.dt_min",  "stepper.dt_max",   "stepper.safety",
      "stepper.growth_cap", "stepper.target_rel_change", "stepper.neg_tol",
      "run.T_end",       "run.sample_every", "run.samples_per_decade",
      "run.snapshot_times", "run.sup_guard", "run.energy_tol",
      "run.classify_from", "run.label",       "run.out"};
  return keys;
}

RadialGrid RunConfig::make_grid() const { return RadialGrid(dimension, radius, cells); }

MotilitySpec RunConfig::make_motility() const {
  switch (motility_kind) {
    case MotilityKind::Exponential:
      return MotilitySpec::exponential();
    case MotilityKind::PowerLaw:
      return MotilitySpec::power_law(motility_exponent);
    case MotilityKind::Custom:
      break;
  }
  throw ConfigError("config: custom motility is only available through the library API");
}

State RunConfig::make_initial_state(const RadialGrid& grid) const {
  if (scenario.kind == ScenarioKind::Custom) {
    ScenarioSpec spec = scenario;
    spec.table = load_profile_table(profile_path);
    return make_initial(grid, spec);
  }
  return make_initial(grid, scenario);
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  cfg.source_text = std::string(text);
  cfg.scenario.rescale_custom = false;

  const auto& keys = config_keys();
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (value.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty value for " + key);
    cfg.entries[key] = value;
  }
  apply_entries(cfg);
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RunConfig with_override(const RunConfig& base, const std::string& key, const std::string& value) {
  std::string text = base.source_text;
  if (!text.empty() && text.back() != '\n') text += '\n';
  text += key + " = " + value + "\n";
  return parse_config(text);
}

ProfileTable load_profile_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("profile: cannot open " + path.string());
  ProfileTable table;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (header) {
      if (trim(line) != "r,u,v") throw ConfigError("profile: header must be 'r,u,v'");
      header = false;
      continue;
    }
    const auto values = parse_list("profile row", line);
    if (values.size() != 3) throw ConfigError("profile: each row needs exactly three numbers");
    table.r.push_back(values[0]);
    table.u.push_back(values[1]);
    table.v.push_back(values[2]);
  }
  return table;
}

}  // namespace chemolab
