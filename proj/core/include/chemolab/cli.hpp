#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "chemolab/config.hpp"
#include "chemolab/output.hpp"
#include "chemolab/verify.hpp"

namespace chemolab {

/// Process exit codes shared by every verb.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInvalidConfig = 2,
  kExitSolverFailure = 3,
  kExitSupNormGuard = 4,
};

int exit_code_for(RunStatus status);

/// Output directory for a run: `override_dir` if non-empty, then run.out,
/// then out/<label>.
std::filesystem::path resolve_output_dir(const RunConfig& config, const std::filesystem::path& override_dir);

/// Runs one configuration and writes series.csv, snapshots and meta.json
/// into `out_dir`. Never throws for solver or config problems; the returned
/// summary carries the exit code.
RunSummary execute_run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

int cmd_run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);
/// Loads the config file first; a parse failure gives exit 2.
int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, std::ostream& log);

int cmd_verify(std::string_view suite, std::ostream& out, const VerifyOptions& options = {});

/// Concurrency for sweeps: CHEMOLAB_THREADS if set to a positive integer,
/// otherwise the hardware thread count.
unsigned sweep_threads();

/// One child run per value of `axis` (any config key). Children write into
/// numbered subdirectories of `out_dir`; sweep_summary.csv collects one row
/// per child. Exit code is the largest child exit code.
int cmd_sweep(const RunConfig& base, const std::string& axis, const std::vector<std::string>& values,
              const std::filesystem::path& out_dir, std::ostream& log, unsigned threads = 0);
int cmd_sweep(const std::filesystem::path& config_path, const std::string& axis,
              const std::vector<std::string>& values, const std::filesystem::path& out_dir, std::ostream& log,
              unsigned threads = 0);

/// Splits a comma-separated list, trimming blanks.
std::vector<std::string> split_values(std::string_view csv);

}  // namespace chemolab
