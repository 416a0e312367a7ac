#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "chemolab/grid.hpp"

namespace chemolab {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
};

using LaplacianOperator = std::function<Field(const RadialGrid&, const Field&)>;

struct VerifyOptions {
  /// Operator under test in the grid suite. Swapped out for fault injection.
  LaplacianOperator laplacian = apply_laplacian;
};

/// Laplacian with a spurious outward flux through r = R (relaxation towards
/// zero at rate `leak`). Exists so the verifier can prove it detects leaks.
LaplacianOperator leaky_boundary_laplacian(double leak = 1.0);

/// Names of the individual suites, in execution order. "all" runs every one.
const std::vector<std::string>& verify_suites();

/// Runs one suite, or every suite for "all". Throws ConfigError for an
/// unknown name.
std::vector<CheckResult> run_verify(std::string_view suite, const VerifyOptions& options = {});

void print_check_table(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace chemolab
