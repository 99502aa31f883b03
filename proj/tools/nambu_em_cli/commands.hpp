#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nambu_em/spectral_field.hpp"
#include "run_config.hpp"

namespace nambu_em::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitRegression = 4,
};

/// Builds the initial state named by the config (generator or snapshot file).
SpectralState initial_state(const RunConfig& config);

/// diagnostics.csv, optional snapshots/, summary.json. Exit 3 on numerical abort.
int cmd_run(const RunConfig& config, std::ostream& log);

/// audit_report.json and audit_report.txt. Exit 4 when an expected-conserved
/// quantity is classed varying or the rate cross-check exceeds tolerance.
int cmd_audit(const RunConfig& config, std::ostream& log);

/// Error against the exact propagator over repeated dt halvings;
/// convergence.csv. Exit 2 for the exact integrator, 4 when an observed order
/// leaves [p − window, p + window].
int cmd_convergence(const RunConfig& config, std::ostream& log);

/// initial_state.json, plus lattice.json for grid states.
int cmd_ic(const RunConfig& config, std::ostream& log);

/// Full command line: `nambu-em run|audit|convergence|ic --config <path>
/// [--out <dir>] [--seed <u64>] [--preset <name>]`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nambu_em::cli
