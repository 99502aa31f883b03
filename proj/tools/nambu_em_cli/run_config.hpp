#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nambu_em/dynamics.hpp"
#include "nambu_em/realspace_bridge.hpp"
#include "nambu_em/spectral_field.hpp"

namespace nambu_em::cli {

/// Bad config text or field values. The message carries origin, line when
/// known, and the dotted field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputSpec {
  std::filesystem::path directory = "nambu_em_out";
  bool snapshots = true;
};

struct ToleranceSpec {
  double constraint = kDefaultConstraintTol;
  double audit_rate = 1e-12;
  double audit_drift = 1e-10;
  double crosscheck = 1e-6;
  double order_window = 0.1;
};

struct ConvergenceSpec {
  std::optional<double> dt;          // defaults to integrator.dt
  std::optional<std::size_t> steps;  // defaults to integrator.steps
  std::size_t halvings = 5;
};

struct RunConfig {
  // Source: a grid with an initial condition, or an explicit state snapshot.
  std::optional<GridDescriptor> grid;
  IcParams ic;
  std::optional<std::filesystem::path> modes;

  IntegratorSpec integrator;
  std::vector<std::string> functionals;  // empty: the whole registry
  OutputSpec outputs;
  ToleranceSpec tolerances;
  ConvergenceSpec convergence;

  /// Effective document after command-line overrides.
  nlohmann::json document;
};

/// Parses config text. origin names the source in diagnostics; relative
/// "modes" paths resolve against base_dir.
RunConfig parse_config(std::string_view text, std::string_view origin,
                       const std::filesystem::path& base_dir = {});

RunConfig load_config(const std::filesystem::path& path);

/// Re-parses after replacing ic.seed and/or outputs.directory.
RunConfig apply_overrides(const RunConfig& config, std::optional<std::uint64_t> seed,
                          const std::optional<std::filesystem::path>& out_dir,
                          const std::filesystem::path& base_dir = {});

/// FNV-1a over the canonical effective document, excluding
/// outputs.directory, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Names of the committed presets.
std::vector<std::string> preset_names();

/// Preset config text; throws ConfigError for unknown names.
std::string_view preset_text(std::string_view name);

}  // namespace nambu_em::cli
