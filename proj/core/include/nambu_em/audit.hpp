#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nambu_em/dynamics.hpp"
#include "nambu_em/spectral_field.hpp"

namespace nambu_em {

enum class AuditClass { bracket_invariant, supercasimir, varying };

std::string_view to_string(AuditClass c);
inline bool is_conserved(AuditClass c) { return c != AuditClass::varying; }

/// Relative thresholds. rate applies to max_t |dF/dt| / rate_scale, drift to
/// max_t |F(t) − F(0)| / value_scale at t = 0.
struct AuditThresholds {
  double rate = 1e-12;
  double drift = 1e-10;
};

struct AuditRecord {
  std::string name;
  AuditClass cls = AuditClass::varying;
  double max_drift = 0.0;      // relative
  double rate_residual = 0.0;  // max |finite-difference rate − flow_rate| / rate_scale
  std::string notes;

  bool holomorphic = true;
  double bracket_rate_max = 0.0;  // relative; holomorphic functionals only
  double flow_rate_max = 0.0;     // relative
  double peak_deviation = 0.0;    // absolute max |F(t) − F(0)|
  Complex initial_value;
  Complex final_value;
};

struct AuditReport {
  IntegratorSpec integrator;
  std::size_t mode_count = 0;
  AuditThresholds thresholds;
  double fd_step = 0.0;
  std::vector<AuditRecord> records;
  bool aborted = false;
  std::string abort_reason;

  const AuditRecord* find(std::string_view name) const;

  /// True when none of I1, I2, S_formal, H that were audited is classed varying.
  bool expected_conserved_pass() const;
};

/// Functionals the bracket structure and the flow are expected to conserve.
std::span<const std::string_view> expected_conserved();

/// Evolves the state, records every functional's time series, and classifies
/// each one:
///  - bracket_invariant: holomorphic, max relative [F, I1, I2] ≤ rate and drift ≤ drift;
///  - supercasimir: not a bracket invariant, but max relative flow_rate ≤ rate
///    and drift ≤ drift;
///  - varying: otherwise.
/// rate_residual compares flow_rate with a five-point central difference of F
/// along the exact flow around every recorded state. An empty name list audits
/// the whole registry.
AuditReport run_audit(const SpectralState& state, const IntegratorSpec& spec,
                      const std::vector<std::string>& functionals = {},
                      const AuditThresholds& thresholds = {});

/// i Σ w [(k·Ẽ)² + (k·B̃)² − |k|²(Ẽ·Ẽ + B̃·B̃)]: closed form of dG/dt.
Complex analytic_g_rate(const SpectralState& state);

/// Residuals (relative to the corresponding rate scale) of the derived rate
/// identities d(H_formal)/dt = −4i·G and dG/dt = analytic_g_rate, each checked
/// through the bracket, through flow_rate, and through central differences of
/// the exact trajectory with step fd_step.
struct RateCrosscheck {
  double h_formal_bracket = 0.0;
  double h_formal_flow = 0.0;
  double h_formal_fd = 0.0;
  double g_bracket = 0.0;
  double g_flow = 0.0;
  double g_fd = 0.0;

  double worst() const;
};

RateCrosscheck rate_crosscheck(const SpectralState& state, double fd_step = 1e-4);

/// Aligned plain-text table of the records.
std::string render_table(const AuditReport& report);

}  // namespace nambu_em
