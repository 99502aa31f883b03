#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nambu_em/spectral_field.hpp"

namespace nambu_em {

enum class IntegratorKind { exact, midpoint, rk4 };

std::string_view to_string(IntegratorKind kind);
std::optional<IntegratorKind> parse_integrator(std::string_view name);

struct IntegratorSpec {
  IntegratorKind kind = IntegratorKind::exact;
  double dt = 0.01;
  std::size_t steps = 1;
  std::size_t snapshot_every = 1;

  /// Throws InvalidArgument unless dt > 0 finite, steps ≥ 1, snapshot_every ≥ 1.
  void check() const;
};

/// Closed-form per-mode propagator: longitudinal parts frozen, transverse
/// parts rotating at frequency |k|.
SpectralState exact_step(const SpectralState& state, double dt);

/// Implicit midpoint (Cayley) step, one 6×6 complex solve per mode.
SpectralState midpoint_step(const SpectralState& state, double dt);

/// Classical four-stage Runge–Kutta on the closed-form right-hand side.
SpectralState rk4_step(const SpectralState& state, double dt);

SpectralState step(IntegratorKind kind, const SpectralState& state, double dt);

/// Cayley map (I − h/2 M)⁻¹(I + h/2 M) of the per-mode generator M acting on
/// (Ẽ, B̃). The 6×6 system is solved once by Gaussian elimination with partial
/// pivoting; apply() is then a matrix-vector product. Throws NumericalError if
/// a pivot degenerates.
class CayleyPropagator {
 public:
  using Matrix = std::array<std::array<Complex, 6>, 6>;

  CayleyPropagator(const WaveVector& k, double dt);
  void apply(ComplexVec3& e, ComplexVec3& b) const;
  const Matrix& matrix() const noexcept { return map_; }

  /// The generator M with d(Ẽ, B̃)/dt = M (Ẽ, B̃).
  static Matrix generator(const WaveVector& k);

 private:
  Matrix map_{};
};

/// Per-mode data for the closed-form rotation at a fixed dt.
struct RotationCoefficients {
  WaveVector unit_k;
  double cos_wt = 1.0;
  double sin_wt = 0.0;
  bool zero_mode = true;

  RotationCoefficients() = default;
  RotationCoefficients(const WaveVector& k, double dt);
  void apply(ComplexVec3& e, ComplexVec3& b) const;
};

/// Stateful stepper that caches per-mode work (Cayley factorizations,
/// rotation angles) for a fixed dt.
class Stepper {
 public:
  Stepper(IntegratorKind kind, const SpectralState& layout, double dt);
  SpectralState advance(const SpectralState& state) const;

 private:
  IntegratorKind kind_;
  double dt_;
  std::size_t mode_count_;
  std::vector<CayleyPropagator> cayley_;
  std::vector<RotationCoefficients> rotation_;
};

struct Snapshot {
  double t;
  SpectralState state;
};

struct DiagnosticRecord {
  double t = 0.0;
  std::vector<Complex> values;  // one per functional name, trajectory order
  double gauss_max = 0.0;
  double herm_max = 0.0;
};

struct Trajectory {
  std::vector<std::string> functional_names;
  std::vector<Snapshot> snapshots;
  std::vector<DiagnosticRecord> diagnostics;
  bool aborted = false;
  std::string abort_reason;
};

/// Advances spec.steps steps, recording diagnostics at t = 0 and after every
/// step (steps+1 records) and snapshots at t = 0 and every snapshot_every
/// steps. Non-finite states or step errors stop the run and flag the partial
/// trajectory instead of throwing. An empty name list records every
/// registered functional.
Trajectory simulate(const SpectralState& state, const IntegratorSpec& spec,
                    const std::vector<std::string>& functionals = {});

}  // namespace nambu_em
