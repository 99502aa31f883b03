#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "nambu_em/vec3.hpp"

namespace nambu_em {

inline constexpr double kDefaultConstraintTol = 1e-12;

/// Periodic rectangular grid of nx×ny×nz wave vectors over a box of side
/// lengths lx, ly, lz. Modes are stored row-major with z fastest.
struct GridDescriptor {
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> length{1.0, 1.0, 1.0};

  std::size_t size() const;
  std::size_t flat(const std::array<int, 3>& idx) const;
  std::array<int, 3> unflatten(std::size_t flat_index) const;

  /// Signed wavenumber index of a storage index along one axis:
  /// i ≤ n/2 maps to i, larger values wrap to i − n.
  int signed_index(int axis, int i) const;
  std::array<int, 3> signed_indices(std::size_t flat_index) const;

  /// Storage index of a signed wavenumber triple (taken modulo the grid).
  std::size_t flat_from_signed(const std::array<int, 3>& signed_idx) const;

  /// k = 2π(n_x/lx, n_y/ly, n_z/lz).
  WaveVector wave_vector(std::size_t flat_index) const;

  /// True when any axis with even n sits on its Nyquist index n/2.
  bool is_nyquist(std::size_t flat_index) const;

  /// Throws InvalidArgument unless every n ≥ 1 and every length is finite and > 0.
  void check() const;

  friend bool operator==(const GridDescriptor&, const GridDescriptor&) = default;
};

/// Index of the mode at −k: componentwise negation modulo the grid size.
std::size_t hermitian_pair_index(const GridDescriptor& grid, std::size_t mode_index);

struct Mode {
  WaveVector k;
  ComplexVec3 e;  // Ẽ(k)
  ComplexVec3 b;  // B̃(k)
  double weight = 1.0;
  std::optional<std::size_t> hermitian_partner;
};

/// Immutable spectral phase-space point: the mode list, the frozen Gauss-law
/// values c(k) recorded at ingestion, and an optional grid descriptor.
///
/// Without a grid the state is an "explicit mode list"; Hermitian pairing is
/// then whatever the modes declare. With a grid the modes are exactly the
/// grid points in storage order and pairing is filled in automatically.
class SpectralState {
 public:
  SpectralState() = default;

  /// Ingests modes and records c(k) := k·Ẽ(k).
  static SpectralState ingest(std::vector<Mode> modes);
  static SpectralState ingest(const GridDescriptor& grid, std::vector<Mode> modes);

  /// Builds a state with explicitly supplied constraint values (used when
  /// loading snapshots or prescribing charge).
  SpectralState(std::vector<Mode> modes, std::vector<Complex> charge,
                std::optional<GridDescriptor> grid = std::nullopt);

  const std::vector<Mode>& modes() const noexcept { return modes_; }
  const Mode& mode(std::size_t j) const { return modes_.at(j); }
  std::size_t size() const noexcept { return modes_.size(); }
  bool empty() const noexcept { return modes_.empty(); }

  const std::vector<Complex>& charge() const noexcept { return charge_; }
  const std::optional<GridDescriptor>& grid() const noexcept { return grid_; }

  /// True when at least one mode declares a Hermitian partner.
  bool hermitian_paired() const;

  /// Same wave vectors, weights, pairing, constraint values and grid; new
  /// field amplitudes. This is the only way evolution produces states, so c(k)
  /// can never change along a trajectory.
  SpectralState with_fields(std::vector<ComplexVec3> e, std::vector<ComplexVec3> b) const;

  /// max |k|, or 0 for an empty state.
  double max_wavenumber() const;

  /// Σ w (|Ẽ|² + |B̃|²): the reference magnitude for relative tolerances.
  double energy_norm() const;

  bool is_finite() const;

 private:
  void check_structure() const;

  std::vector<Mode> modes_;
  std::vector<Complex> charge_;
  std::optional<GridDescriptor> grid_;
};

/// Partner of mode j: modular negation on grid states, the declared partner on
/// explicit lists. Throws NoHermitianPairing when an explicit mode declares none.
std::size_t hermitian_pair_index(const SpectralState& state, std::size_t mode_index);

enum class ConstraintKind { gauss_e, gauss_b, hermitian, nyquist };

std::string_view to_string(ConstraintKind kind);

struct Violation {
  ConstraintKind kind;
  std::size_t mode_index;  // worst offender
  double magnitude;        // max violation over the class
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  const Violation* find(ConstraintKind kind) const;
};

/// Per-class maxima of the constraint residuals (always computed, even when
/// below tolerance).
struct ConstraintResiduals {
  double gauss_e = 0.0;
  double gauss_b = 0.0;
  double hermitian = 0.0;
  double nyquist = 0.0;
};

ConstraintResiduals constraint_residuals(const SpectralState& state);

/// Reports, per constraint class, the worst violation exceeding tol. Never throws
/// on constraint breaches. tol must be > 0.
ValidationReport validate(const SpectralState& state, double tol = kDefaultConstraintTol);

/// Per mode: B̃ made transverse and Ẽ's longitudinal part reset to c(k)k/|k|².
/// The zero mode is left untouched; throws ConstraintError when c(0) ≠ 0.
SpectralState project_constraints(const SpectralState& state);

/// Keeps the modes accepted by keep, as an explicit mode list. Hermitian
/// partners are remapped; the kept set must be closed under pairing.
SpectralState select_modes(const SpectralState& state,
                           const std::function<bool(std::size_t)>& keep);

}  // namespace nambu_em
