#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "nambu_em/spectral_field.hpp"

namespace nambu_em {

/// Real vector fields sampled on a periodic lattice, row-major with z fastest.
/// Point (ix, iy, iz) sits at (ix·lx/nx, iy·ly/ny, iz·lz/nz).
struct LatticeField {
  std::array<int, 3> dims{1, 1, 1};
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  std::vector<std::array<double, 3>> e;
  std::vector<std::array<double, 3>> b;
  std::optional<std::vector<double>> rho;

  std::size_t size() const;
  GridDescriptor grid() const { return {dims, lengths}; }

  /// Throws InvalidState on bad dims or sample counts, NonFiniteSample on NaN/inf.
  void check() const;

  static LatticeField zeros(const std::array<int, 3>& dims, const std::array<double, 3>& lengths);
};

/// separable: one-dimensional DFTs along each axis in turn, O(N·(nx+ny+nz)).
/// direct: the full triple sum, O(N²); a cross-check for small grids.
enum class TransformPath { separable, direct };

/// Ẽ(k) = (1/N) Σ_x E(x) e^{−ik·x}, likewise B̃. Nyquist modes must carry
/// amplitude ≤ tol (NyquistNonzero otherwise) and are zeroed. Weights are 1,
/// pairing follows the grid, and c(k) is frozen from the transformed field.
SpectralState to_spectral(const LatticeField& field, double tol = kDefaultConstraintTol,
                          TransformPath path = TransformPath::separable);

/// E(x) = Σ_k Ẽ(k) e^{ik·x}. Requires a grid-tagged state (NoGrid) whose
/// Hermitian residual is ≤ tol (NotHermitian); imaginary residue above
/// 1e-12·max(1, max|E|) is rejected as NotHermitian as well.
LatticeField to_lattice(const SpectralState& state, double tol = kDefaultConstraintTol,
                        TransformPath path = TransformPath::separable);

/// |Σ_k(|Ẽ|²+|B̃|²) − (1/N)Σ_x(E²+B²)| / max(both); zero when both vanish.
double parseval_check(const LatticeField& field, const SpectralState& state);

enum class IcKind { plane_wave, standing_wave, random_solenoidal, coulomb_static };

std::string_view to_string(IcKind kind);
std::optional<IcKind> parse_ic_kind(std::string_view name);

/// Prescribed Gauss-law value c(k) at one grid mode (signed indices).
struct ChargeEntry {
  std::array<int, 3> mode{};
  Complex c;
};

struct IcParams {
  IcKind kind = IcKind::plane_wave;
  GridDescriptor grid;

  // plane_wave / standing_wave
  std::array<int, 3> mode{0, 0, 1};
  double amplitude = 1.0;
  std::array<double, 3> polarization{1.0, 0.0, 0.0};

  // random_solenoidal: Gaussian transverse amplitudes scaled by |k|^exponent
  // on 0 < |k| ≤ cutoff_fraction·max|k|.
  std::uint64_t seed = 0;
  double spectrum_exponent = 0.0;
  double cutoff_fraction = 0.5;

  // coulomb_static
  std::vector<ChargeEntry> charges;

  /// When set, only modes with |signed index| ≤ band_radius are kept and the
  /// result is an explicit mode list.
  std::optional<double> band_radius;
};

/// Initial-condition generators. All outputs satisfy validate at 1e-13.
///  - plane_wave: Ẽ(k) = (amp/2)p̂, B̃(k) = k̂×Ẽ(k) at the given mode, conjugates at −k,
///    i.e. E(x) = amp·p̂·cos(k·x − |k|t) at t = 0.
///  - standing_wave: the same mode pair with B̃ = 0, i.e. the t = 0 slice of
///    E = amp·p̂·cos(k·x)cos(|k|t), B = amp·(k̂×p̂)·sin(k·x)sin(|k|t).
///  - random_solenoidal: seeded, Hermitian, transverse.
///  - coulomb_static: Ẽ = c(k)k/|k|², B̃ = 0, with Hermitian partners filled in.
/// Throws InvalidArgument (polarization not orthogonal to k, bad mode index)
/// or ConstraintError (charge on the zero mode).
SpectralState make_ic(const IcParams& params);

}  // namespace nambu_em
