#include "nambu_em/realspace_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "nambu_em/errors.hpp"
#include "nambu_em/parallel.hpp"
#include "nambu_em/summation.hpp"

namespace nambu_em {

std::size_t LatticeField::size() const {
  return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
         static_cast<std::size_t>(dims[2]);
}

void LatticeField::check() const {
  try {
    grid().check();
  } catch (const InvalidArgument& err) {
    throw InvalidState(err.what());
  }
  const std::size_t n = size();
  if (e.size() != n || b.size() != n) {
    throw InvalidState("lattice needs " + std::to_string(n) + " samples per field");
  }
  if (rho && rho->size() != n) throw InvalidState("charge samples do not match the lattice");
  const auto finite3 = [](const std::array<double, 3>& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!finite3(e[i]) || !finite3(b[i])) {
      throw NonFiniteSample("non-finite field sample at lattice point " + std::to_string(i));
    }
    if (rho && !std::isfinite((*rho)[i])) {
      throw NonFiniteSample("non-finite charge sample at lattice point " + std::to_string(i));
    }
  }
}

LatticeField LatticeField::zeros(const std::array<int, 3>& dims,
                                 const std::array<double, 3>& lengths) {
  LatticeField f;
  f.dims = dims;
  f.lengths = lengths;
  f.e.assign(f.size(), {0.0, 0.0, 0.0});
  f.b.assign(f.size(), {0.0, 0.0, 0.0});
  return f;
}

// --- discrete Fourier transforms ------------------------------------------------

namespace {

// Ex, Ey, Ez, Bx, By, Bz
using Channels = std::array<std::vector<Complex>, 6>;

// exp(sign·2πi r/n) for r in [0, n).
std::vector<Complex> twiddles(std::size_t n, int sign) {
  std::vector<Complex> tw(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    tw[r] = Complex(std::cos(angle), sign * std::sin(angle));
  }
  return tw;
}

void transform_axis(Channels& ch, const GridDescriptor& grid, int axis, int sign) {
  const auto n = static_cast<std::size_t>(grid.n[static_cast<std::size_t>(axis)]);
  if (n == 1) return;
  const auto tw = twiddles(n, sign);
  const std::size_t total = grid.size();
  std::size_t stride = 1;
  for (int a = axis + 1; a < 3; ++a) stride *= static_cast<std::size_t>(grid.n[static_cast<std::size_t>(a)]);
  std::vector<Complex> line(n);
  for (auto& data : ch) {
    for (std::size_t base = 0; base < total; ++base) {
      // Visit each line once, from its first element.
      if ((base / stride) % n != 0) continue;
      for (std::size_t j = 0; j < n; ++j) line[j] = data[base + j * stride];
      for (std::size_t m = 0; m < n; ++m) {
        Complex acc{};
        for (std::size_t j = 0; j < n; ++j) acc += line[j] * tw[(m * j) % n];
        data[base + m * stride] = acc;
      }
    }
  }
}

void transform_direct(Channels& ch, const GridDescriptor& grid, int sign) {
  std::size_t period = 1;
  for (const int n : grid.n) period = std::lcm(period, static_cast<std::size_t>(n));
  const auto tw = twiddles(period, sign);
  const std::size_t total = grid.size();
  const std::array<std::size_t, 3> n = {static_cast<std::size_t>(grid.n[0]),
                                        static_cast<std::size_t>(grid.n[1]),
                                        static_cast<std::size_t>(grid.n[2])};
  std::array<std::size_t, 3> step{};
  for (std::size_t a = 0; a < 3; ++a) step[a] = period / n[a];

  // Interleaved re/im per sample so the inner loop is plain real arithmetic.
  std::vector<double> in(12 * total);
  for (std::size_t x = 0; x < total; ++x) {
    for (std::size_t c = 0; c < 6; ++c) {
      in[12 * x + 2 * c] = ch[c][x].real();
      in[12 * x + 2 * c + 1] = ch[c][x].imag();
    }
  }
  std::vector<double> tw_re(period), tw_im(period);
  for (std::size_t r = 0; r < period; ++r) {
    tw_re[r] = tw[r].real();
    tw_im[r] = tw[r].imag();
  }

  Channels out;
  for (auto& c : out) c.assign(total, Complex{});
  parallel_for(total, [&](std::size_t m) {
    const auto km = grid.unflatten(m);
    // Phase increments per unit step along each axis, reduced mod period.
    std::array<std::size_t, 3> inc{};
    for (std::size_t a = 0; a < 3; ++a) inc[a] = (static_cast<std::size_t>(km[a]) * step[a]) % period;
    std::array<double, 12> acc{};
    std::size_t x = 0;
    std::size_t p0 = 0;
    for (std::size_t i0 = 0; i0 < n[0]; ++i0) {
      std::size_t p1 = p0;
      for (std::size_t i1 = 0; i1 < n[1]; ++i1) {
        std::size_t p2 = p1;
        for (std::size_t i2 = 0; i2 < n[2]; ++i2, ++x) {
          const double wr = tw_re[p2];
          const double wi = tw_im[p2];
          const double* v = &in[12 * x];
          for (std::size_t c = 0; c < 6; ++c) {
            acc[2 * c] += v[2 * c] * wr - v[2 * c + 1] * wi;
            acc[2 * c + 1] += v[2 * c] * wi + v[2 * c + 1] * wr;
          }
          p2 += inc[2];
          if (p2 >= period) p2 -= period;
        }
        p1 += inc[1];
        if (p1 >= period) p1 -= period;
      }
      p0 += inc[0];
      if (p0 >= period) p0 -= period;
    }
    for (std::size_t c = 0; c < 6; ++c) out[c][m] = Complex(acc[2 * c], acc[2 * c + 1]);
  });
  ch = std::move(out);
}

void transform(Channels& ch, const GridDescriptor& grid, int sign, TransformPath path) {
  if (path == TransformPath::direct) {
    transform_direct(ch, grid, sign);
    return;
  }
  for (int axis = 0; axis < 3; ++axis) transform_axis(ch, grid, axis, sign);
}

}  // namespace

SpectralState to_spectral(const LatticeField& field, double tol, TransformPath path) {
  field.check();
  const GridDescriptor grid = field.grid();
  const std::size_t n = grid.size();
  Channels ch;
  for (std::size_t c = 0; c < 3; ++c) {
    ch[c].resize(n);
    ch[c + 3].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      ch[c][i] = field.e[i][c];
      ch[c + 3][i] = field.b[i][c];
    }
  }
  transform(ch, grid, -1, path);
  const double inv_n = 1.0 / static_cast<double>(n);

  std::vector<Mode> modes(n);
  for (std::size_t j = 0; j < n; ++j) {
    Mode& m = modes[j];
    for (std::size_t c = 0; c < 3; ++c) {
      m.e[c] = ch[c][j] * inv_n;
      m.b[c] = ch[c + 3][j] * inv_n;
    }
    if (grid.is_nyquist(j)) {
      const double amp = std::max(m.e.norm(), m.b.norm());
      if (amp > tol) {
        throw NyquistNonzero("Nyquist mode " + std::to_string(j) + " carries amplitude " +
                             std::to_string(amp));
      }
      m.e = {};
      m.b = {};
    }
  }
  return SpectralState::ingest(grid, std::move(modes));
}

LatticeField to_lattice(const SpectralState& state, double tol, TransformPath path) {
  if (!state.grid()) throw NoGrid("state is an explicit mode list without a grid");
  const GridDescriptor& grid = *state.grid();
  const double herm = constraint_residuals(state).hermitian;
  if (!(herm <= tol)) {
    throw NotHermitian("Hermitian residual " + std::to_string(herm) + " exceeds tolerance");
  }
  const std::size_t n = grid.size();
  Channels ch;
  for (std::size_t c = 0; c < 3; ++c) {
    ch[c].resize(n);
    ch[c + 3].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      ch[c][j] = state.mode(j).e[c];
      ch[c + 3][j] = state.mode(j).b[c];
    }
  }
  transform(ch, grid, +1, path);

  double max_real = 0.0;
  double max_imag = 0.0;
  for (const auto& c : ch) {
    for (const auto& v : c) {
      max_real = std::max(max_real, std::abs(v.real()));
      max_imag = std::max(max_imag, std::abs(v.imag()));
    }
  }
  if (!(max_imag <= 1e-12 * std::max(1.0, max_real))) {
    throw NotHermitian("inverse transform has imaginary residue " + std::to_string(max_imag));
  }
  LatticeField out = LatticeField::zeros(grid.n, grid.length);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      out.e[i][c] = ch[c][i].real();
      out.b[i][c] = ch[c + 3][i].real();
    }
  }
  return out;
}

double parseval_check(const LatticeField& field, const SpectralState& state) {
  std::vector<double> spectral;
  spectral.reserve(state.size());
  for (const auto& m : state.modes()) {
    const double e = m.e.norm();
    const double b = m.b.norm();
    spectral.push_back(e * e + b * b);
  }
  std::vector<double> lattice;
  lattice.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < 3; ++c) s += field.e[i][c] * field.e[i][c] + field.b[i][c] * field.b[i][c];
    lattice.push_back(s);
  }
  const double lhs = pairwise_sum(spectral);
  const double rhs = pairwise_sum(lattice) / static_cast<double>(field.size());
  const double denom = std::max(lhs, rhs);
  if (denom == 0.0) return 0.0;
  return std::abs(lhs - rhs) / denom;
}

// --- initial conditions ---------------------------------------------------------

std::string_view to_string(IcKind kind) {
  switch (kind) {
    case IcKind::plane_wave: return "plane_wave";
    case IcKind::standing_wave: return "standing_wave";
    case IcKind::random_solenoidal: return "random_solenoidal";
    case IcKind::coulomb_static: return "coulomb_static";
  }
  return "unknown";
}

std::optional<IcKind> parse_ic_kind(std::string_view name) {
  if (name == "plane_wave") return IcKind::plane_wave;
  if (name == "standing_wave") return IcKind::standing_wave;
  if (name == "random_solenoidal") return IcKind::random_solenoidal;
  if (name == "coulomb_static") return IcKind::coulomb_static;
  return std::nullopt;
}

namespace {

std::string index_text(const std::array<int, 3>& idx) {
  return "(" + std::to_string(idx[0]) + "," + std::to_string(idx[1]) + "," +
         std::to_string(idx[2]) + ")";
}

// Storage index of a signed mode triple that must lie strictly inside the
// grid's resolved band (no aliasing, no Nyquist).
std::size_t resolved_mode(const GridDescriptor& grid, const std::array<int, 3>& idx) {
  const std::size_t j = grid.flat_from_signed(idx);
  if (grid.signed_indices(j) != idx || grid.is_nyquist(j)) {
    throw InvalidArgument("mode " + index_text(idx) + " is not resolved by the grid");
  }
  return j;
}

void set_pair(std::vector<Mode>& modes, const GridDescriptor& grid, std::size_t j,
              const ComplexVec3& e, const ComplexVec3& b) {
  modes[j].e = e;
  modes[j].b = b;
  const std::size_t p = hermitian_pair_index(grid, j);
  modes[p].e = conj(e);
  modes[p].b = conj(b);
}

WaveVector unit(const WaveVector& k) {
  const double n = k.norm();
  return {{k[0] / n, k[1] / n, k[2] / n}};
}

ComplexVec3 transverse(const WaveVector& khat, const ComplexVec3& v) {
  return v - scaled(khat, dot(khat, v));
}

void wave_ic(const IcParams& p, std::vector<Mode>& modes) {
  const std::size_t j = resolved_mode(p.grid, p.mode);
  const WaveVector k = p.grid.wave_vector(j);
  if (k.is_zero()) throw InvalidArgument("wave initial conditions need a nonzero mode");
  const WaveVector khat = unit(k);
  const WaveVector pol{{p.polarization[0], p.polarization[1], p.polarization[2]}};
  const double pn = pol.norm();
  if (!(pn > 0.0) || !std::isfinite(pn)) throw InvalidArgument("polarization must be nonzero");
  if (std::abs(dot(pol, khat)) > 1e-12 * pn) {
    throw InvalidArgument("polarization not orthogonal to k");
  }
  const ComplexVec3 e = scaled(unit(pol), Complex(0.5 * p.amplitude));
  const ComplexVec3 b = p.kind == IcKind::plane_wave ? cross(khat, e) : ComplexVec3{};
  set_pair(modes, p.grid, j, e, b);
}

void random_ic(const IcParams& p, std::vector<Mode>& modes) {
  const GridDescriptor& grid = p.grid;
  double kmax = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) kmax = std::max(kmax, grid.wave_vector(j).norm());
  const double cutoff = p.cutoff_fraction * kmax;

  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto draw = [&] {
    ComplexVec3 v;
    for (std::size_t c = 0; c < 3; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      v[c] = Complex(re, im);
    }
    return v;
  };

  for (std::size_t j = 0; j < grid.size(); ++j) {
    const std::size_t partner = hermitian_pair_index(grid, j);
    if (partner <= j || grid.is_nyquist(j)) continue;  // each ±k pair once
    const WaveVector k = grid.wave_vector(j);
    const double kn = k.norm();
    if (kn == 0.0 || kn > cutoff) continue;
    const double amp = std::pow(kn, p.spectrum_exponent);
    const WaveVector khat = unit(k);
    const ComplexVec3 e = transverse(khat, amp * draw());
    const ComplexVec3 b = transverse(khat, amp * draw());
    set_pair(modes, grid, j, e, b);
  }
}

void coulomb_ic(const IcParams& p, std::vector<Mode>& modes) {
  std::vector<bool> assigned(modes.size(), false);
  for (const auto& entry : p.charges) {
    const std::size_t j = resolved_mode(p.grid, entry.mode);
    const WaveVector k = p.grid.wave_vector(j);
    if (k.is_zero()) {
      if (entry.c != Complex{}) {
        throw ConstraintError("Gauss law unsatisfiable: nonzero charge on the zero mode");
      }
      continue;
    }
    const ComplexVec3 e = scaled(k, entry.c / k.norm2());
    const std::size_t partner = hermitian_pair_index(p.grid, j);
    for (const std::size_t idx : {j, partner}) {
      if (!assigned[idx]) continue;
      const ComplexVec3 expected = idx == j ? e : conj(e);
      if ((modes[idx].e - expected).norm() > 1e-12 * std::max(1.0, expected.norm())) {
        throw InvalidArgument("charge table is inconsistent with reality at mode " +
                              index_text(entry.mode));
      }
    }
    set_pair(modes, p.grid, j, e, {});
    assigned[j] = assigned[partner] = true;
  }
}

}  // namespace

SpectralState make_ic(const IcParams& params) {
  params.grid.check();
  std::vector<Mode> modes(params.grid.size());
  switch (params.kind) {
    case IcKind::plane_wave:
    case IcKind::standing_wave: wave_ic(params, modes); break;
    case IcKind::random_solenoidal: random_ic(params, modes); break;
    case IcKind::coulomb_static: coulomb_ic(params, modes); break;
  }
  SpectralState state = SpectralState::ingest(params.grid, std::move(modes));
  if (!params.band_radius) return state;
  const double r2 = *params.band_radius * *params.band_radius;
  const GridDescriptor grid = params.grid;
  return select_modes(state, [&](std::size_t j) {
    const auto s = grid.signed_indices(j);
    const double n2 = static_cast<double>(s[0]) * s[0] + static_cast<double>(s[1]) * s[1] +
                      static_cast<double>(s[2]) * s[2];
    return n2 <= r2 && !grid.is_nyquist(j);
  });
}

}  // namespace nambu_em
