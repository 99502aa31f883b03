#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the propagators, transforms, or rate formulas under test.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "nambu_em/realspace_bridge.hpp"
#include "nambu_em/spectral_field.hpp"

namespace nambu_em::testing {

using Matrix6 = Eigen::Matrix<std::complex<double>, 6, 6>;
using Vector6 = Eigen::Matrix<std::complex<double>, 6, 1>;

inline Complex normal_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

inline ComplexVec3 normal_vec(std::mt19937_64& rng) {
  const Complex x = normal_complex(rng);
  const Complex y = normal_complex(rng);
  return {{x, y, normal_complex(rng)}};
}

inline WaveVector random_k(std::mt19937_64& rng, double range = 3.0) {
  std::uniform_real_distribution<double> u(-range, range);
  WaveVector k;
  do {
    const double x = u(rng);
    const double y = u(rng);
    k = {{x, y, u(rng)}};
  } while (k.norm() < 0.1);
  return k;
}

inline ComplexVec3 transverse_part(const WaveVector& k, const ComplexVec3& v) {
  const double k2 = k.norm2();
  if (k2 == 0.0) return v;
  const Complex kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
  ComplexVec3 out = v;
  for (int a = 0; a < 3; ++a) out[a] -= kv * k[a] / k2;
  return out;
}

struct RandomStateOptions {
  bool transverse_e = false;  // zero charge when true
  bool random_weights = false;
  double k_range = 3.0;
};

/// Explicit mode list with k·B = 0 and arbitrary (recorded) k·E.
inline SpectralState random_state(std::mt19937_64& rng, std::size_t modes,
                                  const RandomStateOptions& opt = {}) {
  std::uniform_real_distribution<double> w(0.25, 2.0);
  std::vector<Mode> list;
  list.reserve(modes);
  for (std::size_t j = 0; j < modes; ++j) {
    Mode m;
    m.k = random_k(rng, opt.k_range);
    m.e = normal_vec(rng);
    if (opt.transverse_e) m.e = transverse_part(m.k, m.e);
    m.b = transverse_part(m.k, normal_vec(rng));
    if (opt.random_weights) m.weight = w(rng);
    list.push_back(m);
  }
  return SpectralState::ingest(std::move(list));
}

/// Explicit list of ±k pairs carrying conjugate amplitudes (a real field).
inline SpectralState random_paired_state(std::mt19937_64& rng, std::size_t pairs,
                                         bool transverse_e = true) {
  std::vector<Mode> list;
  for (std::size_t p = 0; p < pairs; ++p) {
    Mode m;
    m.k = random_k(rng);
    m.e = normal_vec(rng);
    if (transverse_e) m.e = transverse_part(m.k, m.e);
    m.b = transverse_part(m.k, normal_vec(rng));
    Mode n;
    n.k = -m.k;
    for (int a = 0; a < 3; ++a) {
      n.e[a] = std::conj(m.e[a]);
      n.b[a] = std::conj(m.b[a]);
    }
    m.hermitian_partner = 2 * p + 1;
    n.hermitian_partner = 2 * p;
    list.push_back(m);
    list.push_back(n);
  }
  return SpectralState::ingest(std::move(list));
}

/// Per-mode generator of d/dt (E, B) = (i k×B, −i k×E).
inline Matrix6 maxwell_generator(const WaveVector& k) {
  Eigen::Matrix3cd cross_k;
  cross_k << 0.0, -k[2], k[1],
             k[2], 0.0, -k[0],
            -k[1], k[0], 0.0;
  const std::complex<double> i(0.0, 1.0);
  Matrix6 m = Matrix6::Zero();
  m.block<3, 3>(0, 3) = i * cross_k;
  m.block<3, 3>(3, 0) = -i * cross_k;
  return m;
}

inline Vector6 pack(const Mode& m) {
  Vector6 y;
  for (int a = 0; a < 3; ++a) {
    y(a) = m.e[a];
    y(a + 3) = m.b[a];
  }
  return y;
}

inline SpectralState unpack_all(const SpectralState& layout, const std::vector<Vector6>& ys) {
  std::vector<ComplexVec3> e(layout.size());
  std::vector<ComplexVec3> b(layout.size());
  for (std::size_t j = 0; j < layout.size(); ++j) {
    for (int a = 0; a < 3; ++a) {
      e[j][a] = ys[j](a);
      b[j][a] = ys[j](a + 3);
    }
  }
  return layout.with_fields(std::move(e), std::move(b));
}

/// Exact flow by dense matrix exponential, mode by mode.
inline SpectralState expm_evolve(const SpectralState& state, double t) {
  std::vector<Vector6> ys;
  for (const Mode& m : state.modes()) {
    const Matrix6 a = maxwell_generator(m.k) * t;
    ys.push_back(a.exp() * pack(m));
  }
  return unpack_all(state, ys);
}

/// Implicit midpoint map via a dense LU solve.
inline SpectralState cayley_evolve(const SpectralState& state, double dt) {
  std::vector<Vector6> ys;
  for (const Mode& m : state.modes()) {
    const Matrix6 g = maxwell_generator(m.k) * (0.5 * dt);
    const Matrix6 lhs = Matrix6::Identity() - g;
    const Matrix6 rhs = Matrix6::Identity() + g;
    ys.push_back(lhs.partialPivLu().solve(rhs * pack(m)));
  }
  return unpack_all(state, ys);
}

/// Largest componentwise |a − b| over both fields.
inline double max_abs_diff(const SpectralState& a, const SpectralState& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (int c = 0; c < 3; ++c) {
      worst = std::max(worst, std::abs(a.mode(j).e[c] - b.mode(j).e[c]));
      worst = std::max(worst, std::abs(a.mode(j).b[c] - b.mode(j).b[c]));
    }
  }
  return worst;
}

inline double max_abs_component(const SpectralState& s) {
  double worst = 0.0;
  for (const Mode& m : s.modes()) {
    for (int c = 0; c < 3; ++c) worst = std::max({worst, std::abs(m.e[c]), std::abs(m.b[c])});
  }
  return worst;
}

/// Real random lattice field with every Nyquist harmonic removed.
inline LatticeField random_lattice(std::mt19937_64& rng, std::array<int, 3> dims,
                                   std::array<double, 3> lengths, bool with_rho = false) {
  LatticeField f = LatticeField::zeros(dims, lengths);
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto& v : f.e) v = {n(rng), n(rng), n(rng)};
  for (auto& v : f.b) v = {n(rng), n(rng), n(rng)};
  const auto idx = [&](int x, int y, int z) {
    return (static_cast<std::size_t>(x) * dims[1] + y) * dims[2] + z;
  };
  // Subtract the alternating-sign mean along each even axis.
  for (int axis = 0; axis < 3; ++axis) {
    if (dims[axis] % 2 != 0) continue;
    for (auto* samples : {&f.e, &f.b}) {
      std::array<int, 3> p{};
      const int o1 = (axis + 1) % 3;
      const int o2 = (axis + 2) % 3;
      for (p[o1] = 0; p[o1] < dims[o1]; ++p[o1]) {
        for (p[o2] = 0; p[o2] < dims[o2]; ++p[o2]) {
          for (int c = 0; c < 3; ++c) {
            double alt = 0.0;
            for (p[axis] = 0; p[axis] < dims[axis]; ++p[axis]) {
              alt += ((p[axis] % 2) ? -1.0 : 1.0) * (*samples)[idx(p[0], p[1], p[2])][c];
            }
            alt /= dims[axis];
            for (p[axis] = 0; p[axis] < dims[axis]; ++p[axis]) {
              (*samples)[idx(p[0], p[1], p[2])][c] -= ((p[axis] % 2) ? -1.0 : 1.0) * alt;
            }
          }
        }
      }
    }
  }
  if (with_rho) {
    std::vector<double> rho(f.size());
    for (auto& r : rho) r = n(rng);
    f.rho = rho;
  }
  return f;
}

/// Forward transform by the full triple sum, (1/N) Σ_x f(x) e^{−ik·x}.
/// Returns per flat spectral index the transformed E and B.
struct NaiveSpectrum {
  std::vector<ComplexVec3> e;
  std::vector<ComplexVec3> b;
};

inline NaiveSpectrum naive_dft(const LatticeField& f) {
  const auto& d = f.dims;
  const std::size_t n = f.size();
  NaiveSpectrum out{std::vector<ComplexVec3>(n), std::vector<ComplexVec3>(n)};
  for (std::size_t q = 0; q < n; ++q) {
    const long qx = static_cast<long>(q / (static_cast<std::size_t>(d[1]) * d[2]));
    const long qy = static_cast<long>((q / d[2]) % d[1]);
    const long qz = static_cast<long>(q % d[2]);
    std::array<std::complex<long double>, 3> se{}, sb{};
    for (std::size_t p = 0; p < n; ++p) {
      const long px = static_cast<long>(p / (static_cast<std::size_t>(d[1]) * d[2]));
      const long py = static_cast<long>((p / d[2]) % d[1]);
      const long pz = static_cast<long>(p % d[2]);
      const long double phase =
          -2.0L * std::numbers::pi_v<long double> *
          (static_cast<long double>((qx * px) % d[0]) / d[0] +
           static_cast<long double>((qy * py) % d[1]) / d[1] +
           static_cast<long double>((qz * pz) % d[2]) / d[2]);
      const std::complex<long double> w(std::cos(phase), std::sin(phase));
      for (int c = 0; c < 3; ++c) {
        se[c] += w * static_cast<long double>(f.e[p][c]);
        sb[c] += w * static_cast<long double>(f.b[p][c]);
      }
    }
    for (int c = 0; c < 3; ++c) {
      out.e[q][c] = Complex(static_cast<double>(se[c].real() / n), static_cast<double>(se[c].imag() / n));
      out.b[q][c] = Complex(static_cast<double>(sb[c].real() / n), static_cast<double>(sb[c].imag() / n));
    }
  }
  return out;
}

/// Fourth-order central difference of F along the matrix-exponential flow.
template <class Eval>
Complex trajectory_rate(const SpectralState& s, double h, Eval&& eval) {
  const Complex fp1 = eval(expm_evolve(s, h));
  const Complex fm1 = eval(expm_evolve(s, -h));
  const Complex fp2 = eval(expm_evolve(s, 2 * h));
  const Complex fm2 = eval(expm_evolve(s, -2 * h));
  return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
}

}  // namespace nambu_em::testing
