#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace nambu_em {

using Complex = std::complex<double>;

/// Real 3-vector. Used for wave vectors (natural units, c = 1).
template <class T>
struct RealVec3 {
  std::array<T, 3> v{};

  constexpr T& operator[](std::size_t i) { return v[i]; }
  constexpr const T& operator[](std::size_t i) const { return v[i]; }

  constexpr T norm2() const { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }
  T norm() const { return std::sqrt(norm2()); }
  constexpr bool is_zero() const { return v[0] == T{} && v[1] == T{} && v[2] == T{}; }

  constexpr RealVec3 operator-() const { return {{-v[0], -v[1], -v[2]}}; }
  friend constexpr bool operator==(const RealVec3&, const RealVec3&) = default;
};

/// Complex 3-vector holding one field amplitude.
template <class T>
struct CVec3 {
  using value_type = std::complex<T>;
  std::array<value_type, 3> v{};

  constexpr value_type& operator[](std::size_t i) { return v[i]; }
  constexpr const value_type& operator[](std::size_t i) const { return v[i]; }

  CVec3& operator+=(const CVec3& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] += o.v[i];
    return *this;
  }
  CVec3& operator-=(const CVec3& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] -= o.v[i];
    return *this;
  }
  friend CVec3 operator+(CVec3 a, const CVec3& b) { return a += b; }
  friend CVec3 operator-(CVec3 a, const CVec3& b) { return a -= b; }
  friend CVec3 operator-(const CVec3& a) { return {{-a.v[0], -a.v[1], -a.v[2]}}; }
  friend CVec3 operator*(const value_type& s, const CVec3& a) {
    return {{s * a.v[0], s * a.v[1], s * a.v[2]}};
  }
  friend CVec3 operator*(T s, const CVec3& a) { return {{s * a.v[0], s * a.v[1], s * a.v[2]}}; }
  friend bool operator==(const CVec3&, const CVec3&) = default;

  /// Euclidean norm sqrt(a·a*).
  T norm() const {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
  }
  bool is_finite() const {
    for (const auto& c : v) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
    return true;
  }
};

using WaveVector = RealVec3<double>;
using ComplexVec3 = CVec3<double>;

/// Real vector embedded as a complex one.
template <class T>
CVec3<T> to_complex(const RealVec3<T>& k) {
  return {{std::complex<T>(k[0]), std::complex<T>(k[1]), std::complex<T>(k[2])}};
}

/// Formal (unconjugated) product a·b = Σ aᵢbᵢ. Works for any mix of real and
/// complex 3-vectors.
template <class A, class B>
auto dot(const A& a, const B& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Conjugated product a·b* = Σ aᵢ conj(bᵢ).
template <class T>
std::complex<T> cdot(const CVec3<T>& a, const CVec3<T>& b) {
  return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]) + a[2] * std::conj(b[2]);
}

template <class T>
CVec3<T> cross(const CVec3<T>& a, const CVec3<T>& b) {
  return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

template <class T>
CVec3<T> cross(const RealVec3<T>& k, const CVec3<T>& a) {
  return {{k[1] * a[2] - k[2] * a[1], k[2] * a[0] - k[0] * a[2], k[0] * a[1] - k[1] * a[0]}};
}

template <class T>
CVec3<T> cross(const CVec3<T>& a, const RealVec3<T>& k) {
  return -cross(k, a);
}

template <class T>
CVec3<T> conj(const CVec3<T>& a) {
  return {{std::conj(a[0]), std::conj(a[1]), std::conj(a[2])}};
}

template <class T>
CVec3<T> scaled(const RealVec3<T>& k, std::complex<T> s) {
  return {{s * k[0], s * k[1], s * k[2]}};
}

/// Unit basis vector e_axis.
inline ComplexVec3 basis(int axis) {
  ComplexVec3 e;
  e[static_cast<std::size_t>(axis)] = 1.0;
  return e;
}

template <class U, class T>
RealVec3<U> widen(const RealVec3<T>& a) {
  return {{static_cast<U>(a[0]), static_cast<U>(a[1]), static_cast<U>(a[2])}};
}

template <class U, class T>
CVec3<U> widen(const CVec3<T>& a) {
  CVec3<U> out;
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = std::complex<U>(static_cast<U>(a[i].real()), static_cast<U>(a[i].imag()));
  }
  return out;
}

}  // namespace nambu_em
