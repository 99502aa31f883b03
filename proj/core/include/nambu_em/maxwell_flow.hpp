#pragma once

#include "nambu_em/vec3.hpp"

namespace nambu_em {

/// Time derivatives of one mode's amplitudes.
struct ModeRate {
  ComplexVec3 e_dot;
  ComplexVec3 b_dot;
};

/// Source-free spectral Maxwell right-hand side for one mode:
/// dẼ/dt = i k×B̃, dB̃/dt = −i k×Ẽ.
template <class T>
inline CVec3<T> e_rate(const RealVec3<T>& k, const CVec3<T>& b) {
  return std::complex<T>(0, 1) * cross(k, b);
}

template <class T>
inline CVec3<T> b_rate(const RealVec3<T>& k, const CVec3<T>& e) {
  return std::complex<T>(0, -1) * cross(k, e);
}

inline ModeRate closed_form_rate(const WaveVector& k, const ComplexVec3& e, const ComplexVec3& b) {
  return {e_rate(k, b), b_rate(k, e)};
}

}  // namespace nambu_em
