#include "nambu_em/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "nambu_em/errors.hpp"
#include "nambu_em/maxwell_flow.hpp"
#include "nambu_em/summation.hpp"

namespace nambu_em {

ExtendedMode extend(const Mode& m) {
  return {widen<long double>(m.k), widen<long double>(m.e), widen<long double>(m.b),
          static_cast<long double>(m.weight)};
}

Complex Functional::value(const SpectralState& state) const {
  std::vector<Complex> terms(state.size());
  for (std::size_t j = 0; j < state.size(); ++j) {
    const Mode& m = state.mode(j);
    terms[j] = m.weight * density(m, j);
  }
  return pairwise_sum(terms);
}

namespace {

// Functionals whose integrand depends only on (k, Ẽ(k), B̃(k)). Def supplies
// the integrand as a template over the scalar type, the gradients, and a
// magnitude bound.
template <class Def>
class PointwiseFunctional final : public Functional {
 public:
  std::string name() const override { return std::string(Def::kName); }
  bool holomorphic() const override { return Def::kHolomorphic; }
  Complex density(const Mode& m, std::size_t) const override {
    return Def::template integrand<double>(m.k, m.e, m.b);
  }
  std::complex<long double> density_extended(const ExtendedMode& m, std::size_t) const override {
    return Def::template integrand<long double>(m.k, m.e, m.b);
  }
  ModeGradient gradient(const Mode& m, std::size_t) const override { return Def::gradient(m); }
  double magnitude(const Mode& m, std::size_t) const override { return Def::magnitude(m); }
};

double sq(double x) { return x * x; }

struct I1Def {
  static constexpr std::string_view kName = "I1";
  static constexpr bool kHolomorphic = true;
  template <class T>
  static std::complex<T> integrand(const RealVec3<T>& k, const CVec3<T>& e, const CVec3<T>& b) {
    return dot(k, e) - dot(k, b);
  }
  static ModeGradient gradient(const Mode& m) {
    return {to_complex(m.k), to_complex(-m.k), {}, {}};
  }
  static double magnitude(const Mode& m) { return m.k.norm() * (m.e.norm() + m.b.norm()); }
};

struct I2Def {
  static constexpr std::string_view kName = "I2";
  static constexpr bool kHolomorphic = true;
  template <class T>
  static std::complex<T> integrand(const RealVec3<T>&, const CVec3<T>& e, const CVec3<T>& b) {
    return dot(e, b);
  }
  static ModeGradient gradient(const Mode& m) { return {m.b, m.e, {}, {}}; }
  static double magnitude(const Mode& m) { return 0.5 * (sq(m.e.norm()) + sq(m.b.norm())); }
};

// ½ Σ (Ẽ·Ẽ* + B̃·B̃*)
struct HDef {
  static constexpr std::string_view kName = "H";
  static constexpr bool kHolomorphic = false;
  template <class T>
  static std::complex<T> integrand(const RealVec3<T>&, const CVec3<T>& e, const CVec3<T>& b) {
    return T(0.5) * (cdot(e, e) + cdot(b, b));
  }
  static ModeGradient gradient(const Mode& m) {
    return {0.5 * conj(m.e), 0.5 * conj(m.b), 0.5 * m.e, 0.5 * m.b};
  }
  static double magnitude(const Mode& m) { return 0.5 * (sq(m.e.norm()) + sq(m.b.norm())); }
};

// ½ Σ (Ẽ·Ẽ* − B̃·B̃*)
struct SConjDef {
  static constexpr std::string_view kName = "S_conj";
  static constexpr bool kHolomorphic = false;
  template <class T>
  static std::complex<T> integrand(const RealVec3<T>&, const CVec3<T>& e, const CVec3<T>& b) {
    return T(0.5) * (cdot(e, e) - cdot(b, b));
  }
  static ModeGradient gradient(const Mode& m) {
    return {0.5 * conj(m.e), -0.5 * conj(m.b), 0.5 * m.e, -0.5 * m.b};
  }
  static double magnitude(const Mode& m) { return 0.5 * (sq(m.e.norm()) + sq(m.b.norm())); }
};

// Σ (Ẽ·Ẽ − B̃·B̃), unconjugated
struct SFormalDef {
  static constexpr std::string_view kName = "S_formal";
  static constexpr bool kHolomorphic = true;
  template <class T>
  static std::complex<T> integrand(const RealVec3<T>&, const CVec3<T>& e, const CVec3<T>& b) {
    return dot(e, e) - dot(b, b);
  }
  static ModeGradient gradient(const Mode& m) { return {2.0 * m.e, -2.0 * m.b, {}, {}}; }
  static double magnitude(const Mode& m) { return sq(m.e.norm()) + sq(m.b.norm()); }
};

// Σ (Ẽ·Ẽ + B̃·B̃), unconjugated
struct HFormalDef {
  static constexpr std::string_view kName = "H_formal";
  static constexpr bool kHolomorphic = true;
  template <class T>
  static std::complex<T> integrand(const RealVec3<T>&, const CVec3<T>& e, const CVec3<T>& b) {
    return dot(e, e) + dot(b, b);
  }
  static ModeGradient gradient(const Mode& m) { return {2.0 * m.e, 2.0 * m.b, {}, {}}; }
  static double magnitude(const Mode& m) { return sq(m.e.norm()) + sq(m.b.norm()); }
};

// Σ k·(Ẽ×B̃)
struct GDef {
  static constexpr std::string_view kName = "G";
  static constexpr bool kHolomorphic = true;
  template <class T>
  static std::complex<T> integrand(const RealVec3<T>& k, const CVec3<T>& e, const CVec3<T>& b) {
    return dot(k, cross(e, b));
  }
  static ModeGradient gradient(const Mode& m) {
    return {cross(m.b, m.k), cross(m.k, m.e), {}, {}};
  }
  static double magnitude(const Mode& m) { return 0.5 * m.k.norm() * (sq(m.e.norm()) + sq(m.b.norm())); }
};

const PointwiseFunctional<I1Def> kI1;
const PointwiseFunctional<I2Def> kI2;
const PointwiseFunctional<HDef> kH;
const PointwiseFunctional<SConjDef> kSConj;
const PointwiseFunctional<SFormalDef> kSFormal;
const PointwiseFunctional<HFormalDef> kHFormal;
const PointwiseFunctional<GDef> kG;

constexpr std::array<std::string_view, 7> kNames = {"I1",       "I2",       "H", "S_conj",
                                                    "S_formal", "H_formal", "G"};

const std::array<const Functional*, 7> kRegistry = {&kI1,      &kI2,      &kH, &kSConj,
                                                    &kSFormal, &kHFormal, &kG};

}  // namespace

// --- coordinate functionals --------------------------------------------------

CoordinateFunctional::CoordinateFunctional(Field field, std::size_t mode, int axis)
    : field_(field), mode_(mode), axis_(axis) {
  if (axis < 0 || axis > 2) throw InvalidArgument("coordinate axis must be 0, 1 or 2");
}

std::string CoordinateFunctional::name() const {
  return std::string(field_ == Field::e ? "CoordE(" : "CoordB(") + std::to_string(mode_) + "," +
         std::to_string(axis_) + ")";
}

Complex CoordinateFunctional::density(const Mode& m, std::size_t j) const {
  if (j != mode_) return {};
  const auto& f = field_ == Field::e ? m.e : m.b;
  return f[static_cast<std::size_t>(axis_)] / m.weight;
}

std::complex<long double> CoordinateFunctional::density_extended(const ExtendedMode& m,
                                                                 std::size_t j) const {
  if (j != mode_) return {};
  const auto& f = field_ == Field::e ? m.e : m.b;
  return f[static_cast<std::size_t>(axis_)] / m.weight;
}

ModeGradient CoordinateFunctional::gradient(const Mode& m, std::size_t j) const {
  ModeGradient g;
  if (j != mode_) return g;
  ComplexVec3 unit;
  unit[static_cast<std::size_t>(axis_)] = 1.0 / m.weight;
  (field_ == Field::e ? g.e : g.b) = unit;
  return g;
}

double CoordinateFunctional::magnitude(const Mode& m, std::size_t j) const {
  return std::abs(density(m, j));
}

Complex CoordinateFunctional::value(const SpectralState& state) const {
  if (mode_ >= state.size()) throw InvalidArgument("coordinate functional outside the state");
  const Mode& m = state.mode(mode_);
  return (field_ == Field::e ? m.e : m.b)[static_cast<std::size_t>(axis_)];
}

CoordinateFunctional coord_e(std::size_t mode, int axis) {
  return CoordinateFunctional(Field::e, mode, axis);
}

CoordinateFunctional coord_b(std::size_t mode, int axis) {
  return CoordinateFunctional(Field::b, mode, axis);
}

// --- registry ---------------------------------------------------------------

std::span<const std::string_view> registered_functionals() { return kNames; }

bool is_registered(std::string_view name) {
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

const Functional& functional(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return *kRegistry[i];
  }
  throw UnknownFunctional(std::string(name));
}

const Functional& invariant_i1() { return kI1; }
const Functional& invariant_i2() { return kI2; }

// --- operations -------------------------------------------------------------

namespace {

// Indices a functional depends on: its support, or every mode.
template <class Body>
void for_each_supported(const Functional& f, const SpectralState& state, Body&& body) {
  if (const auto s = f.support()) {
    if (*s >= state.size()) throw InvalidArgument("functional support outside the state");
    body(*s);
    return;
  }
  for (std::size_t j = 0; j < state.size(); ++j) body(j);
}

}  // namespace

Complex evaluate(const Functional& f, const SpectralState& state) { return f.value(state); }

double value_scale(const Functional& f, const SpectralState& state) {
  std::vector<double> terms;
  for_each_supported(f, state, [&](std::size_t j) {
    const Mode& m = state.mode(j);
    terms.push_back(m.weight * f.magnitude(m, j));
  });
  return pairwise_sum(terms);
}

double rate_scale(const Functional& f, const SpectralState& state) {
  std::vector<double> terms;
  for_each_supported(f, state, [&](std::size_t j) {
    const Mode& m = state.mode(j);
    terms.push_back(m.weight * m.k.norm() * f.magnitude(m, j));
  });
  return pairwise_sum(terms);
}

Complex flow_rate(const Functional& f, const SpectralState& state) {
  std::vector<Complex> terms;
  for_each_supported(f, state, [&](std::size_t j) {
    const Mode& m = state.mode(j);
    const ModeRate r = closed_form_rate(m.k, m.e, m.b);
    const ModeGradient g = f.gradient(m, j);
    const Complex t = dot(g.e, r.e_dot) + dot(g.b, r.b_dot) + dot(g.e_conj, conj(r.e_dot)) +
                      dot(g.b_conj, conj(r.b_dot));
    terms.push_back(m.weight * t);
  });
  return pairwise_sum(terms);
}

double gradient_check(const Functional& f, const SpectralState& state, double eps) {
  if (!(eps >= 1e-8 && eps <= 1e-4)) {
    throw InvalidArgument("gradient_check step must lie in [1e-8, 1e-4]");
  }
  const Complex value = f.value(state);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw NumericalError("functional " + f.name() + " is non-finite on this state");
  }

  using LComplex = std::complex<long double>;
  const long double h = eps;
  const std::array<LComplex, 2> directions = {LComplex(1.0L, 0.0L), LComplex(0.0L, 1.0L)};

  std::vector<std::pair<Complex, Complex>> samples;  // (finite difference, prediction)
  for_each_supported(f, state, [&](std::size_t j) {
    const Mode& m = state.mode(j);
    const ExtendedMode base = extend(m);
    const ModeGradient g = f.gradient(m, j);
    for (const Field field : {Field::e, Field::b}) {
      const ComplexVec3& formal = field == Field::e ? g.e : g.b;
      const ComplexVec3& conjugate = field == Field::e ? g.e_conj : g.b_conj;
      for (std::size_t axis = 0; axis < 3; ++axis) {
        for (const LComplex& d : directions) {
          ExtendedMode plus = base;
          ExtendedMode minus = base;
          (field == Field::e ? plus.e : plus.b)[axis] += h * d;
          (field == Field::e ? minus.e : minus.b)[axis] -= h * d;
          const LComplex diff = f.density_extended(plus, j) - f.density_extended(minus, j);
          const LComplex fd = base.weight * diff / (2.0L * h);
          if (!std::isfinite(fd.real()) || !std::isfinite(fd.imag())) {
            throw NumericalError("functional " + f.name() + " is non-finite near this state");
          }
          const Complex dd(static_cast<double>(d.real()), static_cast<double>(d.imag()));
          const Complex predicted = m.weight * (formal[axis] * dd + conjugate[axis] * std::conj(dd));
          samples.emplace_back(Complex(static_cast<double>(fd.real()), static_cast<double>(fd.imag())),
                               predicted);
        }
      }
    }
  });

  double largest = 0.0;
  for (const auto& s : samples) largest = std::max(largest, std::abs(s.second));
  if (largest == 0.0) largest = 1.0;
  double worst = 0.0;
  for (const auto& [fd, predicted] : samples) worst = std::max(worst, std::abs(fd - predicted));
  return worst / largest;
}

}  // namespace nambu_em
