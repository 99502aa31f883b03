#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "nambu_em/spectral_field.hpp"
#include "nambu_em/vec3.hpp"

namespace nambu_em {

/// Variational derivatives of a functional at one mode, per unit quadrature
/// weight. `e`/`b` are the formal derivatives δF/δẼ, δF/δB̃ (components
/// treated as independent, no conjugation); `e_conj`/`b_conj` are the
/// derivatives with respect to the conjugated components.
struct ModeGradient {
  ComplexVec3 e;
  ComplexVec3 b;
  ComplexVec3 e_conj;
  ComplexVec3 b_conj;
};

/// Mode data in extended precision, used by the finite-difference checker.
struct ExtendedMode {
  RealVec3<long double> k;
  CVec3<long double> e;
  CVec3<long double> b;
  long double weight = 1.0L;
};

ExtendedMode extend(const Mode& m);

/// A named quantity F = Σ_k w_k f(k, Ẽ(k), B̃(k)) over a SpectralState.
///
/// Every functional satisfies, for any perturbation δ,
///   F(s + εδ) − F(s) = ε Σ_k w_k [e·δẼ + b·δB̃ + e_conj·conj(δẼ) + b_conj·conj(δB̃)] + O(ε²)
/// with the gradient fields above. Holomorphic functionals have zero
/// conjugate gradients.
class Functional {
 public:
  virtual ~Functional() = default;

  virtual std::string name() const = 0;
  virtual bool holomorphic() const = 0;

  /// Integrand f at mode j; the functional's value is Σ_j w_j f_j.
  virtual Complex density(const Mode& m, std::size_t j) const = 0;
  virtual std::complex<long double> density_extended(const ExtendedMode& m, std::size_t j) const = 0;

  virtual ModeGradient gradient(const Mode& m, std::size_t j) const = 0;

  /// Nonnegative bound on |f_j| built from field norms; sets the scale for
  /// relative tolerances.
  virtual double magnitude(const Mode& m, std::size_t j) const = 0;

  /// The single mode the functional depends on, if it is that local.
  virtual std::optional<std::size_t> support() const { return std::nullopt; }

  virtual Complex value(const SpectralState& state) const;
};

enum class Field { e, b };

/// Evaluation functional returning one component of Ẽ or B̃ at one mode. Its
/// gradient is e_axis / w_j at that mode, so the master bracket applied to it
/// yields the per-mode equation of motion regardless of the weights.
class CoordinateFunctional final : public Functional {
 public:
  CoordinateFunctional(Field field, std::size_t mode, int axis);

  std::string name() const override;
  bool holomorphic() const override { return true; }
  Complex density(const Mode& m, std::size_t j) const override;
  std::complex<long double> density_extended(const ExtendedMode& m, std::size_t j) const override;
  ModeGradient gradient(const Mode& m, std::size_t j) const override;
  double magnitude(const Mode& m, std::size_t j) const override;
  std::optional<std::size_t> support() const override { return mode_; }
  Complex value(const SpectralState& state) const override;

 private:
  Field field_;
  std::size_t mode_;
  int axis_;
};

CoordinateFunctional coord_e(std::size_t mode, int axis);
CoordinateFunctional coord_b(std::size_t mode, int axis);

/// Registered names in canonical order: I1, I2, H, S_conj, S_formal, H_formal, G.
std::span<const std::string_view> registered_functionals();
bool is_registered(std::string_view name);

/// Registry lookup; throws UnknownFunctional.
const Functional& functional(std::string_view name);

/// The two bracket invariants.
const Functional& invariant_i1();
const Functional& invariant_i2();

/// Σ_k w_k f(k) in fixed pairwise order.
Complex evaluate(const Functional& f, const SpectralState& state);

/// Σ w_j magnitude_j: reference size of the functional's value.
double value_scale(const Functional& f, const SpectralState& state);

/// Σ w_j |k_j| magnitude_j: reference size of the functional's time derivative.
double rate_scale(const Functional& f, const SpectralState& state);

/// dF/dt along the Maxwell flow by the full Wirtinger chain rule, using both
/// formal and conjugate gradients.
Complex flow_rate(const Functional& f, const SpectralState& state);

/// Worst relative error between central finite differences of F (real and
/// imaginary perturbation of every field component of every mode) and the
/// first-order expansion given by the gradients. The errors are relative to
/// the largest predicted directional derivative. Differences are taken in
/// extended precision.
///
/// eps must lie in [1e-8, 1e-4]; throws InvalidArgument otherwise and
/// NumericalError if F is non-finite.
double gradient_check(const Functional& f, const SpectralState& state, double eps);

}  // namespace nambu_em
