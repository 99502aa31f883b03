#pragma once

#include <vector>

#include "nambu_em/functionals.hpp"
#include "nambu_em/maxwell_flow.hpp"
#include "nambu_em/spectral_field.hpp"

namespace nambu_em {

enum class BracketPath { generic, closed_form };

struct BracketResult {
  Complex value;
  BracketPath path = BracketPath::generic;
};

/// Trilinear bracket [f, a, b] = i Σ_k w_k [∂_E f·(∂_E a × ∂_E b) + ∂_B f·(∂_B a × ∂_B b)],
/// the sum of the Ẽ-triplet and B̃-triplet brackets. Only formal gradients
/// enter. When one of the functionals is supported on a single mode the sum
/// runs over that mode only.
BracketResult bracket3(const Functional& f, const Functional& a, const Functional& b,
                       const SpectralState& state);

/// Σ_k w_k [|∂_E f||∂_E a||∂_E b| + |∂_B f||∂_B a||∂_B b|]: bound on |bracket3|
/// used to normalize roundoff-level residuals.
double bracket_scale(const Functional& f, const Functional& a, const Functional& b,
                     const SpectralState& state);

/// [f, I1, I2] evaluated with the invariants' gradients substituted in closed
/// form, Σ w [∂_E f·(i k×B̃) + ∂_B f·(−i k×Ẽ)].
BracketResult bracket_with_invariants(const Functional& f, const SpectralState& state);

/// Per-mode time derivatives, either through the master bracket applied to
/// coordinate functionals (generic) or straight from the closed-form flow.
std::vector<ModeRate> maxwell_rhs(const SpectralState& state,
                                  BracketPath path = BracketPath::closed_form);

/// Max over the six argument orders of |sgn(π)[π(f,a,b)] − [f,a,b]|,
/// normalized by max(largest |bracket|, bracket_scale). Zero for the zero state.
double antisymmetry_check(const Functional& f, const Functional& a, const Functional& b,
                          const SpectralState& state);

/// dF/dt through the master bracket [F, I1, I2]. Throws NonHolomorphic for
/// functionals with conjugate dependence (route those through flow_rate).
Complex conservation_rate(const Functional& f, const SpectralState& state);

}  // namespace nambu_em
