#include "nambu_em/nambu_bracket.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "nambu_em/errors.hpp"
#include "nambu_em/parallel.hpp"
#include "nambu_em/summation.hpp"

namespace nambu_em {

namespace {

constexpr Complex kI{0.0, 1.0};

// Mode range shared by three functionals: a single mode if any of them is
// local, empty if two local supports disagree.
std::optional<std::vector<std::size_t>> common_support(const Functional& f, const Functional& a,
                                                       const Functional& b,
                                                       const SpectralState& state) {
  std::optional<std::size_t> only;
  for (const Functional* g : {&f, &a, &b}) {
    const auto s = g->support();
    if (!s) continue;
    if (*s >= state.size()) throw InvalidArgument("functional support outside the state");
    if (only && *only != *s) return std::vector<std::size_t>{};
    only = s;
  }
  if (only) return std::vector<std::size_t>{*only};
  return std::nullopt;
}

template <class Body>
void for_each_mode(const Functional& f, const Functional& a, const Functional& b,
                   const SpectralState& state, Body&& body) {
  if (const auto support = common_support(f, a, b, state)) {
    for (const std::size_t j : *support) body(j);
    return;
  }
  for (std::size_t j = 0; j < state.size(); ++j) body(j);
}

}  // namespace

BracketResult bracket3(const Functional& f, const Functional& a, const Functional& b,
                       const SpectralState& state) {
  std::vector<Complex> terms;
  for_each_mode(f, a, b, state, [&](std::size_t j) {
    const Mode& m = state.mode(j);
    const ModeGradient gf = f.gradient(m, j);
    const ModeGradient ga = a.gradient(m, j);
    const ModeGradient gb = b.gradient(m, j);
    terms.push_back(m.weight * (dot(gf.e, cross(ga.e, gb.e)) + dot(gf.b, cross(ga.b, gb.b))));
  });
  return {kI * pairwise_sum(terms), BracketPath::generic};
}

double bracket_scale(const Functional& f, const Functional& a, const Functional& b,
                     const SpectralState& state) {
  std::vector<double> terms;
  for_each_mode(f, a, b, state, [&](std::size_t j) {
    const Mode& m = state.mode(j);
    const ModeGradient gf = f.gradient(m, j);
    const ModeGradient ga = a.gradient(m, j);
    const ModeGradient gb = b.gradient(m, j);
    terms.push_back(m.weight * (gf.e.norm() * ga.e.norm() * gb.e.norm() +
                                gf.b.norm() * ga.b.norm() * gb.b.norm()));
  });
  return pairwise_sum(terms);
}

BracketResult bracket_with_invariants(const Functional& f, const SpectralState& state) {
  std::vector<Complex> terms;
  const auto visit = [&](std::size_t j) {
    const Mode& m = state.mode(j);
    const ModeGradient g = f.gradient(m, j);
    const ModeRate r = closed_form_rate(m.k, m.e, m.b);
    terms.push_back(m.weight * (dot(g.e, r.e_dot) + dot(g.b, r.b_dot)));
  };
  if (const auto s = f.support()) {
    if (*s >= state.size()) throw InvalidArgument("functional support outside the state");
    visit(*s);
  } else {
    for (std::size_t j = 0; j < state.size(); ++j) visit(j);
  }
  return {pairwise_sum(terms), BracketPath::closed_form};
}

std::vector<ModeRate> maxwell_rhs(const SpectralState& state, BracketPath path) {
  std::vector<ModeRate> rates(state.size());
  if (path == BracketPath::closed_form) {
    parallel_for(state.size(), [&](std::size_t j) {
      const Mode& m = state.mode(j);
      rates[j] = closed_form_rate(m.k, m.e, m.b);
    });
    return rates;
  }
  const Functional& i1 = invariant_i1();
  const Functional& i2 = invariant_i2();
  parallel_for(state.size(), [&](std::size_t j) {
    for (int axis = 0; axis < 3; ++axis) {
      const auto a = static_cast<std::size_t>(axis);
      rates[j].e_dot[a] = bracket3(coord_e(j, axis), i1, i2, state).value;
      rates[j].b_dot[a] = bracket3(coord_b(j, axis), i1, i2, state).value;
    }
  });
  return rates;
}

double antisymmetry_check(const Functional& f, const Functional& a, const Functional& b,
                          const SpectralState& state) {
  const std::array<const Functional*, 3> args = {&f, &a, &b};
  struct Perm {
    std::array<int, 3> order;
    double sign;
  };
  constexpr std::array<Perm, 6> perms = {{{{0, 1, 2}, 1.0},
                                          {{1, 2, 0}, 1.0},
                                          {{2, 0, 1}, 1.0},
                                          {{1, 0, 2}, -1.0},
                                          {{0, 2, 1}, -1.0},
                                          {{2, 1, 0}, -1.0}}};
  std::array<Complex, 6> values{};
  double largest = 0.0;
  for (std::size_t p = 0; p < perms.size(); ++p) {
    const auto& o = perms[p].order;
    values[p] = perms[p].sign * bracket3(*args[static_cast<std::size_t>(o[0])],
                                         *args[static_cast<std::size_t>(o[1])],
                                         *args[static_cast<std::size_t>(o[2])], state)
                                    .value;
    largest = std::max(largest, std::abs(values[p]));
  }
  const double norm = std::max(largest, bracket_scale(f, a, b, state));
  if (norm == 0.0) return 0.0;
  double residual = 0.0;
  for (const auto& v : values) residual = std::max(residual, std::abs(v - values[0]));
  return residual / norm;
}

Complex conservation_rate(const Functional& f, const SpectralState& state) {
  if (!f.holomorphic()) {
    throw NonHolomorphic("non-holomorphic functional: use flow_rate (" + f.name() + ")");
  }
  return bracket3(f, invariant_i1(), invariant_i2(), state).value;
}

}  // namespace nambu_em
