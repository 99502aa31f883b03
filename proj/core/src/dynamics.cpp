#include "nambu_em/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nambu_em/errors.hpp"
#include "nambu_em/functionals.hpp"
#include "nambu_em/maxwell_flow.hpp"
#include "nambu_em/parallel.hpp"

namespace nambu_em {

std::string_view to_string(IntegratorKind kind) {
  switch (kind) {
    case IntegratorKind::exact: return "exact";
    case IntegratorKind::midpoint: return "midpoint";
    case IntegratorKind::rk4: return "rk4";
  }
  return "unknown";
}

std::optional<IntegratorKind> parse_integrator(std::string_view name) {
  if (name == "exact") return IntegratorKind::exact;
  if (name == "midpoint") return IntegratorKind::midpoint;
  if (name == "rk4") return IntegratorKind::rk4;
  return std::nullopt;
}

void IntegratorSpec::check() const {
  if (!(std::isfinite(dt) && dt > 0.0)) throw InvalidArgument("dt must be finite and > 0");
  if (steps < 1) throw InvalidArgument("steps must be >= 1");
  if (snapshot_every < 1) throw InvalidArgument("snapshot_every must be >= 1");
}

// --- closed-form rotation ----------------------------------------------------

RotationCoefficients::RotationCoefficients(const WaveVector& k, double dt) {
  const double kn = k.norm();
  zero_mode = kn == 0.0;
  if (zero_mode) return;
  unit_k = {{k[0] / kn, k[1] / kn, k[2] / kn}};
  cos_wt = std::cos(kn * dt);
  sin_wt = std::sin(kn * dt);
}

void RotationCoefficients::apply(ComplexVec3& e, ComplexVec3& b) const {
  if (zero_mode || (sin_wt == 0.0 && cos_wt == 1.0)) return;
  const ComplexVec3 e_par = scaled(unit_k, dot(unit_k, e));
  const ComplexVec3 b_par = scaled(unit_k, dot(unit_k, b));
  const ComplexVec3 e_perp = e - e_par;
  const ComplexVec3 b_perp = b - b_par;
  const Complex is(0.0, sin_wt);
  const ComplexVec3 e_new = e_par + cos_wt * e_perp + is * cross(unit_k, b_perp);
  const ComplexVec3 b_new = b_par + cos_wt * b_perp - is * cross(unit_k, e_perp);
  e = e_new;
  b = b_new;
}

// --- Cayley map ---------------------------------------------------------------

CayleyPropagator::Matrix CayleyPropagator::generator(const WaveVector& k) {
  // [k]× so that cross(k, v) = K v.
  const std::array<std::array<double, 3>, 3> kx = {
      {{0.0, -k[2], k[1]}, {k[2], 0.0, -k[0]}, {-k[1], k[0], 0.0}}};
  Matrix m{};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      m[r][c + 3] = Complex(0.0, kx[r][c]);
      m[r + 3][c] = Complex(0.0, -kx[r][c]);
    }
  }
  return m;
}

CayleyPropagator::CayleyPropagator(const WaveVector& k, double dt) {
  const Matrix gen = generator(k);
  const double half = 0.5 * dt;
  Matrix lhs{};
  Matrix rhs{};
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < 6; ++c) {
      const Complex id = r == c ? 1.0 : 0.0;
      lhs[r][c] = id - half * gen[r][c];
      rhs[r][c] = id + half * gen[r][c];
    }
  }
  // Gaussian elimination with partial pivoting on [lhs | rhs].
  for (std::size_t col = 0; col < 6; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < 6; ++r) {
      if (std::abs(lhs[r][col]) > std::abs(lhs[piv][col])) piv = r;
    }
    const double pivot_size = std::abs(lhs[piv][col]);
    if (!(pivot_size > 1e-300) || !std::isfinite(pivot_size)) {
      throw NumericalError("Cayley solve: degenerate pivot");
    }
    std::swap(lhs[piv], lhs[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < 6; ++r) {
      const Complex factor = lhs[r][col] / lhs[col][col];
      if (factor == Complex{}) continue;
      for (std::size_t c = col; c < 6; ++c) lhs[r][c] -= factor * lhs[col][c];
      for (std::size_t c = 0; c < 6; ++c) rhs[r][c] -= factor * rhs[col][c];
    }
  }
  for (std::size_t rc = 6; rc-- > 0;) {
    for (std::size_t c = 0; c < 6; ++c) {
      Complex acc = rhs[rc][c];
      for (std::size_t j = rc + 1; j < 6; ++j) acc -= lhs[rc][j] * map_[j][c];
      map_[rc][c] = acc / lhs[rc][rc];
    }
  }
}

void CayleyPropagator::apply(ComplexVec3& e, ComplexVec3& b) const {
  const std::array<Complex, 6> x = {e[0], e[1], e[2], b[0], b[1], b[2]};
  std::array<Complex, 6> y{};
  for (std::size_t r = 0; r < 6; ++r) {
    Complex acc{};
    for (std::size_t c = 0; c < 6; ++c) acc += map_[r][c] * x[c];
    y[r] = acc;
  }
  e = {{y[0], y[1], y[2]}};
  b = {{y[3], y[4], y[5]}};
}

// --- RK4 ------------------------------------------------------------------------

namespace {

void rk4_mode(const WaveVector& k, double h, ComplexVec3& e, ComplexVec3& b) {
  const auto f = [&](const ComplexVec3& ee, const ComplexVec3& bb) {
    return closed_form_rate(k, ee, bb);
  };
  const ModeRate k1 = f(e, b);
  const ModeRate k2 = f(e + (0.5 * h) * k1.e_dot, b + (0.5 * h) * k1.b_dot);
  const ModeRate k3 = f(e + (0.5 * h) * k2.e_dot, b + (0.5 * h) * k2.b_dot);
  const ModeRate k4 = f(e + h * k3.e_dot, b + h * k3.b_dot);
  const double w = h / 6.0;
  e += w * (k1.e_dot + 2.0 * k2.e_dot + 2.0 * k3.e_dot + k4.e_dot);
  b += w * (k1.b_dot + 2.0 * k2.b_dot + 2.0 * k3.b_dot + k4.b_dot);
}

}  // namespace

// --- steppers -------------------------------------------------------------------

Stepper::Stepper(IntegratorKind kind, const SpectralState& layout, double dt)
    : kind_(kind), dt_(dt), mode_count_(layout.size()) {
  if (!std::isfinite(dt)) throw InvalidArgument("dt must be finite");
  switch (kind_) {
    case IntegratorKind::exact:
      rotation_.reserve(mode_count_);
      for (const auto& m : layout.modes()) rotation_.emplace_back(m.k, dt);
      break;
    case IntegratorKind::midpoint:
      cayley_.reserve(mode_count_);
      for (const auto& m : layout.modes()) cayley_.emplace_back(m.k, dt);
      break;
    case IntegratorKind::rk4:
      break;
  }
}

SpectralState Stepper::advance(const SpectralState& state) const {
  if (state.size() != mode_count_) throw InvalidArgument("stepper built for a different layout");
  std::vector<ComplexVec3> e(state.size());
  std::vector<ComplexVec3> b(state.size());
  parallel_for(state.size(), [&](std::size_t j) {
    const Mode& m = state.mode(j);
    e[j] = m.e;
    b[j] = m.b;
    switch (kind_) {
      case IntegratorKind::exact: rotation_[j].apply(e[j], b[j]); break;
      case IntegratorKind::midpoint: cayley_[j].apply(e[j], b[j]); break;
      case IntegratorKind::rk4: rk4_mode(m.k, dt_, e[j], b[j]); break;
    }
  });
  return state.with_fields(std::move(e), std::move(b));
}

SpectralState exact_step(const SpectralState& state, double dt) {
  return Stepper(IntegratorKind::exact, state, dt).advance(state);
}

SpectralState midpoint_step(const SpectralState& state, double dt) {
  return Stepper(IntegratorKind::midpoint, state, dt).advance(state);
}

SpectralState rk4_step(const SpectralState& state, double dt) {
  return Stepper(IntegratorKind::rk4, state, dt).advance(state);
}

SpectralState step(IntegratorKind kind, const SpectralState& state, double dt) {
  return Stepper(kind, state, dt).advance(state);
}

// --- trajectories ---------------------------------------------------------------

namespace {

DiagnosticRecord diagnose(double t, const SpectralState& state,
                          const std::vector<const Functional*>& fs) {
  DiagnosticRecord rec;
  rec.t = t;
  rec.values.reserve(fs.size());
  for (const Functional* f : fs) rec.values.push_back(evaluate(*f, state));
  const ConstraintResiduals r = constraint_residuals(state);
  rec.gauss_max = std::max(r.gauss_e, r.gauss_b);
  rec.herm_max = r.hermitian;
  return rec;
}

}  // namespace

Trajectory simulate(const SpectralState& state, const IntegratorSpec& spec,
                    const std::vector<std::string>& functionals) {
  spec.check();
  Trajectory traj;
  if (functionals.empty()) {
    for (const auto name : registered_functionals()) traj.functional_names.emplace_back(name);
  } else {
    traj.functional_names = functionals;
  }
  std::vector<const Functional*> fs;
  for (const auto& name : traj.functional_names) fs.push_back(&functional(name));

  traj.diagnostics.reserve(spec.steps + 1);
  traj.diagnostics.push_back(diagnose(0.0, state, fs));
  traj.snapshots.push_back({0.0, state});

  SpectralState current = state;
  try {
    const Stepper stepper(spec.kind, state, spec.dt);
    for (std::size_t i = 1; i <= spec.steps; ++i) {
      current = stepper.advance(current);
      if (!current.is_finite()) {
        throw NumericalError("non-finite field amplitudes after step " + std::to_string(i));
      }
      const double t = static_cast<double>(i) * spec.dt;
      traj.diagnostics.push_back(diagnose(t, current, fs));
      const DiagnosticRecord& rec = traj.diagnostics.back();
      const bool finite = std::all_of(rec.values.begin(), rec.values.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
      });
      if (!finite) {
        throw NumericalError("diagnostics overflowed at step " + std::to_string(i));
      }
      if (i % spec.snapshot_every == 0) traj.snapshots.push_back({t, current});
    }
  } catch (const NumericalError& err) {
    traj.aborted = true;
    traj.abort_reason = err.what();
  }
  return traj;
}

}  // namespace nambu_em
