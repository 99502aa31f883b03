#include "nambu_em/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nambu_em/errors.hpp"
#include "nambu_em/summation.hpp"

namespace nambu_em {

// --- GridDescriptor ---------------------------------------------------------

std::size_t GridDescriptor::size() const {
  return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]) *
         static_cast<std::size_t>(n[2]);
}

std::size_t GridDescriptor::flat(const std::array<int, 3>& idx) const {
  return (static_cast<std::size_t>(idx[0]) * static_cast<std::size_t>(n[1]) +
          static_cast<std::size_t>(idx[1])) *
             static_cast<std::size_t>(n[2]) +
         static_cast<std::size_t>(idx[2]);
}

std::array<int, 3> GridDescriptor::unflatten(std::size_t flat_index) const {
  const auto nz = static_cast<std::size_t>(n[2]);
  const auto ny = static_cast<std::size_t>(n[1]);
  const int iz = static_cast<int>(flat_index % nz);
  const int iy = static_cast<int>((flat_index / nz) % ny);
  const int ix = static_cast<int>(flat_index / (nz * ny));
  return {ix, iy, iz};
}

int GridDescriptor::signed_index(int axis, int i) const {
  const int size = n[static_cast<std::size_t>(axis)];
  return i <= size / 2 ? i : i - size;
}

std::array<int, 3> GridDescriptor::signed_indices(std::size_t flat_index) const {
  const auto idx = unflatten(flat_index);
  return {signed_index(0, idx[0]), signed_index(1, idx[1]), signed_index(2, idx[2])};
}

std::size_t GridDescriptor::flat_from_signed(const std::array<int, 3>& signed_idx) const {
  std::array<int, 3> idx{};
  for (std::size_t a = 0; a < 3; ++a) {
    idx[a] = ((signed_idx[a] % n[a]) + n[a]) % n[a];
  }
  return flat(idx);
}

WaveVector GridDescriptor::wave_vector(std::size_t flat_index) const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const auto s = signed_indices(flat_index);
  WaveVector k;
  for (std::size_t a = 0; a < 3; ++a) {
    k[a] = two_pi * static_cast<double>(s[a]) / length[a];
  }
  return k;
}

bool GridDescriptor::is_nyquist(std::size_t flat_index) const {
  const auto idx = unflatten(flat_index);
  for (std::size_t a = 0; a < 3; ++a) {
    if (n[a] % 2 == 0 && idx[a] == n[a] / 2) return true;
  }
  return false;
}

void GridDescriptor::check() const {
  for (std::size_t a = 0; a < 3; ++a) {
    if (n[a] < 1) throw InvalidArgument("grid dimensions must be >= 1");
    if (!(std::isfinite(length[a]) && length[a] > 0.0)) {
      throw InvalidArgument("grid lengths must be finite and > 0");
    }
  }
}

std::size_t hermitian_pair_index(const GridDescriptor& grid, std::size_t mode_index) {
  if (mode_index >= grid.size()) throw InvalidArgument("mode index outside the grid");
  const auto idx = grid.unflatten(mode_index);
  std::array<int, 3> neg{};
  for (std::size_t a = 0; a < 3; ++a) neg[a] = (grid.n[a] - idx[a]) % grid.n[a];
  return grid.flat(neg);
}

// --- SpectralState ----------------------------------------------------------

namespace {

std::vector<Complex> record_charge(const std::vector<Mode>& modes) {
  std::vector<Complex> c;
  c.reserve(modes.size());
  for (const auto& m : modes) c.push_back(dot(m.k, m.e));
  return c;
}

}  // namespace

SpectralState SpectralState::ingest(std::vector<Mode> modes) {
  auto charge = record_charge(modes);
  return SpectralState(std::move(modes), std::move(charge));
}

SpectralState SpectralState::ingest(const GridDescriptor& grid, std::vector<Mode> modes) {
  grid.check();
  if (modes.size() != grid.size()) {
    throw InvalidState("grid state needs " + std::to_string(grid.size()) + " modes, got " +
                       std::to_string(modes.size()));
  }
  for (std::size_t j = 0; j < modes.size(); ++j) {
    modes[j].k = grid.wave_vector(j);
    modes[j].hermitian_partner = hermitian_pair_index(grid, j);
  }
  auto charge = record_charge(modes);
  return SpectralState(std::move(modes), std::move(charge), grid);
}

SpectralState::SpectralState(std::vector<Mode> modes, std::vector<Complex> charge,
                             std::optional<GridDescriptor> grid)
    : modes_(std::move(modes)), charge_(std::move(charge)), grid_(std::move(grid)) {
  check_structure();
}

void SpectralState::check_structure() const {
  if (charge_.size() != modes_.size()) {
    throw InvalidState("constraint table size does not match the mode count");
  }
  for (std::size_t j = 0; j < modes_.size(); ++j) {
    const Mode& m = modes_[j];
    if (!(std::isfinite(m.weight) && m.weight > 0.0)) {
      throw InvalidState("mode " + std::to_string(j) + ": weight must be finite and > 0");
    }
    if (m.hermitian_partner) {
      const std::size_t p = *m.hermitian_partner;
      if (p >= modes_.size()) {
        throw InvalidState("mode " + std::to_string(j) + ": partner index out of range");
      }
      const Mode& partner = modes_[p];
      if (partner.hermitian_partner != j) {
        throw InvalidState("mode " + std::to_string(j) + ": pairing is not symmetric");
      }
      // Nyquist points pair with -k only modulo the grid.
      const bool nyquist = grid_ && (grid_->is_nyquist(j) || grid_->is_nyquist(p));
      if (p != j && !nyquist && !(partner.k == -m.k)) {
        throw InvalidState("mode " + std::to_string(j) + ": partner wave vector is not -k");
      }
    }
  }
  if (grid_) {
    grid_->check();
    if (grid_->size() != modes_.size()) {
      throw InvalidState("grid size does not match the mode count");
    }
    for (std::size_t j = 0; j < modes_.size(); ++j) {
      if (!(modes_[j].k == grid_->wave_vector(j))) {
        throw InvalidState("mode " + std::to_string(j) + ": wave vector does not match the grid");
      }
      if (modes_[j].hermitian_partner != hermitian_pair_index(*grid_, j)) {
        throw InvalidState("mode " + std::to_string(j) + ": pairing does not match the grid");
      }
    }
  }
}

bool SpectralState::hermitian_paired() const {
  return std::any_of(modes_.begin(), modes_.end(),
                     [](const Mode& m) { return m.hermitian_partner.has_value(); });
}

SpectralState SpectralState::with_fields(std::vector<ComplexVec3> e,
                                         std::vector<ComplexVec3> b) const {
  if (e.size() != modes_.size() || b.size() != modes_.size()) {
    throw InvalidState("field arrays do not match the mode count");
  }
  SpectralState out;
  out.modes_ = modes_;
  for (std::size_t j = 0; j < modes_.size(); ++j) {
    out.modes_[j].e = e[j];
    out.modes_[j].b = b[j];
  }
  out.charge_ = charge_;
  out.grid_ = grid_;
  return out;
}

double SpectralState::max_wavenumber() const {
  double kmax = 0.0;
  for (const auto& m : modes_) kmax = std::max(kmax, m.k.norm());
  return kmax;
}

double SpectralState::energy_norm() const {
  std::vector<double> terms;
  terms.reserve(modes_.size());
  for (const auto& m : modes_) {
    const double e = m.e.norm();
    const double b = m.b.norm();
    terms.push_back(m.weight * (e * e + b * b));
  }
  return pairwise_sum(terms);
}

bool SpectralState::is_finite() const {
  return std::all_of(modes_.begin(), modes_.end(),
                     [](const Mode& m) { return m.e.is_finite() && m.b.is_finite(); });
}

std::size_t hermitian_pair_index(const SpectralState& state, std::size_t mode_index) {
  if (mode_index >= state.size()) throw InvalidArgument("mode index out of range");
  if (state.grid()) return hermitian_pair_index(*state.grid(), mode_index);
  const auto& partner = state.mode(mode_index).hermitian_partner;
  if (!partner) {
    throw NoHermitianPairing("mode " + std::to_string(mode_index) +
                             " of an explicit mode list declares no Hermitian partner");
  }
  return *partner;
}

// --- validation -------------------------------------------------------------

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::gauss_e: return "gauss_e";
    case ConstraintKind::gauss_b: return "gauss_b";
    case ConstraintKind::hermitian: return "hermitian";
    case ConstraintKind::nyquist: return "nyquist";
  }
  return "unknown";
}

const Violation* ValidationReport::find(ConstraintKind kind) const {
  for (const auto& v : violations) {
    if (v.kind == kind) return &v;
  }
  return nullptr;
}

namespace {

struct Worst {
  double magnitude = 0.0;
  std::size_t index = 0;

  void offer(double value, std::size_t j) {
    // NaN residuals must surface as violations.
    if (std::isnan(value)) value = std::numeric_limits<double>::infinity();
    if (value > magnitude) {
      magnitude = value;
      index = j;
    }
  }
};

struct ResidualScan {
  Worst gauss_e, gauss_b, hermitian, nyquist;
};

ResidualScan scan(const SpectralState& state) {
  ResidualScan r;
  const auto& modes = state.modes();
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const Mode& m = modes[j];
    r.gauss_e.offer(std::abs(dot(m.k, m.e) - state.charge()[j]), j);
    r.gauss_b.offer(std::abs(dot(m.k, m.b)), j);
    if (m.hermitian_partner) {
      const Mode& p = modes[*m.hermitian_partner];
      r.hermitian.offer(std::max((p.e - conj(m.e)).norm(), (p.b - conj(m.b)).norm()), j);
    }
    if (state.grid() && state.grid()->is_nyquist(j)) {
      r.nyquist.offer(std::max(m.e.norm(), m.b.norm()), j);
    }
  }
  return r;
}

}  // namespace

ConstraintResiduals constraint_residuals(const SpectralState& state) {
  const auto r = scan(state);
  return {r.gauss_e.magnitude, r.gauss_b.magnitude, r.hermitian.magnitude, r.nyquist.magnitude};
}

ValidationReport validate(const SpectralState& state, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("validation tolerance must be > 0");
  const auto r = scan(state);
  ValidationReport report;
  const auto add = [&](ConstraintKind kind, const Worst& w) {
    if (w.magnitude > tol) report.violations.push_back({kind, w.index, w.magnitude});
  };
  add(ConstraintKind::gauss_e, r.gauss_e);
  add(ConstraintKind::gauss_b, r.gauss_b);
  add(ConstraintKind::hermitian, r.hermitian);
  add(ConstraintKind::nyquist, r.nyquist);
  return report;
}

SpectralState project_constraints(const SpectralState& state) {
  std::vector<ComplexVec3> e(state.size());
  std::vector<ComplexVec3> b(state.size());
  for (std::size_t j = 0; j < state.size(); ++j) {
    const Mode& m = state.mode(j);
    const Complex c = state.charge()[j];
    if (m.k.is_zero()) {
      if (c != Complex{}) {
        throw ConstraintError("Gauss law unsatisfiable: nonzero constraint value on the zero mode");
      }
      e[j] = m.e;
      b[j] = m.b;
      continue;
    }
    const double k2 = m.k.norm2();
    b[j] = m.b - scaled(m.k, dot(m.k, m.b) / k2);
    e[j] = m.e - scaled(m.k, dot(m.k, m.e) / k2) + scaled(m.k, c / k2);
  }
  return state.with_fields(std::move(e), std::move(b));
}

SpectralState select_modes(const SpectralState& state,
                           const std::function<bool(std::size_t)>& keep) {
  constexpr auto kDropped = static_cast<std::size_t>(-1);
  std::vector<std::size_t> remap(state.size(), kDropped);
  std::size_t count = 0;
  for (std::size_t j = 0; j < state.size(); ++j) {
    if (keep(j)) remap[j] = count++;
  }
  std::vector<Mode> modes;
  std::vector<Complex> charge;
  modes.reserve(count);
  charge.reserve(count);
  for (std::size_t j = 0; j < state.size(); ++j) {
    if (remap[j] == kDropped) continue;
    Mode m = state.mode(j);
    if (m.hermitian_partner) {
      const std::size_t p = remap[*m.hermitian_partner];
      if (p == kDropped) {
        throw InvalidArgument("mode selection is not closed under Hermitian pairing");
      }
      m.hermitian_partner = p;
    }
    modes.push_back(m);
    charge.push_back(state.charge()[j]);
  }
  return SpectralState(std::move(modes), std::move(charge));
}

}  // namespace nambu_em
