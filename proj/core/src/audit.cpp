#include "nambu_em/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "nambu_em/errors.hpp"
#include "nambu_em/functionals.hpp"
#include "nambu_em/nambu_bracket.hpp"
#include "nambu_em/summation.hpp"

namespace nambu_em {

std::string_view to_string(AuditClass c) {
  switch (c) {
    case AuditClass::bracket_invariant: return "bracket_invariant";
    case AuditClass::supercasimir: return "supercasimir";
    case AuditClass::varying: return "varying";
  }
  return "unknown";
}

namespace {

constexpr std::array<std::string_view, 4> kExpectedConserved = {"I1", "I2", "S_formal", "H"};
constexpr Complex kI{0.0, 1.0};

double relative(double numerator, double scale) {
  if (scale > 0.0) return numerator / scale;
  return numerator == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

struct Accumulator {
  const Functional* f = nullptr;
  Complex initial;
  Complex last;
  double scale0 = 0.0;
  double peak = 0.0;
  double bracket_max = 0.0;
  double flow_max = 0.0;
  double residual_max = 0.0;
};

std::string describe(const AuditRecord& r, IntegratorKind kind) {
  std::string notes;
  const auto add = [&](const std::string& s) {
    if (!notes.empty()) notes += "; ";
    notes += s;
  };
  if (r.name == "G") {
    add(r.cls == AuditClass::varying
            ? "listed as an invariant of the bracket construction but varies here: peak |G(t)-G(0)| = " +
                  sci(r.peak_deviation) + ", max relative |dG/dt| = " + sci(r.flow_rate_max)
            : "constant on this initial condition");
  } else if (r.name == "H") {
    add("energy, not a bracket slot");
  } else if (r.name == "S_conj") {
    add("conjugated reading of |E|^2 - |B|^2");
  } else if (r.name == "S_formal") {
    add("unconjugated reading of |E|^2 - |B|^2");
  } else if (r.name == "H_formal") {
    add("unconjugated energy analogue, rate -4i*G");
  }
  if (r.cls == AuditClass::varying && r.name != "G") add("peak deviation " + sci(r.peak_deviation));
  if (kind != IntegratorKind::exact) {
    add("integrator " + std::string(to_string(kind)) + ": drift includes discretization error");
  }
  return notes;
}

}  // namespace

std::span<const std::string_view> expected_conserved() { return kExpectedConserved; }

const AuditRecord* AuditReport::find(std::string_view name) const {
  for (const auto& r : records) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

bool AuditReport::expected_conserved_pass() const {
  for (const auto name : kExpectedConserved) {
    const AuditRecord* r = find(name);
    if (r != nullptr && !is_conserved(r->cls)) return false;
  }
  return !aborted;
}

AuditReport run_audit(const SpectralState& state, const IntegratorSpec& spec,
                      const std::vector<std::string>& functionals,
                      const AuditThresholds& thresholds) {
  spec.check();
  AuditReport report;
  report.integrator = spec;
  report.mode_count = state.size();
  report.thresholds = thresholds;

  std::vector<std::string> names = functionals;
  if (names.empty()) {
    for (const auto n : registered_functionals()) names.emplace_back(n);
  }
  std::vector<Accumulator> acc;
  for (const auto& name : names) {
    Accumulator a;
    a.f = &functional(name);
    a.initial = evaluate(*a.f, state);
    a.scale0 = value_scale(*a.f, state);
    acc.push_back(a);
  }

  // Five-point central difference along the exact flow; the step shrinks with
  // the largest wavenumber so the truncation error stays far below roundoff.
  const double h = 1e-3 / std::max(1.0, state.max_wavenumber());
  report.fd_step = h;
  const std::array<Stepper, 4> probes = {
      Stepper(IntegratorKind::exact, state, 2.0 * h), Stepper(IntegratorKind::exact, state, h),
      Stepper(IntegratorKind::exact, state, -h), Stepper(IntegratorKind::exact, state, -2.0 * h)};
  const Stepper stepper(spec.kind, state, spec.dt);

  SpectralState current = state;
  for (std::size_t i = 0; i <= spec.steps; ++i) {
    std::array<SpectralState, 4> around;
    for (std::size_t p = 0; p < probes.size(); ++p) around[p] = probes[p].advance(current);
    for (auto& a : acc) {
      const Complex v = evaluate(*a.f, current);
      a.last = v;
      a.peak = std::max(a.peak, std::abs(v - a.initial));
      const double rs = rate_scale(*a.f, current);
      const Complex flow = flow_rate(*a.f, current);
      a.flow_max = std::max(a.flow_max, relative(std::abs(flow), rs));
      if (a.f->holomorphic()) {
        a.bracket_max = std::max(a.bracket_max, relative(std::abs(conservation_rate(*a.f, current)), rs));
      }
      const Complex fd = (-evaluate(*a.f, around[0]) + 8.0 * evaluate(*a.f, around[1]) -
                          8.0 * evaluate(*a.f, around[2]) + evaluate(*a.f, around[3])) /
                         (12.0 * h);
      a.residual_max = std::max(a.residual_max, relative(std::abs(fd - flow), rs));
    }
    if (i == spec.steps) break;
    current = stepper.advance(current);
    if (!current.is_finite()) {
      report.aborted = true;
      report.abort_reason = "non-finite field amplitudes after step " + std::to_string(i + 1);
      break;
    }
  }

  for (const auto& a : acc) {
    AuditRecord r;
    r.name = a.f->name();
    r.holomorphic = a.f->holomorphic();
    r.initial_value = a.initial;
    r.final_value = a.last;
    r.peak_deviation = a.peak;
    r.max_drift = relative(a.peak, a.scale0);
    r.rate_residual = a.residual_max;
    r.bracket_rate_max = a.bracket_max;
    r.flow_rate_max = a.flow_max;
    const bool drift_ok = r.max_drift <= thresholds.drift;
    if (r.holomorphic && r.bracket_rate_max <= thresholds.rate && drift_ok) {
      r.cls = AuditClass::bracket_invariant;
    } else if (r.flow_rate_max <= thresholds.rate && drift_ok) {
      r.cls = AuditClass::supercasimir;
    } else {
      r.cls = AuditClass::varying;
    }
    r.notes = describe(r, spec.kind);
    report.records.push_back(std::move(r));
  }
  return report;
}

Complex analytic_g_rate(const SpectralState& state) {
  std::vector<Complex> terms(state.size());
  for (std::size_t j = 0; j < state.size(); ++j) {
    const Mode& m = state.mode(j);
    const Complex ke = dot(m.k, m.e);
    const Complex kb = dot(m.k, m.b);
    terms[j] = m.weight * (ke * ke + kb * kb - m.k.norm2() * (dot(m.e, m.e) + dot(m.b, m.b)));
  }
  return kI * pairwise_sum(terms);
}

double RateCrosscheck::worst() const {
  return std::max({h_formal_bracket, h_formal_flow, h_formal_fd, g_bracket, g_flow, g_fd});
}

RateCrosscheck rate_crosscheck(const SpectralState& state, double fd_step) {
  if (!(fd_step > 0.0) || !std::isfinite(fd_step)) {
    throw InvalidArgument("finite-difference step must be finite and > 0");
  }
  const Functional& h_formal = functional("H_formal");
  const Functional& g = functional("G");
  const double scale_h = rate_scale(h_formal, state);
  const double scale_g = rate_scale(g, state);

  const Complex h_target = -4.0 * kI * evaluate(g, state);
  const Complex g_target = analytic_g_rate(state);

  const SpectralState forward = exact_step(state, fd_step);
  const SpectralState backward = exact_step(state, -fd_step);
  const auto central = [&](const Functional& f) {
    return (evaluate(f, forward) - evaluate(f, backward)) / (2.0 * fd_step);
  };

  RateCrosscheck out;
  out.h_formal_bracket = relative(std::abs(conservation_rate(h_formal, state) - h_target), scale_h);
  out.h_formal_flow = relative(std::abs(flow_rate(h_formal, state) - h_target), scale_h);
  out.h_formal_fd = relative(std::abs(central(h_formal) - h_target), scale_h);
  out.g_bracket = relative(std::abs(conservation_rate(g, state) - g_target), scale_g);
  out.g_flow = relative(std::abs(flow_rate(g, state) - g_target), scale_g);
  out.g_fd = relative(std::abs(central(g) - g_target), scale_g);
  return out;
}

std::string render_table(const AuditReport& report) {
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "%-9s  %-17s  %-10s  %-13s  %s\n", "name", "class", "max_drift",
                "rate_residual", "notes");
  out += line;
  out += std::string(9, '-') + "  " + std::string(17, '-') + "  " + std::string(10, '-') + "  " +
         std::string(13, '-') + "  " + std::string(5, '-') + "\n";
  for (const auto& r : report.records) {
    std::snprintf(line, sizeof line, "%-9s  %-17s  %-10s  %-13s  %s\n", r.name.c_str(),
                  std::string(to_string(r.cls)).c_str(), sci(r.max_drift).c_str(),
                  sci(r.rate_residual).c_str(), r.notes.c_str());
    out += line;
  }
  return out;
}

}  // namespace nambu_em
