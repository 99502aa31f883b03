// Acceptance suite: one pass/fail line per criterion (sub-lines where a
// criterion bundles several claims). Usage:
//   acceptance [--criterion N] [--workdir DIR]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nambu_em/audit.hpp"
#include "nambu_em/dynamics.hpp"
#include "nambu_em/functionals.hpp"
#include "nambu_em/nambu_bracket.hpp"
#include "nambu_em/realspace_bridge.hpp"
#include "nambu_em_cli/commands.hpp"
#include "nambu_em_cli/run_config.hpp"
#include "oracles.hpp"

using namespace nambu_em;
namespace t = nambu_em::testing;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Line {
  std::string id;
  bool pass;
  std::string detail;
};

using Lines = std::vector<Line>;
using Clock = std::chrono::steady_clock;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Line runtime_line(const std::string& id, double elapsed, double limit) {
  return {id, elapsed < limit, "runtime " + sci(elapsed) + " s (limit " + sci(limit) + " s)"};
}

SpectralState preset_state(const std::string& name) {
  return cli::initial_state(cli::parse_config(cli::preset_text(name), "preset:" + name));
}

cli::RunConfig preset_config(const std::string& name) {
  return cli::parse_config(cli::preset_text(name), "preset:" + name);
}

double rhs_max(const std::vector<ModeRate>& r) {
  double worst = 0.0;
  for (const auto& m : r) {
    for (int c = 0; c < 3; ++c) worst = std::max({worst, std::abs(m.e_dot[c]), std::abs(m.b_dot[c])});
  }
  return worst;
}

double mode_energy(const Mode& m) {
  const double e = m.e.norm();
  const double b = m.b.norm();
  return e * e + b * b;
}

// 1. Generic bracket flow equals the closed-form field equations.
Lines criterion1() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> size(1, 512);
  double worst = 0.0;
  std::size_t largest = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = trial == 0 ? 512 : size(rng);
    largest = std::max(largest, n);
    const auto s = t::random_state(rng, n, {.random_weights = trial % 2 == 0});
    const auto generic = maxwell_rhs(s, BracketPath::generic);
    const auto closed = maxwell_rhs(s, BracketPath::closed_form);
    double diff = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      for (int c = 0; c < 3; ++c) {
        diff = std::max(diff, std::abs(generic[j].e_dot[c] - closed[j].e_dot[c]));
        diff = std::max(diff, std::abs(generic[j].b_dot[c] - closed[j].b_dot[c]));
      }
    }
    const double scale = rhs_max(closed);
    worst = std::max(worst, scale > 0 ? diff / scale : diff);
  }
  const double elapsed = seconds_since(start);
  return {{"C1", worst <= 1e-13,
           "generic vs closed-form maxwell_rhs, 100 states up to " + std::to_string(largest) +
               " modes: max relative difference " + sci(worst) + " (limit 1e-13)"},
          runtime_line("C1.runtime", elapsed, 10.0)};
}

// 2. Total antisymmetry over (I1, I2, G) and (I1, I2, S_formal).
Lines criterion2() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::size_t> size(1, 64);
  double worst_g = 0.0;
  double worst_s = 0.0;
  const auto& i1 = functional("I1");
  const auto& i2 = functional("I2");
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = t::random_state(rng, size(rng), {.random_weights = trial % 2 == 1});
    worst_g = std::max(worst_g, antisymmetry_check(i1, i2, functional("G"), s));
    worst_s = std::max(worst_s, antisymmetry_check(i1, i2, functional("S_formal"), s));
  }
  const double elapsed = seconds_since(start);
  return {{"C2.G", worst_g <= 1e-13, "antisymmetry (I1, I2, G), 100 states: max residual " + sci(worst_g) + " (limit 1e-13)"},
          {"C2.S_formal", worst_s <= 1e-13,
           "antisymmetry (I1, I2, S_formal), 100 states: max residual " + sci(worst_s) + " (limit 1e-13)"},
          runtime_line("C2.runtime", elapsed, 10.0)};
}

std::vector<SpectralState> conservation_corpus() {
  std::mt19937_64 rng(1003);
  std::vector<SpectralState> corpus;
  for (int i = 0; i < 10; ++i) corpus.push_back(t::random_state(rng, 64, {.random_weights = i % 2 == 0}));
  for (int i = 0; i < 10; ++i) corpus.push_back(t::random_paired_state(rng, 32, i % 2 == 0));
  for (const char* name : {"planewave", "standing", "coulomb", "random32"}) corpus.push_back(preset_state(name));
  return corpus;
}

// 3. I1 and I2 conserved by construction and along exact trajectories.
Lines criterion3() {
  const auto start = Clock::now();
  const auto corpus = conservation_corpus();
  const auto& i1 = functional("I1");
  const auto& i2 = functional("I2");
  double rate_worst = 0.0;
  double drift_worst = 0.0;
  for (const auto& s : corpus) {
    for (const Functional* f : {&i1, &i2}) {
      const double scale = rate_scale(*f, s);
      const double r = std::abs(conservation_rate(*f, s));
      rate_worst = std::max(rate_worst, scale > 0 ? r / scale : r);
    }
    const double dt = 0.1;
    const Stepper stepper(IntegratorKind::exact, s, dt);
    const Complex a0 = evaluate(i1, s);
    const Complex b0 = evaluate(i2, s);
    const double sa = value_scale(i1, s);
    const double sb = value_scale(i2, s);
    SpectralState cur = s;
    for (int n = 0; n < 1000; ++n) {  // T = 100
      cur = stepper.advance(cur);
      if (sa > 0) drift_worst = std::max(drift_worst, std::abs(evaluate(i1, cur) - a0) / sa);
      if (sb > 0) drift_worst = std::max(drift_worst, std::abs(evaluate(i2, cur) - b0) / sb);
    }
  }
  const double elapsed = seconds_since(start);
  const std::string n = std::to_string(corpus.size());
  return {{"C3.rate", rate_worst <= 1e-13,
           "|conservation_rate| of I1, I2 over " + n + " states: max " + sci(rate_worst) + " x scale (limit 1e-13)"},
          {"C3.drift", drift_worst <= 1e-11,
           "I1, I2 drift under exact integrator over T=100: max relative " + sci(drift_worst) + " (limit 1e-11)"},
          runtime_line("C3.runtime", elapsed, 30.0)};
}

// 4. Energy as a supercasimir under exact and midpoint stepping.
Lines criterion4() {
  const SpectralState s = preset_state("random32");
  const auto& h = functional("H");
  const double h0 = evaluate(h, s).real();
  Lines lines;
  for (auto kind : {IntegratorKind::exact, IntegratorKind::midpoint}) {
    const Stepper stepper(kind, s, 0.01);
    SpectralState cur = s;
    double drift = 0.0;
    double per_mode = 0.0;
    for (int n = 0; n < 10000; ++n) {
      const SpectralState next = stepper.advance(cur);
      for (std::size_t j = 0; j < next.size(); ++j) {
        const double before = mode_energy(cur.mode(j));
        if (before > 0) per_mode = std::max(per_mode, std::abs(mode_energy(next.mode(j)) - before) / before);
      }
      cur = next;
      drift = std::max(drift, std::abs(evaluate(h, cur).real() - h0) / h0);
    }
    const std::string k(to_string(kind));
    lines.push_back({"C4.drift." + k, drift <= 1e-11,
                     k + ", 10^4 steps dt=0.01, " + std::to_string(s.size()) + " modes: H drift " + sci(drift) +
                         " relative (limit 1e-11)"});
    lines.push_back({"C4.per_mode." + k, per_mode <= 1e-13,
                     k + ": max per-step per-mode energy change " + sci(per_mode) + " relative (limit 1e-13)"});
  }
  return lines;
}

// 5. Ambiguity audit.
Lines criterion5() {
  Lines lines;
  const auto pw_cfg = preset_config("planewave");
  const SpectralState pw = cli::initial_state(pw_cfg);
  const AuditReport pw_report = run_audit(pw, pw_cfg.integrator);
  const double measurable = 1e-6;

  const AuditRecord* sf = pw_report.find("S_formal");
  lines.push_back({"C5.S_formal_conserved", is_conserved(sf->cls) && sf->max_drift <= 1e-10,
                   "plane-wave preset: S_formal class " + std::string(to_string(sf->cls)) + ", drift " +
                       sci(sf->max_drift) + " (limit 1e-10)"});

  const AuditRecord* g = pw_report.find("G");
  lines.push_back({"C5.G_varies", g->cls == AuditClass::varying && g->max_drift >= measurable,
                   "plane-wave preset: G class " + std::string(to_string(g->cls)) + ", relative drift " +
                       sci(g->max_drift) + ", peak |dG| " + sci(g->peak_deviation) + " (measurable: >= 1e-6)"});

  const AuditRecord* sc = pw_report.find("S_conj");
  lines.push_back({"C5.S_conj_varies", sc->cls == AuditClass::varying && sc->max_drift >= measurable,
                   "plane-wave preset: S_conj class " + std::string(to_string(sc->cls)) + ", relative drift " +
                       sci(sc->max_drift) + ", peak |dS_conj| " + sci(sc->peak_deviation) +
                       " (measurable: >= 1e-6; a traveling wave keeps |E| = |B|)"});

  const auto sw_cfg = preset_config("standing");
  const AuditReport sw = run_audit(cli::initial_state(sw_cfg), sw_cfg.integrator);
  const AuditRecord* sw_sc = sw.find("S_conj");
  lines.push_back({"C5.S_conj_varies_standing", sw_sc->cls == AuditClass::varying && sw_sc->max_drift >= measurable,
                   "supplementary, standing-wave preset: S_conj class " + std::string(to_string(sw_sc->cls)) +
                       ", relative drift " + sci(sw_sc->max_drift) + " (not a substitute for the plane-wave line)"});

  // G's finite-differenced rate along the plane-wave trajectory vs the analytic rate.
  const auto& gf = functional("G");
  double rate_worst = 0.0;
  SpectralState cur = pw;
  const double fd = 1e-4;
  for (int n = 0; n <= 100; ++n) {
    const Complex numeric = (evaluate(gf, exact_step(cur, fd)) - evaluate(gf, exact_step(cur, -fd))) / (2 * fd);
    rate_worst = std::max(rate_worst, std::abs(numeric - analytic_g_rate(cur)) / rate_scale(gf, cur));
    cur = exact_step(cur, pw_cfg.integrator.dt);
  }
  lines.push_back({"C5.G_rate", rate_worst <= 1e-6,
                   "plane-wave trajectory: |FD dG/dt - analytic| max " + sci(rate_worst) + " relative (limit 1e-6)"});

  const auto r32_cfg = preset_config("random32");
  const AuditReport r32 = run_audit(cli::initial_state(r32_cfg), r32_cfg.integrator);
  std::string conserved, varying;
  for (const auto& rec : r32.records) (is_conserved(rec.cls) ? conserved : varying) += rec.name + " ";
  const bool exact_split = conserved == "I1 I2 H S_formal " && varying == "S_conj H_formal G ";
  lines.push_back({"C5.classification", exact_split,
                   "random32 preset: conserved {" + conserved + "} varying {" + varying + "}"});

  lines.push_back({"C5.G_documented", g->notes.find("varies") != std::string::npos,
                   "audit note for G: \"" + g->notes + "\""});
  return lines;
}

// 6. d(H_formal)/dt = −4i G.
Lines criterion6() {
  std::mt19937_64 rng(1006);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = trial % 2 == 0 ? t::random_paired_state(rng, 24) : t::random_state(rng, 48, {.k_range = 2.0});
    const RateCrosscheck c = rate_crosscheck(s);
    worst = std::max({worst, c.h_formal_bracket, c.h_formal_flow, c.h_formal_fd});
  }
  return {{"C6", worst <= 1e-6,
           "d(H_formal)/dt vs -4i G, 20 states (bracket, flow, finite difference): max residual " + sci(worst) +
               " (limit 1e-6)"}};
}

// 7. Observed integrator orders against the exact propagator.
Lines criterion7() {
  const auto start = Clock::now();
  const auto cfg = preset_config("planewave");
  const SpectralState s = cli::initial_state(cfg);
  const double dt0 = cfg.convergence.dt.value_or(cfg.integrator.dt);
  const std::size_t steps0 = cfg.convergence.steps.value_or(cfg.integrator.steps);
  const SpectralState reference = exact_step(s, dt0 * static_cast<double>(steps0));
  Lines lines;
  for (auto [kind, p] : {std::pair{IntegratorKind::rk4, 4.0}, std::pair{IntegratorKind::midpoint, 2.0}}) {
    std::vector<double> errors;
    for (int level = 0; level <= 5; ++level) {
      const double dt = std::ldexp(dt0, -level);
      const Stepper stepper(kind, s, dt);
      SpectralState cur = s;
      for (std::size_t n = 0; n < (steps0 << level); ++n) cur = stepper.advance(cur);
      errors.push_back(t::max_abs_diff(cur, reference));
    }
    bool ok = true;
    std::string orders;
    for (std::size_t i = 1; i < errors.size(); ++i) {
      const double order = std::log2(errors[i - 1] / errors[i]);
      ok = ok && std::abs(order - p) <= 0.1;
      char buf[16];
      std::snprintf(buf, sizeof buf, "%.4f ", order);
      orders += buf;
    }
    const std::string k(to_string(kind));
    lines.push_back({"C7." + k, ok, k + " orders over 5 halvings: " + orders + "(expected " + sci(p) + " +- 0.1)"});
  }
  lines.push_back(runtime_line("C7.runtime", seconds_since(start), 10.0));
  return lines;
}

// 8. Plane-wave period and coulomb fixed point.
Lines criterion8() {
  const SpectralState pw = preset_state("planewave");
  double kmag = 0.0;
  for (const Mode& m : pw.modes()) {
    if (mode_energy(m) > 0) kmag = std::max(kmag, m.k.norm());
  }
  const double period = 2 * pi / kmag;
  const double one_shot = t::max_abs_diff(exact_step(pw, period), pw);
  const Stepper stepper(IntegratorKind::exact, pw, period / 100);
  SpectralState cur = pw;
  for (int n = 0; n < 100; ++n) cur = stepper.advance(cur);
  const double stepped = t::max_abs_diff(cur, pw);

  const auto cfg = preset_config("coulomb");
  const SpectralState c = cli::initial_state(cfg);
  double fixed = 0.0;
  for (auto kind : {IntegratorKind::exact, IntegratorKind::midpoint, IntegratorKind::rk4}) {
    const Stepper st(kind, c, cfg.integrator.dt);
    SpectralState x = c;
    for (std::size_t n = 0; n < cfg.integrator.steps; ++n) {
      const SpectralState next = st.advance(x);
      fixed = std::max(fixed, t::max_abs_diff(next, x));
      x = next;
    }
  }
  return {{"C8.period", std::max(one_shot, stepped) <= 1e-12,
           "plane wave |k|=" + sci(kmag) + " after T=2pi/|k|: max |dstate| " + sci(one_shot) + " (one step), " + sci(stepped) +
               " (100 steps) (limit 1e-12)"},
          {"C8.coulomb", fixed <= 1e-14,
           "coulomb preset, exact/midpoint/rk4: max per-step change " + sci(fixed) + " (limit 1e-14)"}};
}

// 9. Real-space bridge.
Lines criterion9() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1009);
  double round_trip = 0.0;
  double parseval = 0.0;
  for (int n : {4, 8, 16, 32}) {
    const auto f = t::random_lattice(rng, {n, n, n}, {2 * pi, 2 * pi, 2 * pi});
    const auto s = to_spectral(f, kDefaultConstraintTol, TransformPath::direct);
    const auto back = to_lattice(s, kDefaultConstraintTol, TransformPath::direct);
    double diff = 0.0, size = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (int c = 0; c < 3; ++c) {
        diff = std::max({diff, std::abs(back.e[i][c] - f.e[i][c]), std::abs(back.b[i][c] - f.b[i][c])});
        size = std::max({size, std::abs(f.e[i][c]), std::abs(f.b[i][c])});
      }
    }
    round_trip = std::max(round_trip, diff / size);
    parseval = std::max(parseval, parseval_check(f, s));
  }
  const double elapsed = seconds_since(start);
  return {{"C9.round_trip", round_trip <= 1e-12,
           "direct DFT round trip on 4^3..32^3: max relative error " + sci(round_trip) + " (limit 1e-12)"},
          {"C9.parseval", parseval <= 1e-12, "Parseval discrepancy max " + sci(parseval) + " (limit 1e-12)"},
          runtime_line("C9.runtime", elapsed, 60.0)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// 10. Byte-identical outputs for repeated runs.
Lines criterion10(const fs::path& workdir) {
  Lines lines;
  for (const char* preset : {"planewave", "standing", "random32", "coulomb"}) {
    bool identical = true;
    std::size_t files = 0;
    int codes = 0;
    for (const char* cmd : {"run", "audit"}) {
      std::array<fs::path, 2> dirs;
      for (int rep = 0; rep < 2; ++rep) {
        dirs[rep] = workdir / "determinism" / preset / cmd / std::to_string(rep);
        fs::remove_all(dirs[rep]);
        const std::string out = dirs[rep].string();
        const char* argv[] = {"nambu-em", cmd, "--preset", preset, "--seed", "42", "--out", out.c_str()};
        std::ostringstream log, err;
        codes |= cli::dispatch(8, argv, log, err);
      }
      for (const auto& entry : fs::recursive_directory_iterator(dirs[0])) {
        if (!entry.is_regular_file()) continue;
        const fs::path rel = fs::relative(entry.path(), dirs[0]);
        ++files;
        identical = identical && fs::exists(dirs[1] / rel) && slurp(entry.path()) == slurp(dirs[1] / rel);
      }
    }
    lines.push_back({std::string("C10.") + preset, identical && codes == 0 && files > 0,
                     std::string(preset) + ": run+audit twice with seed 42, " + std::to_string(files) +
                         " files compared, " + (identical ? "byte-identical" : "DIFFERENT") +
                         (codes == 0 ? "" : ", nonzero exit code")});
  }
  return lines;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  fs::path workdir = fs::temp_directory_path() / "nambu_em_acceptance";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--workdir") == 0 && i + 1 < argc) {
      workdir = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--criterion N] [--workdir DIR]\n";
      return 2;
    }
  }
  const std::vector<std::function<Lines()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, [&] { return criterion10(workdir); }};
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  bool all = true;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    if (only != 0 && static_cast<int>(c + 1) != only) continue;
    for (const Line& line : criteria[c]()) {
      std::cout << (line.pass ? "[PASS] " : "[FAIL] ") << line.id << "  " << line.detail << "\n";
      all = all && line.pass;
    }
  }
  return all ? 0 : 1;
}
