#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif
#include "nambu_em/audit.hpp"
#include "nambu_em/dynamics.hpp"
#include "nambu_em/errors.hpp"
#include "nambu_em/functionals.hpp"
#include "nambu_em/parallel.hpp"
#include "nambu_em/realspace_bridge.hpp"
#include "nambu_em/serialization.hpp"
#include "nambu_em/summation.hpp"
#include "nambu_em/version.hpp"

namespace nambu_em::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string generator() { return std::string("nambu-em ") + kVersion; }

json stamped(json doc, const std::string& hash) {
  doc["generator"] = generator();
  doc["config_hash"] = hash;
  return doc;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void prepare_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::vector<std::string> effective_functionals(const RunConfig& config) {
  if (!config.functionals.empty()) return config.functionals;
  std::vector<std::string> all;
  for (const auto name : registered_functionals()) all.emplace_back(name);
  return all;
}

// Rejects states that break the constraints at the configured tolerance.
void require_valid(const SpectralState& state, double tol) {
  const ValidationReport report = validate(state, tol);
  if (report.ok()) return;
  const Violation& v = report.violations.front();
  throw InvalidState("initial state violates " + std::string(to_string(v.kind)) + " at mode " +
                     std::to_string(v.mode_index) + " (magnitude " + format_double(v.magnitude) +
                     ", tolerance " + format_double(tol) + ")");
}

std::string step_label(std::size_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", step);
  return buf;
}

// Relative L2 distance between two states sharing a layout.
double state_distance(const SpectralState& a, const SpectralState& ref) {
  std::vector<double> diff(a.size());
  std::vector<double> norm(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const Mode& x = a.mode(j);
    const Mode& y = ref.mode(j);
    const double de = (x.e - y.e).norm();
    const double db = (x.b - y.b).norm();
    diff[j] = y.weight * (de * de + db * db);
    const double ne = y.e.norm();
    const double nb = y.b.norm();
    norm[j] = y.weight * (ne * ne + nb * nb);
  }
  const double n = std::sqrt(pairwise_sum(std::span<const double>(norm)));
  const double d = std::sqrt(pairwise_sum(std::span<const double>(diff)));
  return n > 0.0 ? d / n : d;
}

}  // namespace

SpectralState initial_state(const RunConfig& config) {
  if (config.modes) return state_from_json(read_json(*config.modes));
  return make_ic(config.ic);
}

int cmd_run(const RunConfig& config, std::ostream& log) {
  const SpectralState state = initial_state(config);
  require_valid(state, config.tolerances.constraint);
  const std::string hash = config_hash(config);
  const fs::path dir = config.outputs.directory;
  prepare_directory(dir);

  const Trajectory traj = simulate(state, config.integrator, config.functionals);

  {
    std::ofstream csv = open_output(dir / "diagnostics.csv");
    csv << "# " << generator() << " config_hash=" << hash << "\n";
    csv << "t";
    for (const auto& name : traj.functional_names) csv << "," << name << "_re," << name << "_im";
    csv << ",gauss_max,herm_max\n";
    for (const auto& rec : traj.diagnostics) {
      csv << format_double(rec.t);
      for (const Complex& v : rec.values) {
        csv << "," << format_double(v.real()) << "," << format_double(v.imag());
      }
      csv << "," << format_double(rec.gauss_max) << "," << format_double(rec.herm_max) << "\n";
    }
  }

  json snapshot_files = json::array();
  if (config.outputs.snapshots) {
    const fs::path snap_dir = dir / "snapshots";
    prepare_directory(snap_dir);
    const std::size_t every = config.integrator.snapshot_every;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      const Snapshot& s = traj.snapshots[i];
      const std::size_t step = std::min(i * every, config.integrator.steps);
      const std::string name = "state_" + step_label(step) + ".json";
      json doc = stamped(to_json(s.state), hash);
      doc["t"] = s.t;
      doc["step"] = step;
      write_json(snap_dir / name, doc);
      snapshot_files.push_back("snapshots/" + name);
    }
  }

  const DiagnosticRecord* last = traj.diagnostics.empty() ? nullptr : &traj.diagnostics.back();
  json summary = stamped(json::object(), hash);
  summary["command"] = "run";
  summary["integrator"] = {{"kind", std::string(to_string(config.integrator.kind))},
                           {"dt", config.integrator.dt},
                           {"steps", config.integrator.steps},
                           {"snapshot_every", config.integrator.snapshot_every}};
  summary["mode_count"] = state.size();
  summary["functionals"] = traj.functional_names;
  summary["rows"] = traj.diagnostics.size();
  summary["final_t"] = last ? last->t : 0.0;
  summary["aborted"] = traj.aborted;
  summary["abort_reason"] = traj.abort_reason;
  summary["files"] = {{"diagnostics", "diagnostics.csv"}, {"snapshots", snapshot_files}};
  write_json(dir / "summary.json", summary);

  log << "wrote " << (dir / "diagnostics.csv").string() << " (" << traj.diagnostics.size()
      << " rows)\n";
  if (traj.aborted) {
    log << "numerical abort: " << traj.abort_reason << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_audit(const RunConfig& config, std::ostream& log) {
  const SpectralState state = initial_state(config);
  require_valid(state, config.tolerances.constraint);
  const std::string hash = config_hash(config);
  const fs::path dir = config.outputs.directory;
  prepare_directory(dir);

  const AuditThresholds thresholds{config.tolerances.audit_rate, config.tolerances.audit_drift};
  const AuditReport report =
      run_audit(state, config.integrator, effective_functionals(config), thresholds);
  const RateCrosscheck cross = rate_crosscheck(state);
  const bool cross_ok = cross.worst() <= config.tolerances.crosscheck;
  const bool pass = !report.aborted && report.expected_conserved_pass() && cross_ok;

  json doc = stamped(to_json(report), hash);
  doc["crosscheck"] = to_json(cross);
  doc["crosscheck"]["tolerance"] = config.tolerances.crosscheck;
  doc["crosscheck"]["pass"] = cross_ok;
  doc["expected_conserved"] = json::array();
  for (const auto name : expected_conserved()) doc["expected_conserved"].push_back(name);
  doc["pass"] = pass;
  write_json(dir / "audit_report.json", doc);

  {
    std::ofstream txt = open_output(dir / "audit_report.txt");
    txt << "# " << generator() << " config_hash=" << hash << "\n";
    txt << "integrator " << to_string(config.integrator.kind) << " dt=" << format_double(config.integrator.dt)
        << " steps=" << config.integrator.steps << " modes=" << state.size()
        << " rate_threshold=" << format_double(thresholds.rate)
        << " drift_threshold=" << format_double(thresholds.drift) << "\n\n";
    txt << render_table(report) << "\n";
    txt << "rate cross-check (relative residuals, tolerance "
        << format_double(config.tolerances.crosscheck) << ")\n";
    txt << "  dH_formal/dt = -4i G : bracket " << format_double(cross.h_formal_bracket) << "  flow "
        << format_double(cross.h_formal_flow) << "  finite-difference "
        << format_double(cross.h_formal_fd) << "\n";
    txt << "  dG/dt analytic       : bracket " << format_double(cross.g_bracket) << "  flow "
        << format_double(cross.g_flow) << "  finite-difference " << format_double(cross.g_fd)
        << "\n";
    if (report.aborted) txt << "\naborted: " << report.abort_reason << "\n";
    txt << "\nresult: " << (pass ? "PASS" : "FAIL") << "\n";
  }

  log << render_table(report);
  log << "cross-check worst residual " << format_double(cross.worst()) << "\n";
  if (report.aborted) {
    log << "numerical abort: " << report.abort_reason << "\n";
    return kExitNumerical;
  }
  if (!pass) {
    log << "audit FAILED\n";
    return kExitRegression;
  }
  log << "audit passed\n";
  return kExitOk;
}

int cmd_convergence(const RunConfig& config, std::ostream& log) {
  const IntegratorKind kind = config.integrator.kind;
  if (kind == IntegratorKind::exact) {
    throw ConfigError("integrator.kind: convergence needs rk4 or midpoint (exact has no error)");
  }
  const double expected = kind == IntegratorKind::rk4 ? 4.0 : 2.0;
  const double dt0 = config.convergence.dt.value_or(config.integrator.dt);
  const std::size_t steps0 = config.convergence.steps.value_or(config.integrator.steps);
  const double horizon = dt0 * static_cast<double>(steps0);

  const SpectralState state = initial_state(config);
  require_valid(state, config.tolerances.constraint);
  const std::string hash = config_hash(config);
  const fs::path dir = config.outputs.directory;
  prepare_directory(dir);

  const SpectralState reference = exact_step(state, horizon);
  std::vector<double> dts;
  std::vector<std::size_t> counts;
  std::vector<double> errors;
  for (std::size_t level = 0; level <= config.convergence.halvings; ++level) {
    const double dt = std::ldexp(dt0, -static_cast<int>(level));
    const std::size_t n = steps0 << level;
    const Stepper stepper(kind, state, dt);
    SpectralState s = state;
    for (std::size_t i = 0; i < n; ++i) s = stepper.advance(s);
    if (!s.is_finite()) {
      log << "numerical abort: non-finite state at dt=" << format_double(dt) << "\n";
      return kExitNumerical;
    }
    dts.push_back(dt);
    counts.push_back(n);
    errors.push_back(state_distance(s, reference));
  }

  bool pass = true;
  std::ofstream csv = open_output(dir / "convergence.csv");
  csv << "# " << generator() << " config_hash=" << hash << " integrator=" << to_string(kind)
      << " expected_order=" << format_double(expected)
      << " window=" << format_double(config.tolerances.order_window) << "\n";
  csv << "level,dt,steps,error,order\n";
  log << "level  dt          error       order\n";
  for (std::size_t i = 0; i < errors.size(); ++i) {
    std::string order;
    char line[128];
    if (i > 0) {
      const double p = std::log2(errors[i - 1] / errors[i]);
      order = format_double(p);
      if (!(std::abs(p - expected) <= config.tolerances.order_window)) pass = false;
      std::snprintf(line, sizeof line, "%-5zu  %-10.4e  %-10.4e  %.4f\n", i, dts[i], errors[i], p);
    } else {
      std::snprintf(line, sizeof line, "%-5zu  %-10.4e  %-10.4e  -\n", i, dts[i], errors[i]);
    }
    log << line;
    csv << i << "," << format_double(dts[i]) << "," << counts[i] << "," << format_double(errors[i])
        << "," << order << "\n";
  }
  if (!pass) {
    log << "observed order outside [" << expected - config.tolerances.order_window << ", "
        << expected + config.tolerances.order_window << "]\n";
    return kExitRegression;
  }
  log << "convergence order " << expected << " confirmed\n";
  return kExitOk;
}

int cmd_ic(const RunConfig& config, std::ostream& log) {
  const SpectralState state = initial_state(config);
  require_valid(state, config.tolerances.constraint);
  const std::string hash = config_hash(config);
  const fs::path dir = config.outputs.directory;
  prepare_directory(dir);

  write_json(dir / "initial_state.json", stamped(to_json(state), hash));
  log << "wrote " << (dir / "initial_state.json").string() << " (" << state.size() << " modes)\n";
  if (state.grid()) {
    const LatticeField field = to_lattice(state, config.tolerances.constraint);
    write_json(dir / "lattice.json", stamped(to_json(field), hash));
    log << "wrote " << (dir / "lattice.json").string() << "\n";
  }
  return kExitOk;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral Maxwell dynamics through a trilinear bracket", "nambu-em"};
  app.require_subcommand(1);
  app.set_version_flag("--version", generator());

  struct Options {
    std::string config;
    std::string preset;
    std::string out_dir;
    std::uint64_t seed = 0;
  } opts;

  std::vector<CLI::App*> subs;
  for (const auto& [name, help] :
       {std::pair{"run", "integrate and write diagnostics.csv, snapshots, summary.json"},
        std::pair{"audit", "classify functionals and write audit_report.json/.txt"},
        std::pair{"convergence", "measure integrator order against the exact propagator"},
        std::pair{"ic", "write the initial state (and lattice fields for grid states)"}}) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* cfg = sub->add_option("--config", opts.config, "config file");
    auto* preset = sub->add_option("--preset", opts.preset, "committed preset name");
    cfg->excludes(preset);
    sub->add_option("--out", opts.out_dir, "output directory override");
    sub->add_option("--seed", opts.seed, "seed override for generated initial conditions");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  try {
    (void)worker_limit();

    RunConfig config;
    if (!opts.preset.empty()) {
      const std::string origin = "preset:" + opts.preset;
      config = parse_config(preset_text(opts.preset), origin, fs::current_path());
    } else if (!opts.config.empty()) {
      config = load_config(opts.config);
    } else {
      err << "nambu-em " << command << ": one of --config or --preset is required\n";
      return kExitConfig;
    }
    std::optional<std::uint64_t> seed;
    if (chosen->count("--seed") > 0) seed = opts.seed;
    std::optional<fs::path> out_dir;
    if (chosen->count("--out") > 0) out_dir = opts.out_dir;
    if (seed || out_dir) config = apply_overrides(config, seed, out_dir);

    if (command == "run") return cmd_run(config, out);
    if (command == "audit") return cmd_audit(config, out);
    if (command == "convergence") return cmd_convergence(config, out);
    return cmd_ic(config, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace nambu_em::cli
