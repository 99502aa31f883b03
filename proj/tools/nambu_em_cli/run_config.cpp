#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "nambu_em/functionals.hpp"
#include "presets.hpp"

namespace nambu_em::cli {

using nlohmann::json;

namespace {

struct Context {
  std::string origin;
  std::string text;

  // 1-based line of the first occurrence of "key" in the raw text, 0 if absent.
  std::size_t line_of(std::string_view path) const {
    const auto dot = path.rfind('.');
    std::string leaf(dot == std::string_view::npos ? path : path.substr(dot + 1));
    if (const auto br = leaf.find('['); br != std::string::npos) leaf.resize(br);
    const auto pos = text.find("\"" + leaf + "\"");
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
  }

  [[noreturn]] void fail(std::string_view path, const std::string& message) const {
    std::string where = origin;
    if (const std::size_t line = line_of(path); line != 0) where += ":" + std::to_string(line);
    throw ConfigError(where + ": " + std::string(path) + ": " + message);
  }
};

std::string join(std::string_view parent, std::string_view key) {
  return parent.empty() ? std::string(key) : std::string(parent) + "." + std::string(key);
}

void require_object(const Context& ctx, const json& j, std::string_view path,
                    std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) ctx.fail(path.empty() ? "<root>" : path, "must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      ctx.fail(join(path, key), "unknown field");
    }
  }
}

double number(const Context& ctx, const json& obj, std::string_view path, std::string_view key,
              std::optional<double> fallback = std::nullopt) {
  const std::string p = join(path, key);
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    ctx.fail(p, "missing required field");
  }
  const json& v = obj.at(std::string(key));
  if (!v.is_number()) ctx.fail(p, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) ctx.fail(p, "must be finite");
  return x;
}

double positive(const Context& ctx, const json& obj, std::string_view path, std::string_view key,
                std::optional<double> fallback = std::nullopt) {
  const double x = number(ctx, obj, path, key, fallback);
  if (!(x > 0.0)) ctx.fail(join(path, key), "must be > 0");
  return x;
}

std::int64_t integer(const Context& ctx, const json& obj, std::string_view path,
                     std::string_view key, std::optional<std::int64_t> fallback = std::nullopt) {
  const std::string p = join(path, key);
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    ctx.fail(p, "missing required field");
  }
  const json& v = obj.at(std::string(key));
  if (!v.is_number_integer()) ctx.fail(p, "must be an integer");
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      ctx.fail(p, "out of range");
    }
    return static_cast<std::int64_t>(u);
  }
  return v.get<std::int64_t>();
}

std::size_t count(const Context& ctx, const json& obj, std::string_view path, std::string_view key,
                  std::optional<std::int64_t> fallback = std::nullopt) {
  const std::int64_t n = integer(ctx, obj, path, key, fallback);
  if (n < 1) ctx.fail(join(path, key), "must be >= 1");
  return static_cast<std::size_t>(n);
}

std::array<int, 3> int_triple(const Context& ctx, const json& v, std::string_view path) {
  if (!v.is_array() || v.size() != 3) ctx.fail(path, "must be an array of 3 integers");
  std::array<int, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number_integer()) ctx.fail(path, "must be an array of 3 integers");
    const auto x = v[i].get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      ctx.fail(path, "index out of range");
    }
    out[i] = static_cast<int>(x);
  }
  return out;
}

std::array<double, 3> real_triple(const Context& ctx, const json& v, std::string_view path) {
  if (!v.is_array() || v.size() != 3) ctx.fail(path, "must be an array of 3 numbers");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
      ctx.fail(path, "must be an array of 3 finite numbers");
    }
    out[i] = v[i].get<double>();
  }
  return out;
}

GridDescriptor parse_grid(const Context& ctx, const json& g) {
  require_object(ctx, g, "grid", {"nx", "ny", "nz", "lx", "ly", "lz"});
  GridDescriptor grid;
  const std::array<std::string_view, 3> nk = {"nx", "ny", "nz"};
  const std::array<std::string_view, 3> lk = {"lx", "ly", "lz"};
  for (std::size_t a = 0; a < 3; ++a) {
    const std::size_t n = count(ctx, g, "grid", nk[a]);
    if (n > 4096) ctx.fail(join("grid", nk[a]), "must be <= 4096");
    grid.n[a] = static_cast<int>(n);
    grid.length[a] = positive(ctx, g, "grid", lk[a]);
  }
  return grid;
}

IcParams parse_ic(const Context& ctx, const json& ic, const GridDescriptor& grid) {
  require_object(ctx, ic, "ic",
                 {"kind", "mode", "amplitude", "polarization", "seed", "spectrum_exponent",
                  "cutoff_fraction", "charges", "band_radius"});
  IcParams p;
  p.grid = grid;
  if (!ic.contains("kind") || !ic["kind"].is_string()) ctx.fail("ic.kind", "missing or not a string");
  const auto kind = parse_ic_kind(ic["kind"].get<std::string>());
  if (!kind) {
    ctx.fail("ic.kind", "unknown initial condition '" + ic["kind"].get<std::string>() +
                            "' (plane_wave, standing_wave, random_solenoidal, coulomb_static)");
  }
  p.kind = *kind;
  if (ic.contains("mode")) p.mode = int_triple(ctx, ic["mode"], "ic.mode");
  p.amplitude = number(ctx, ic, "ic", "amplitude", 1.0);
  if (ic.contains("polarization")) p.polarization = real_triple(ctx, ic["polarization"], "ic.polarization");
  if (ic.contains("seed")) {
    if (!ic["seed"].is_number_unsigned()) ctx.fail("ic.seed", "must be a non-negative integer");
    p.seed = ic["seed"].get<std::uint64_t>();
  }
  p.spectrum_exponent = number(ctx, ic, "ic", "spectrum_exponent", 0.0);
  p.cutoff_fraction = positive(ctx, ic, "ic", "cutoff_fraction", 0.5);
  if (ic.contains("band_radius")) p.band_radius = positive(ctx, ic, "ic", "band_radius");
  if (ic.contains("charges")) {
    const json& charges = ic["charges"];
    if (!charges.is_array()) ctx.fail("ic.charges", "must be an array");
    for (std::size_t i = 0; i < charges.size(); ++i) {
      const std::string path = "ic.charges[" + std::to_string(i) + "]";
      require_object(ctx, charges[i], path, {"mode", "c"});
      if (!charges[i].contains("mode") || !charges[i].contains("c")) {
        ctx.fail(path, "needs mode and c");
      }
      ChargeEntry entry;
      entry.mode = int_triple(ctx, charges[i]["mode"], path + ".mode");
      const json& c = charges[i]["c"];
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
        ctx.fail(path + ".c", "must be [re, im]");
      }
      entry.c = Complex(c[0].get<double>(), c[1].get<double>());
      p.charges.push_back(entry);
    }
  }
  return p;
}

IntegratorSpec parse_integrator(const Context& ctx, const json& in) {
  require_object(ctx, in, "integrator", {"kind", "dt", "steps", "snapshot_every"});
  IntegratorSpec spec;
  if (!in.contains("kind") || !in["kind"].is_string()) {
    ctx.fail("integrator.kind", "missing or not a string");
  }
  const auto kind = nambu_em::parse_integrator(in["kind"].get<std::string>());
  if (!kind) {
    ctx.fail("integrator.kind",
             "unknown integrator '" + in["kind"].get<std::string>() + "' (exact, midpoint, rk4)");
  }
  spec.kind = *kind;
  spec.dt = positive(ctx, in, "integrator", "dt");
  spec.steps = count(ctx, in, "integrator", "steps");
  spec.snapshot_every =
      count(ctx, in, "integrator", "snapshot_every", static_cast<std::int64_t>(spec.steps));
  return spec;
}

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view origin,
                       const std::filesystem::path& base_dir) {
  Context ctx{std::string(origin), std::string(text)};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    // Map the byte offset onto line:column.
    const std::size_t byte = std::min<std::size_t>(err.byte, text.size());
    const std::size_t before = byte == 0 ? 0 : byte - 1;
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(before), '\n');
    const auto last_nl = text.rfind('\n', before == 0 ? 0 : before - 1);
    const std::size_t col = last_nl == std::string_view::npos ? byte : byte - last_nl - 1;
    throw ConfigError(std::string(origin) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": malformed config: " + err.what());
  }

  require_object(ctx, doc, "",
                 {"grid", "ic", "modes", "integrator", "functionals", "outputs", "tolerances",
                  "convergence"});
  RunConfig cfg;

  const bool has_grid = doc.contains("grid");
  const bool has_modes = doc.contains("modes");
  if (has_grid == has_modes) ctx.fail("grid", "exactly one of grid or modes must be given");
  if (has_grid) {
    cfg.grid = parse_grid(ctx, doc["grid"]);
    if (!doc.contains("ic")) ctx.fail("ic", "missing required field (needed with grid)");
    cfg.ic = parse_ic(ctx, doc["ic"], *cfg.grid);
  } else {
    if (!doc["modes"].is_string()) ctx.fail("modes", "must be a path to a state snapshot");
    if (doc.contains("ic")) ctx.fail("ic", "not allowed with an explicit modes file");
    std::filesystem::path p = doc["modes"].get<std::string>();
    cfg.modes = p.is_relative() ? base_dir / p : p;
  }

  if (!doc.contains("integrator")) ctx.fail("integrator", "missing required field");
  cfg.integrator = parse_integrator(ctx, doc["integrator"]);

  if (doc.contains("functionals")) {
    const json& fs = doc["functionals"];
    if (!fs.is_array()) ctx.fail("functionals", "must be an array of names");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const std::string path = "functionals[" + std::to_string(i) + "]";
      if (!fs[i].is_string()) ctx.fail(path, "must be a string");
      const auto name = fs[i].get<std::string>();
      if (!is_registered(name)) {
        std::string known;
        for (const auto n : registered_functionals()) known += (known.empty() ? "" : ", ") + std::string(n);
        ctx.fail("functionals", "unknown functional '" + name + "' (known: " + known + ")");
      }
      if (!seen.insert(name).second) ctx.fail("functionals", "duplicate functional '" + name + "'");
      cfg.functionals.push_back(name);
    }
  }

  if (doc.contains("outputs")) {
    const json& out = doc["outputs"];
    require_object(ctx, out, "outputs", {"directory", "snapshots"});
    if (out.contains("directory")) {
      if (!out["directory"].is_string()) ctx.fail("outputs.directory", "must be a string");
      cfg.outputs.directory = out["directory"].get<std::string>();
    }
    if (out.contains("snapshots")) {
      if (!out["snapshots"].is_boolean()) ctx.fail("outputs.snapshots", "must be true or false");
      cfg.outputs.snapshots = out["snapshots"].get<bool>();
    }
  }

  if (doc.contains("tolerances")) {
    const json& tol = doc["tolerances"];
    require_object(ctx, tol, "tolerances",
                   {"constraint", "audit_rate", "audit_drift", "crosscheck", "order_window"});
    auto& t = cfg.tolerances;
    t.constraint = positive(ctx, tol, "tolerances", "constraint", t.constraint);
    t.audit_rate = positive(ctx, tol, "tolerances", "audit_rate", t.audit_rate);
    t.audit_drift = positive(ctx, tol, "tolerances", "audit_drift", t.audit_drift);
    t.crosscheck = positive(ctx, tol, "tolerances", "crosscheck", t.crosscheck);
    t.order_window = positive(ctx, tol, "tolerances", "order_window", t.order_window);
  }

  if (doc.contains("convergence")) {
    const json& conv = doc["convergence"];
    require_object(ctx, conv, "convergence", {"dt", "steps", "halvings"});
    if (conv.contains("dt")) cfg.convergence.dt = positive(ctx, conv, "convergence", "dt");
    if (conv.contains("steps")) cfg.convergence.steps = count(ctx, conv, "convergence", "steps");
    cfg.convergence.halvings = count(ctx, conv, "convergence", "halvings", 5);
    if (cfg.convergence.halvings < 5) ctx.fail("convergence.halvings", "must be >= 5");
  }

  cfg.document = std::move(doc);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string(), path.parent_path());
}

RunConfig apply_overrides(const RunConfig& config, std::optional<std::uint64_t> seed,
                          const std::optional<std::filesystem::path>& out_dir,
                          const std::filesystem::path& base_dir) {
  json doc = config.document;
  if (seed) {
    if (!doc.contains("ic")) throw ConfigError("--seed: config has no generated initial condition");
    doc["ic"]["seed"] = *seed;
  }
  if (out_dir) doc["outputs"]["directory"] = out_dir->string();
  if (config.modes) doc["modes"] = config.modes->string();
  return parse_config(doc.dump(2), "<effective config>", base_dir);
}

std::string config_hash(const RunConfig& config) {
  json doc = config.document;
  if (doc.contains("outputs")) doc["outputs"].erase("directory");
  const std::string canonical = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

std::string_view preset_text(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return p.text;
  }
  std::string known;
  for (const auto& p : kPresets) known += (known.empty() ? "" : ", ") + std::string(p.name);
  throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace nambu_em::cli
