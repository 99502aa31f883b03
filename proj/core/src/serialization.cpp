#include "nambu_em/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "nambu_em/errors.hpp"

namespace nambu_em {

using nlohmann::json;

namespace {

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw FormatError("expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json vec_json(const ComplexVec3& v) {
  return json::array({complex_json(v[0]), complex_json(v[1]), complex_json(v[2])});
}

ComplexVec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("expected three [re, im] pairs");
  return {{complex_from(j[0]), complex_from(j[1]), complex_from(j[2])}};
}

template <class T>
std::array<T, 3> triple_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("expected a 3-element array");
  return {j[0].get<T>(), j[1].get<T>(), j[2].get<T>()};
}

void check_version(const json& doc) {
  if (!doc.is_object()) throw FormatError("document must be an object");
  const int version = doc.at("version").get<int>();
  if (version != kFormatVersion) {
    throw FormatError("unsupported document version " + std::to_string(version));
  }
}

// Runs a parser, mapping JSON access errors onto FormatError.
template <class F>
auto parse_guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& err) {
    throw FormatError(std::string(what) + ": " + err.what());
  }
}

}  // namespace

json to_json(const SpectralState& state) {
  json doc;
  doc["version"] = kFormatVersion;
  if (const auto& g = state.grid()) {
    doc["grid"] = {{"nx", g->n[0]},      {"ny", g->n[1]},      {"nz", g->n[2]},
                   {"lx", g->length[0]}, {"ly", g->length[1]}, {"lz", g->length[2]}};
  } else {
    doc["grid"] = nullptr;
  }
  json modes = json::array();
  for (std::size_t j = 0; j < state.size(); ++j) {
    const Mode& m = state.mode(j);
    json entry = {{"k", {m.k[0], m.k[1], m.k[2]}},
                  {"E", vec_json(m.e)},
                  {"B", vec_json(m.b)},
                  {"w", m.weight},
                  {"c", complex_json(state.charge()[j])}};
    // Grid states derive pairing from the grid; explicit lists carry it.
    if (!state.grid() && m.hermitian_partner) entry["partner"] = *m.hermitian_partner;
    modes.push_back(std::move(entry));
  }
  doc["modes"] = std::move(modes);
  return doc;
}

SpectralState state_from_json(const json& doc) {
  return parse_guarded("state snapshot", [&] {
    check_version(doc);
    std::optional<GridDescriptor> grid;
    if (const auto& g = doc.at("grid"); !g.is_null()) {
      GridDescriptor gd;
      gd.n = {g.at("nx").get<int>(), g.at("ny").get<int>(), g.at("nz").get<int>()};
      gd.length = {g.at("lx").get<double>(), g.at("ly").get<double>(), g.at("lz").get<double>()};
      try {
        gd.check();
      } catch (const InvalidArgument& err) {
        throw FormatError(err.what());
      }
      grid = gd;
    }
    std::vector<Mode> modes;
    std::vector<Complex> charge;
    for (const auto& entry : doc.at("modes")) {
      Mode m;
      const auto k = triple_from<double>(entry.at("k"));
      m.k = {{k[0], k[1], k[2]}};
      m.e = vec_from(entry.at("E"));
      m.b = vec_from(entry.at("B"));
      m.weight = entry.at("w").get<double>();
      if (entry.contains("partner") && !entry["partner"].is_null()) {
        m.hermitian_partner = entry["partner"].get<std::size_t>();
      }
      charge.push_back(complex_from(entry.at("c")));
      modes.push_back(m);
    }
    if (grid) {
      if (modes.size() != grid->size()) throw FormatError("mode count does not match the grid");
      for (std::size_t j = 0; j < modes.size(); ++j) {
        modes[j].hermitian_partner = hermitian_pair_index(*grid, j);
      }
    }
    return SpectralState(std::move(modes), std::move(charge), grid);
  });
}

json to_json(const LatticeField& field) {
  json doc;
  doc["version"] = kFormatVersion;
  doc["dims"] = field.dims;
  doc["lengths"] = field.lengths;
  doc["E"] = field.e;
  doc["B"] = field.b;
  if (field.rho) {
    doc["rho"] = *field.rho;
  } else {
    doc["rho"] = nullptr;
  }
  return doc;
}

LatticeField lattice_from_json(const json& doc) {
  return parse_guarded("lattice field", [&] {
    check_version(doc);
    LatticeField f;
    f.dims = triple_from<int>(doc.at("dims"));
    f.lengths = triple_from<double>(doc.at("lengths"));
    for (const auto& v : doc.at("E")) f.e.push_back(triple_from<double>(v));
    for (const auto& v : doc.at("B")) f.b.push_back(triple_from<double>(v));
    if (doc.contains("rho") && !doc["rho"].is_null()) {
      f.rho = doc["rho"].get<std::vector<double>>();
    }
    try {
      f.check();
    } catch (const InvalidState& err) {
      throw FormatError(err.what());
    }
    return f;
  });
}

json to_json(const AuditReport& report) {
  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back({{"name", r.name},
                       {"class", std::string(to_string(r.cls))},
                       {"max_drift", r.max_drift},
                       {"rate_residual", r.rate_residual},
                       {"notes", r.notes},
                       {"holomorphic", r.holomorphic},
                       {"bracket_rate_max", r.holomorphic ? json(r.bracket_rate_max) : json(nullptr)},
                       {"flow_rate_max", r.flow_rate_max},
                       {"peak_deviation", r.peak_deviation},
                       {"initial", complex_json(r.initial_value)},
                       {"final", complex_json(r.final_value)}});
  }
  return {{"thresholds", {{"rate", report.thresholds.rate}, {"drift", report.thresholds.drift}}},
          {"fd_step", report.fd_step},
          {"integrator",
           {{"kind", std::string(to_string(report.integrator.kind))},
            {"dt", report.integrator.dt},
            {"steps", report.integrator.steps}}},
          {"mode_count", report.mode_count},
          {"aborted", report.aborted},
          {"abort_reason", report.abort_reason},
          {"expected_conserved_pass", report.expected_conserved_pass()},
          {"records", std::move(records)}};
}

json to_json(const RateCrosscheck& check) {
  return {{"h_formal_bracket", check.h_formal_bracket},
          {"h_formal_flow", check.h_formal_flow},
          {"h_formal_fd", check.h_formal_fd},
          {"g_bracket", check.g_bracket},
          {"g_flow", check.g_flow},
          {"g_fd", check.g_fd},
          {"worst", check.worst()}};
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw FormatError("failed writing " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& err) {
    throw FormatError(path.string() + ": " + err.what());
  }
}

std::string format_double(double x) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, result.ptr);
}

}  // namespace nambu_em
