#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "nambu_em/audit.hpp"
#include "nambu_em/realspace_bridge.hpp"
#include "nambu_em/spectral_field.hpp"

namespace nambu_em {

inline constexpr int kFormatVersion = 1;

/// {version, grid: {nx,ny,nz,lx,ly,lz} | null,
///  modes: [{k:[kx,ky,kz], E:[[re,im]×3], B:[[re,im]×3], w, c:[re,im]}]}
nlohmann::json to_json(const SpectralState& state);
SpectralState state_from_json(const nlohmann::json& doc);

/// {version, dims, lengths, E:[[x,y,z]...], B:[[x,y,z]...], rho:[...] | null}
nlohmann::json to_json(const LatticeField& field);
LatticeField lattice_from_json(const nlohmann::json& doc);

/// {thresholds, fd_step, integrator, mode_count, aborted, records:[...]};
/// callers add run metadata.
nlohmann::json to_json(const AuditReport& report);
nlohmann::json to_json(const RateCrosscheck& check);

/// Writes doc pretty-printed with a trailing newline. Throws FormatError on I/O failure.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

}  // namespace nambu_em
