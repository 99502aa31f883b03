#pragma once

#include <array>
#include <string_view>

namespace nambu_em::cli {

struct PresetEntry {
  std::string_view name;
  std::string_view text;
};

// Generated from tools/presets/*.json at configure time.
extern const std::array<PresetEntry, 4> kPresets;

}  // namespace nambu_em::cli
