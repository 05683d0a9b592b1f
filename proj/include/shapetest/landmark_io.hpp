#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "shapetest/shapes.hpp"

namespace shapetest {

enum class LandmarkFormat { Blocks, CSV, TPS };

struct LandmarkFile {
    LandmarkFormat format = LandmarkFormat::Blocks;
    std::vector<KAdConfig> configurations;
    std::size_t k = 0;
    std::vector<std::string> warnings;
};

// Parses a landmark file. Formats:
//   Blocks: configurations separated by blank lines, one "x y" pair per
//           line; k is inferred from the first block.
//   CSV:    header "config,landmark,x,y"; landmarks are ordered by the
//           landmark column within each configuration.
//   TPS:    records introduced by "LM=<k>" followed by k coordinate lines;
//           "ID=" names the configuration; other keys are skipped with a
//           warning.
// The format is auto-detected from the first non-empty line unless hinted.
// Decimal points only (locale independent); LF and CRLF both accepted.
LandmarkFile parse_landmarks(const std::filesystem::path& path,
                             std::optional<LandmarkFormat> format_hint = std::nullopt);

LandmarkFile parse_landmarks_text(const std::string& text,
                                  std::optional<LandmarkFormat> format_hint = std::nullopt);

}  // namespace shapetest
