#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "shapetest/montecarlo.hpp"

namespace shapetest {

// FNV-1a 64-bit digest of a file's bytes, formatted "fnv1a64:<16 hex>".
std::string file_digest(const std::filesystem::path& path);

// Unit representative of a rank-one embedded point (its top eigenvector).
std::vector<Complex> representative_of(const AmbientPoint& vw_point);

// Landmarks reconstructed from a unit representative, rotated so the first
// edge is horizontal. Purely for plotting: a shape has no canonical placement.
std::vector<Complex> icon_landmarks(const std::vector<Complex>& representative);

nlohmann::json location_estimate_json(const LocationEstimate& est);
nlohmann::json two_sample_report_json(const TwoSampleReport& report);
nlohmann::json experiment_result_json(const ExperimentResult& result,
                                      const std::string& experiment);
nlohmann::json consistency_table_json(const std::vector<ConsistencyRow>& table,
                                      std::uint64_t seed);

// Versioned envelope around a result payload.
nlohmann::json report_document(const std::string& command,
                               const std::vector<std::filesystem::path>& inputs,
                               nlohmann::json result, std::vector<std::string> warnings);

struct IconSpec {
    std::string label;
    std::vector<Complex> landmarks;
};

// Static SVG with one numbered polygon per icon. Deterministic bytes for a
// fixed input: fixed precision, no timestamps.
std::string render_icons_svg(const std::vector<IconSpec>& icons);

}  // namespace shapetest
