#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "shapetest/landmark_io.hpp"
#include "shapetest/report.hpp"

namespace shapetest {

// Command implementations shared by the CLI binary and the tests. Each
// returns a process exit code: 0 success, 2 parse/usage problems, 3 focal
// points, 4 numerical breakdowns.

struct EstimateOptions {
    std::filesystem::path input;
    LocationKind location = LocationKind::Antimean;
    std::optional<LandmarkFormat> format_hint;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> plot;
};

int run_estimate(const EstimateOptions& options, std::ostream& out, std::ostream& err);

struct TwoSampleOptions {
    std::filesystem::path input_a;
    std::filesystem::path input_b;
    LocationKind location = LocationKind::Antimean;
    double alpha = 0.05;
    TestMethod method = TestMethod::VWCoordinates;
    std::optional<PoolingRule> pooling;  // defaults to ambient (vw) / projection (generic)
    bool pseudo_inverse = false;
    std::optional<LandmarkFormat> format_hint;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> plot;
};

int run_two_sample(const TwoSampleOptions& options, std::ostream& out, std::ostream& err);

enum class SimulationKind { Level, Power, Consistency };

struct SimulateOptions {
    SimulationKind kind = SimulationKind::Level;
    std::size_t k = 3;
    std::size_t n = 200;
    std::size_t m = 200;
    std::size_t replicates = 2000;
    double alpha = 0.05;
    double concentration = 2.0;
    double separation = 0.4;  // power only
    LocationKind location = LocationKind::Antimean;
    ExperimentMethod method = ExperimentMethod::TwoSampleVW;
    std::optional<std::uint64_t> seed;  // flag > SHAPETEST_SEED > 0
    std::vector<std::size_t> n_grid = {100, 1000, 10000};  // consistency only
    std::size_t seeds = 100;                               // consistency only
    std::size_t workers = 1;
    std::optional<std::filesystem::path> out;
};

int run_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

// Seed resolution: explicit value wins, then the SHAPETEST_SEED environment
// variable, then 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_value);

}  // namespace shapetest
