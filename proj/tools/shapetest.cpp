#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "shapetest/commands.hpp"

namespace {

using shapetest::LandmarkFormat;
using shapetest::LocationKind;

const std::map<std::string, LocationKind> kLocationMap{
    {"mean", LocationKind::Mean}, {"antimean", LocationKind::Antimean}};

const std::map<std::string, LandmarkFormat> kFormatMap{{"blocks", LandmarkFormat::Blocks},
                                                       {"csv", LandmarkFormat::CSV},
                                                       {"tps", LandmarkFormat::TPS}};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extrinsic mean/antimean estimation and two-sample tests for planar shapes"};
    app.require_subcommand(1);

    // estimate
    shapetest::EstimateOptions estimate;
    std::string estimate_format;
    auto* cmd_estimate = app.add_subcommand("estimate", "Estimate an extrinsic location");
    cmd_estimate->add_option("--input", estimate.input, "Landmark file")->required();
    cmd_estimate->add_option("--location", estimate.location, "mean or antimean")
        ->transform(CLI::CheckedTransformer(kLocationMap, CLI::ignore_case))
        ->required();
    cmd_estimate->add_option("--format", estimate_format, "blocks, csv or tps (default: detect)");
    cmd_estimate->add_option("--out", estimate.out, "Write the JSON report here");
    cmd_estimate->add_option("--plot", estimate.plot, "Write an SVG icon here");

    // two-sample
    shapetest::TwoSampleOptions two_sample;
    std::string ts_method = "vw", ts_pooling, ts_format;
    auto* cmd_two = app.add_subcommand("two-sample", "Test equality of two extrinsic locations");
    cmd_two->add_option("--a", two_sample.input_a, "Group A landmark file")->required();
    cmd_two->add_option("--b", two_sample.input_b, "Group B landmark file")->required();
    cmd_two->add_option("--location", two_sample.location, "mean or antimean")
        ->transform(CLI::CheckedTransformer(kLocationMap, CLI::ignore_case))
        ->required();
    cmd_two->add_option("--alpha", two_sample.alpha, "Significance level")->default_val(0.05);
    cmd_two->add_option("--method", ts_method, "vw or generic")->default_val("vw");
    cmd_two->add_option("--pooling", ts_pooling, "ambient or projection (default per method)");
    cmd_two->add_flag("--pseudo-inverse", two_sample.pseudo_inverse,
                      "Fall back to a truncated pseudo-inverse on singular covariances");
    cmd_two->add_option("--format", ts_format, "blocks, csv or tps (default: detect)");
    cmd_two->add_option("--out", two_sample.out, "Write the JSON report here");
    cmd_two->add_option("--plot", two_sample.plot, "Write group/pooled SVG icons here");

    // simulate
    shapetest::SimulateOptions simulate;
    std::string sim_kind, sim_method = "vw", sim_grid;
    std::uint64_t sim_seed = 0;
    auto* cmd_sim = app.add_subcommand("simulate", "Monte-Carlo level/power/consistency runs");
    cmd_sim->add_option("mode", sim_kind, "level, power or consistency")
        ->check(CLI::IsMember({"level", "power", "consistency"}))
        ->required();
    cmd_sim->add_option("--k", simulate.k, "Landmark count")->default_val(3);
    cmd_sim->add_option("--n", simulate.n, "Group A sample size")->default_val(200);
    cmd_sim->add_option("--m", simulate.m, "Group B sample size")->default_val(200);
    cmd_sim->add_option("--replicates", simulate.replicates, "Replicates")->default_val(2000);
    cmd_sim->add_option("--alpha", simulate.alpha, "Significance level")->default_val(0.05);
    cmd_sim->add_option("--concentration", simulate.concentration, "Sampler concentration")
        ->default_val(2.0);
    cmd_sim->add_option("--separation", simulate.separation,
                        "Chord distance between the group locations (power)")
        ->default_val(0.4);
    cmd_sim->add_option("--location", simulate.location, "mean or antimean (default: antimean)")
        ->transform(CLI::CheckedTransformer(kLocationMap, CLI::ignore_case));
    cmd_sim->add_option("--method", sim_method, "vw, generic or one-sample")->default_val("vw");
    auto* seed_option =
        cmd_sim->add_option("--seed", sim_seed, "Master seed (also SHAPETEST_SEED; default 0)");
    cmd_sim->add_option("--n-grid", sim_grid, "Comma-separated sample sizes (consistency)");
    cmd_sim->add_option("--seeds", simulate.seeds, "Seeds per grid point (consistency)")
        ->default_val(100);
    cmd_sim->add_option("--workers", simulate.workers, "Worker threads")->default_val(1);
    cmd_sim->add_option("--out", simulate.out, "Write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_estimate->parsed()) {
            if (!estimate_format.empty()) estimate.format_hint = kFormatMap.at(estimate_format);
            return shapetest::run_estimate(estimate, std::cout, std::cerr);
        }
        if (cmd_two->parsed()) {
            if (!ts_format.empty()) two_sample.format_hint = kFormatMap.at(ts_format);
            two_sample.method = ts_method == "generic" ? shapetest::TestMethod::GenericTangent
                                                       : shapetest::TestMethod::VWCoordinates;
            if (ts_method != "vw" && ts_method != "generic") {
                std::cerr << "error: --method must be vw or generic\n";
                return 2;
            }
            if (!ts_pooling.empty()) {
                if (ts_pooling == "ambient")
                    two_sample.pooling = shapetest::PoolingRule::AmbientAverage;
                else if (ts_pooling == "projection")
                    two_sample.pooling = shapetest::PoolingRule::ProjectionAverage;
                else {
                    std::cerr << "error: --pooling must be ambient or projection\n";
                    return 2;
                }
            }
            return shapetest::run_two_sample(two_sample, std::cout, std::cerr);
        }
        // simulate
        if (sim_kind == "level")
            simulate.kind = shapetest::SimulationKind::Level;
        else if (sim_kind == "power")
            simulate.kind = shapetest::SimulationKind::Power;
        else
            simulate.kind = shapetest::SimulationKind::Consistency;
        if (sim_method == "one-sample")
            simulate.method = shapetest::ExperimentMethod::OneSample;
        else if (sim_method == "generic")
            simulate.method = shapetest::ExperimentMethod::TwoSampleGeneric;
        else if (sim_method == "vw")
            simulate.method = shapetest::ExperimentMethod::TwoSampleVW;
        else {
            std::cerr << "error: --method must be vw, generic or one-sample\n";
            return 2;
        }
        if (seed_option->count() > 0) simulate.seed = sim_seed;
        if (!sim_grid.empty()) {
            simulate.n_grid.clear();
            std::size_t pos = 0;
            while (pos < sim_grid.size()) {
                std::size_t comma = sim_grid.find(',', pos);
                if (comma == std::string::npos) comma = sim_grid.size();
                simulate.n_grid.push_back(std::stoull(sim_grid.substr(pos, comma - pos)));
                pos = comma + 1;
            }
        }
        return shapetest::run_simulate(simulate, std::cout, std::cerr);
    } catch (const std::out_of_range&) {
        std::cerr << "error: --format must be blocks, csv or tps\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
