#include "shapetest/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

namespace shapetest {

namespace {

int map_error(const std::exception& e, std::ostream& err) {
    err << "error: " << e.what() << "\n";
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const InconsistentKError*>(&e) ||
        dynamic_cast<const EmptyFileError*>(&e) || dynamic_cast<const DegenerateKAdError*>(&e))
        return 2;
    if (dynamic_cast<const FocalPointError*>(&e)) return 3;
    return 4;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw Error("cannot write to " + path.string());
    stream << text;
}

void emit_json(const nlohmann::json& doc, const std::optional<std::filesystem::path>& out,
               std::ostream& fallback) {
    const std::string text = doc.dump(2) + "\n";
    if (out)
        write_text(*out, text);
    else
        fallback << text;
}

Sample sample_from_file(const LandmarkFile& file) {
    std::vector<AmbientPoint> points;
    points.reserve(file.configurations.size());
    for (const KAdConfig& config : file.configurations) points.push_back(vw_embed(to_shape(config)));
    return make_sample(EmbeddingDescriptor::veronese_whitney(file.k), std::move(points));
}

IconSpec icon_of_point(const AmbientPoint& point, const std::string& label) {
    return IconSpec{label, icon_landmarks(representative_of(point))};
}

}  // namespace

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_value) {
    if (flag_value) return *flag_value;
    if (const char* env = std::getenv("SHAPETEST_SEED")) {
        char* end = nullptr;
        unsigned long long parsed = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return parsed;
    }
    return 0;
}

int run_estimate(const EstimateOptions& options, std::ostream& out, std::ostream& err) {
    try {
        LandmarkFile file = parse_landmarks(options.input, options.format_hint);
        Sample sample = sample_from_file(file);
        LocationEstimate estimate = extrinsic_estimate(sample, options.location);

        nlohmann::json doc = report_document("estimate", {options.input},
                                             location_estimate_json(estimate), file.warnings);
        emit_json(doc, options.out, out);
        if (options.plot) {
            const char* label = options.location == LocationKind::Mean ? "mean" : "antimean";
            write_text(*options.plot, render_icons_svg({icon_of_point(estimate.point, label)}));
        }
        return 0;
    } catch (const std::exception& e) {
        return map_error(e, err);
    }
}

int run_two_sample(const TwoSampleOptions& options, std::ostream& out, std::ostream& err) {
    try {
        if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
            err << "error: alpha must lie in (0, 1)\n";
            return 2;
        }
        LandmarkFile file_a = parse_landmarks(options.input_a, options.format_hint);
        LandmarkFile file_b = parse_landmarks(options.input_b, options.format_hint);
        if (file_a.k != file_b.k)
            throw InconsistentKError("the two groups disagree on the landmark count");
        Sample a = sample_from_file(file_a);
        Sample b = sample_from_file(file_b);

        const SolvePolicy policy =
            options.pseudo_inverse ? SolvePolicy::PseudoInverse : SolvePolicy::Strict;
        const PoolingRule pooling =
            options.pooling.value_or(options.method == TestMethod::VWCoordinates
                                         ? PoolingRule::AmbientAverage
                                         : PoolingRule::ProjectionAverage);
        TwoSampleReport report =
            options.method == TestMethod::VWCoordinates
                ? vw_two_sample_statistic(a, b, options.location, options.alpha, policy, pooling)
                : generic_two_sample_statistic(a, b, options.location, options.alpha, policy,
                                               pooling);

        std::vector<std::string> warnings = file_a.warnings;
        warnings.insert(warnings.end(), file_b.warnings.begin(), file_b.warnings.end());
        nlohmann::json doc = report_document("two-sample", {options.input_a, options.input_b},
                                             two_sample_report_json(report), warnings);
        emit_json(doc, options.out, out);
        if (options.plot) {
            write_text(*options.plot,
                       render_icons_svg({icon_of_point(report.group_a.point, "group A"),
                                         icon_of_point(report.group_b.point, "group B"),
                                         icon_of_point(report.pooled_point, "pooled")}));
        }
        return 0;
    } catch (const std::exception& e) {
        return map_error(e, err);
    }
}

int run_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
    try {
        if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
            err << "error: alpha must lie in (0, 1)\n";
            return 2;
        }
        if (options.k < 3) {
            err << "error: k must be at least 3\n";
            return 2;
        }
        if (options.kind != SimulationKind::Consistency &&
            (options.replicates < 1 || options.n < 2 || options.m < 2)) {
            err << "error: level/power runs need replicates >= 1 and n, m >= 2\n";
            return 2;
        }

        const std::uint64_t seed = resolve_seed(options.seed);
        std::vector<Complex> center(options.k - 1, Complex(0.0, 0.0));
        center[0] = 1.0;
        SamplerSpec spec = SamplerSpec::projected_gaussian_cp(options.k, std::move(center),
                                                              options.concentration, seed);

        nlohmann::json result;
        std::string experiment;
        switch (options.kind) {
            case SimulationKind::Level: {
                experiment = "level";
                ExperimentResult r =
                    run_level_experiment(spec, options.n, options.m, options.replicates,
                                         options.alpha, options.location, options.method,
                                         options.workers);
                result = experiment_result_json(r, experiment);
                break;
            }
            case SimulationKind::Power: {
                experiment = "power";
                SamplerSpec alt = shifted_spec(spec, options.separation);
                ExperimentResult r =
                    run_power_experiment(spec, alt, options.n, options.m, options.replicates,
                                         options.alpha, options.location, options.method,
                                         options.workers);
                result = experiment_result_json(r, experiment);
                result["separation"] = options.separation;
                break;
            }
            case SimulationKind::Consistency:
            default: {
                experiment = "consistency";
                auto table = run_consistency_experiment(spec, options.n_grid, options.seeds);
                result = consistency_table_json(table, seed);
                break;
            }
        }
        result["k"] = options.k;
        result["alpha"] = options.alpha;
        result["concentration"] = options.concentration;
        result["location"] = options.location == LocationKind::Mean ? "mean" : "antimean";
        if (options.kind != SimulationKind::Consistency) {
            result["n"] = options.n;
            result["m"] = options.m;
            result["method"] = options.method == ExperimentMethod::OneSample
                                   ? "one-sample"
                                   : (options.method == ExperimentMethod::TwoSampleVW ? "vw"
                                                                                      : "generic");
        }

        nlohmann::json doc = report_document("simulate", {}, std::move(result), {});
        emit_json(doc, options.out, out);
        return 0;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        return map_error(e, err);
    }
}

}  // namespace shapetest
