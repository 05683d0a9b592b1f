// Acceptance suite: one independently runnable criterion per --criterion N,
// each printing a single [PASS]/[FAIL] line. Run all with no arguments.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "shapetest/commands.hpp"
#include "support/test_helpers.hpp"

using namespace shapetest;
using shapetest::testing::chord;
using shapetest::testing::conjugate_by;
using shapetest::testing::random_hermitian;
using shapetest::testing::random_special_unitary;
using shapetest::testing::random_unit_complex;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& message) {
        if (!condition && ok) {
            ok = false;
            detail = message;
        }
    }
    void note(const std::string& message) {
        if (ok) detail = message;
    }
};

SamplerSpec cp1_spec(double concentration, std::uint64_t seed) {
    return SamplerSpec::projected_gaussian_cp(3, {Complex(1.0, 0.0), Complex(0.0, 0.0)},
                                              concentration, seed);
}

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4g", v);
    return buffer;
}

// 1. Chi-square anchors.
Check criterion_chi2_anchors() {
    Check c;
    c.require(std::abs(chi2_quantile(0.95, 6) - 12.5916) < 5e-5, "quantile(0.95, 6) off");
    c.require(std::abs(chi2_quantile(0.95, 22) - 33.9244) < 5e-5, "quantile(0.95, 22) off");
    c.require(std::abs(chi2_sf(53.1140, 6) - 1.1129e-9) < 1e-13, "sf(53.1140, 6) off");
    c.require(std::abs(chi2_sf(95.5476, 22) - 3.8316e-11) < 1e-14, "sf(95.5476, 22) off");
    c.note("all four anchors inside their tolerances");
    return c;
}

// 2. The sample antimean is the smallest-eigenvalue eigenvector line of the
//    ambient mean; on the shape sphere it also matches the grid search.
Check criterion_antimean_characterization() {
    Check c;
    GaussianStream centers(20250810);
    for (std::size_t k : {std::size_t(3), std::size_t(4), std::size_t(5)}) {
        for (int trial = 0; trial < 200 && c.ok; ++trial) {
            auto spec = SamplerSpec::projected_gaussian_cp(
                k, random_unit_complex(centers, k - 1), 1.5 + 0.01 * trial,
                derive_seed(1000 + k, trial));
            Sample s = draw_sample(spec, 30);
            LocationEstimate est = extrinsic_estimate(s, LocationKind::Antimean);

            // Rebuild the ambient mean and take its bottom eigenvector line.
            AmbientPoint mean = AmbientPoint::zero(s.descriptor);
            for (const AmbientPoint& p : s.points) mean += p;
            mean *= 1.0 / static_cast<double>(s.size());
            EigenDecomposition eig = hermitian_eig(mean.matrix());
            std::vector<Complex> bottom(k - 1);
            for (std::size_t i = 0; i < k - 1; ++i) bottom[i] = eig.eigenvectors(i, 0);
            c.require(chord(est.point, vw_embed(bottom)) < 1e-9,
                      "antimean is not the bottom eigenvector line (k=" + std::to_string(k) +
                          ")");

            if (k == 3) {
                BruteForceResult brute = brute_force_antimean(s, 150);
                c.require(chord(est.point, brute.argmax) < 1e-3,
                          "grid search disagrees at trial " + std::to_string(trial));
            }
        }
    }
    c.note("600 samples, k in {3,4,5}; 200 grid comparisons");
    return c;
}

// 3. Frechet extremality of the estimated antimean.
Check criterion_frechet_extremality() {
    Check c;
    GaussianStream centers(777);
    for (int round = 0; round < 50 && c.ok; ++round) {
        std::size_t k = 3 + static_cast<std::size_t>(round % 3);
        auto spec = SamplerSpec::projected_gaussian_cp(k, random_unit_complex(centers, k - 1),
                                                       2.0, derive_seed(2000, round));
        Sample s = draw_sample(spec, 30);
        LocationEstimate est = extrinsic_estimate(s, LocationKind::Antimean);
        double at_estimate = frechet_function(est.point, s);
        GaussianStream g(derive_seed(2001, round));
        for (int trial = 0; trial < 10000; ++trial) {
            AmbientPoint candidate = vw_embed(random_unit_complex(g, k - 1));
            if (frechet_function(candidate, s) > at_estimate + 1e-9) {
                c.require(false, "candidate beats the estimate in round " +
                                     std::to_string(round));
                break;
            }
        }
    }
    c.note("50 samples x 10000 candidates");
    return c;
}

// 4. One-sample chi-square level.
Check criterion_one_sample_level() {
    Check c;
    ExperimentResult r = run_level_experiment(cp1_spec(2.0, 91), 200, 0, 2000, 0.05,
                                              LocationKind::Antimean,
                                              ExperimentMethod::OneSample, 4);
    c.require(r.errors == 0, "replicates errored");
    c.require(r.empirical_level >= 0.03 && r.empirical_level <= 0.07,
              "level " + fmt(r.empirical_level) + " outside [0.03, 0.07]");
    c.note("level " + fmt(r.empirical_level) + " over 2000 replicates");
    return c;
}

// 5. Two-sample level for both methods, and power at separation 0.4.
Check criterion_two_sample_level_power() {
    Check c;
    ExperimentResult vw = run_level_experiment(cp1_spec(2.0, 92), 200, 200, 2000, 0.05,
                                               LocationKind::Antimean,
                                               ExperimentMethod::TwoSampleVW, 4);
    c.require(vw.errors == 0, "vw replicates errored");
    c.require(vw.empirical_level >= 0.03 && vw.empirical_level <= 0.07,
              "vw level " + fmt(vw.empirical_level) + " outside [0.03, 0.07]");

    ExperimentResult generic = run_level_experiment(cp1_spec(2.0, 93), 200, 200, 2000, 0.05,
                                                    LocationKind::Antimean,
                                                    ExperimentMethod::TwoSampleGeneric, 4);
    c.require(generic.errors == 0, "generic replicates errored");
    c.require(generic.empirical_level >= 0.03 && generic.empirical_level <= 0.07,
              "generic level " + fmt(generic.empirical_level) + " outside [0.03, 0.07]");

    SamplerSpec null_spec = cp1_spec(2.0, 94);
    SamplerSpec alt_spec = shifted_spec(null_spec, 0.4);
    ExperimentResult power_vw = run_power_experiment(null_spec, alt_spec, 200, 200, 500, 0.05,
                                                     LocationKind::Antimean,
                                                     ExperimentMethod::TwoSampleVW, 4);
    c.require(power_vw.empirical_level > 0.9,
              "vw power " + fmt(power_vw.empirical_level) + " not above 0.9");
    ExperimentResult power_generic =
        run_power_experiment(null_spec, alt_spec, 200, 200, 500, 0.05, LocationKind::Antimean,
                             ExperimentMethod::TwoSampleGeneric, 4);
    c.require(power_generic.empirical_level > 0.9,
              "generic power " + fmt(power_generic.empirical_level) + " not above 0.9");

    c.note("levels vw " + fmt(vw.empirical_level) + ", generic " +
           fmt(generic.empirical_level) + "; power vw " + fmt(power_vw.empirical_level) +
           ", generic " + fmt(power_generic.empirical_level));
    return c;
}

// 6. Consistency of the sample antimean.
Check criterion_consistency() {
    Check c;
    auto table = run_consistency_experiment(cp1_spec(2.0, 95), {100, 1000, 10000}, 100);
    c.require(table.size() == 3, "unexpected table size");
    c.require(table[0].median_chord_error > table[1].median_chord_error &&
                  table[1].median_chord_error > table[2].median_chord_error,
              "medians are not strictly decreasing");
    c.require(table[2].median_chord_error < 0.05,
              "final median " + fmt(table[2].median_chord_error) + " not below 0.05");
    c.note("medians " + fmt(table[0].median_chord_error) + " > " +
           fmt(table[1].median_chord_error) + " > " + fmt(table[2].median_chord_error));
    return c;
}

// 7. Invariance suite.
Check criterion_invariances() {
    Check c;
    GaussianStream g(4040);

    // Similarity invariance of the two-sample statistic on raw landmarks.
    for (int round = 0; round < 5 && c.ok; ++round) {
        auto make_group = [&](std::size_t count) {
            std::vector<KAdConfig> group;
            for (std::size_t i = 0; i < count; ++i) {
                KAdConfig config;
                for (int j = 0; j < 4; ++j)
                    config.landmarks.push_back(Complex(g.next(), g.next()));
                group.push_back(std::move(config));
            }
            return group;
        };
        auto embed = [](const std::vector<KAdConfig>& group) {
            std::vector<AmbientPoint> points;
            for (const KAdConfig& kad : group) points.push_back(vw_embed(to_shape(kad)));
            EmbeddingDescriptor descriptor = points.front().descriptor();
    return make_sample(descriptor, std::move(points));
        };
        std::vector<KAdConfig> group_a = make_group(30), group_b = make_group(30);
        TwoSampleReport base = vw_two_sample_statistic(embed(group_a), embed(group_b),
                                                       LocationKind::Antimean, 0.05);
        for (auto* group : {&group_a, &group_b})
            for (KAdConfig& config : *group) {
                Complex scale_rot = std::polar(0.4 + std::abs(g.next()), g.next());
                Complex shift(g.next(), g.next());
                for (Complex& z : config.landmarks) z = scale_rot * z + shift;
            }
        TwoSampleReport moved = vw_two_sample_statistic(embed(group_a), embed(group_b),
                                                        LocationKind::Antimean, 0.05);
        c.require(std::abs(base.statistic - moved.statistic) < 1e-9,
                  "similarity transform moved the statistic by " +
                      fmt(std::abs(base.statistic - moved.statistic)));

        // Group exchange.
        TwoSampleReport swapped = vw_two_sample_statistic(embed(group_b), embed(group_a),
                                                          LocationKind::Antimean, 0.05);
        c.require(std::abs(moved.statistic - swapped.statistic) < 1e-9,
                  "group exchange moved the statistic");

        // Eigenvector phase scramble of the pooled frame.
        Sample sa = embed(group_a), sb = embed(group_b);
        PooledEstimate pooled =
            pooled_estimate(sa, sb, LocationKind::Antimean, PoolingRule::AmbientAverage);
        PooledEstimate scrambled = pooled;
        for (std::size_t col = 0; col < scrambled.eigen->eigenvectors.cols(); ++col) {
            Complex phase = std::polar(1.0, 2.0 * g.next());
            for (std::size_t row = 0; row < scrambled.eigen->eigenvectors.rows(); ++row)
                scrambled.eigen->eigenvectors(row, col) *= phase;
        }
        TwoSampleReport rescrambled =
            vw_two_sample_from_pooled(sa, sb, scrambled, 0.05, SolvePolicy::Strict);
        c.require(std::abs(moved.statistic - rescrambled.statistic) < 1e-9,
                  "phase scramble moved the statistic");
    }

    // Equivariance of the farthest projection under special unitary maps.
    for (int trial = 0; trial < 20 && c.ok; ++trial) {
        AmbientPoint y = AmbientPoint::hermitian(random_hermitian(g, 4));
        ComplexMatrix u = random_special_unitary(g, 4);
        double mismatch = chord(farthest_projection(conjugate_by(u, y)),
                                conjugate_by(u, farthest_projection(y)));
        c.require(mismatch < 1e-9, "equivariance violated by " + fmt(mismatch));
    }

    // First-order agreement of the projection differential with forward
    // finite differences: the error must shrink linearly in the step.
    for (ProjectionMode mode : {ProjectionMode::Farthest, ProjectionMode::Nearest}) {
        AmbientPoint y = AmbientPoint::hermitian(random_hermitian(g, 3));
        AmbientPoint v = AmbientPoint::hermitian(random_hermitian(g, 3));
        AmbientPoint derivative = projection_differential(y, v, mode);
        std::vector<double> errors;
        for (double h : {1e-4, 1e-5, 1e-6}) {
            AmbientPoint fd = (1.0 / h) * (project(y + h * v, mode) - project(y, mode));
            errors.push_back((fd - derivative).norm());
        }
        for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
            double ratio = errors[i] / std::max(errors[i + 1], 1e-300);
            c.require(ratio > 3.0 && ratio < 30.0,
                      "finite-difference ratio " + fmt(ratio) + " is not first order");
        }
    }

    c.note("similarity, exchange, phase, equivariance, differential ratio all inside 1e-9");
    return c;
}

// 8. Degenerate-case contracts.
Check criterion_degenerate_contracts() {
    Check c;

    // Eigenvalue ties are focal.
    bool threw = false;
    try {
        farthest_projection(AmbientPoint::hermitian(HermitianMatrix::identity(3)));
    } catch (const FocalPointError&) {
        threw = true;
    }
    c.require(threw, "farthest projection of the identity did not raise FocalPoint");

    threw = false;
    HermitianMatrix tied(3);
    tied.set(1, 1, 1.0);
    tied.set(2, 2, 1.0);
    try {
        nearest_projection(AmbientPoint::hermitian(tied));
    } catch (const FocalPointError&) {
        threw = true;
    }
    c.require(threw, "nearest projection with a top tie did not raise FocalPoint");

    // k = 13, n = m = 14: rank-deficient per-group covariances.
    std::vector<Complex> center(12, Complex(0.0, 0.0));
    center[0] = 1.0;
    auto spec = SamplerSpec::projected_gaussian_cp(13, center, 2.0, 555);
    Sample a = draw_sample_stream(spec, 14, 1);
    Sample b = draw_sample_stream(spec, 14, 2);
    threw = false;
    try {
        vw_two_sample_statistic(a, b, LocationKind::Antimean, 0.05);
    } catch (const SingularCovarianceError&) {
        threw = true;
    }
    c.require(threw, "strict mode accepted rank-deficient covariances");
    TwoSampleReport pinv = vw_two_sample_statistic(a, b, LocationKind::Antimean, 0.05,
                                                   SolvePolicy::PseudoInverse);
    c.require(pinv.pseudo_inverse_used, "pseudo-inverse flag not set");
    c.require(pinv.df >= 1 && pinv.df <= 22, "reduced df " + std::to_string(pinv.df));

    // Point-mass antimean error path through the estimate command (k = 4).
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "shapetest_acceptance";
    fs::create_directories(dir);
    fs::path single = dir / "single.txt";
    {
        std::ofstream out(single);
        out << "0 0\n1 0\n1 1\n0 1\n";
    }
    EstimateOptions options;
    options.input = single;
    std::ostringstream out, err;
    options.location = LocationKind::Mean;
    c.require(run_estimate(options, out, err) == 0, "point-mass mean estimate failed");
    options.location = LocationKind::Antimean;
    c.require(run_estimate(options, out, err) == 3,
              "point-mass antimean did not exit with the focal code");

    c.note("ties, rank deficiency (df " + std::to_string(pinv.df) +
           " under pseudo-inverse), and the point-mass command path behave");
    return c;
}

struct Criterion {
    int number;
    const char* name;
    std::function<Check()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "chi-square anchors", criterion_chi2_anchors},
        {2, "antimean eigencharacterization", criterion_antimean_characterization},
        {3, "Frechet extremality", criterion_frechet_extremality},
        {4, "one-sample level", criterion_one_sample_level},
        {5, "two-sample level and power", criterion_two_sample_level_power},
        {6, "antimean consistency", criterion_consistency},
        {7, "invariance suite", criterion_invariances},
        {8, "degenerate-case contracts", criterion_degenerate_contracts},
    };

    int selected = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            selected = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "--list") == 0) {
            for (const Criterion& c : criteria)
                std::printf("%d: %s\n", c.number, c.name);
            return 0;
        }
    }

    bool all_ok = true;
    for (const Criterion& criterion : criteria) {
        if (selected != 0 && criterion.number != selected) continue;
        auto start = std::chrono::steady_clock::now();
        Check result;
        try {
            result = criterion.run();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%s; %.1fs)\n", result.ok ? "PASS" : "FAIL",
                    criterion.number, criterion.name, result.detail.c_str(), seconds);
        std::fflush(stdout);
        all_ok = all_ok && result.ok;
    }
    return all_ok ? 0 : 1;
}
