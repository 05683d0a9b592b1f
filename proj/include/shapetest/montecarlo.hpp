#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "shapetest/twosample.hpp"

namespace shapetest {

// Seeded distribution on one of the two manifolds. Projected Gaussian: a
// Gaussian vector centered at concentration * center, normalized (and
// projectivized in the shape case). Concentration zero is the uniform
// distribution.
struct SamplerSpec {
    enum class Kind {
        ProjectedGaussianCP,
        ProjectedGaussianSphere,
        UniformCP,
        UniformSphere
    };

    Kind kind = Kind::UniformSphere;
    std::size_t dimension = 3;  // k for the shape space, N for the sphere
    std::vector<Complex> cp_center;
    std::vector<double> sphere_center;
    double concentration = 0.0;
    std::uint64_t seed = 0;

    static SamplerSpec projected_gaussian_cp(std::size_t k, std::vector<Complex> center,
                                             double concentration, std::uint64_t seed);
    static SamplerSpec projected_gaussian_sphere(std::size_t n, std::vector<double> center,
                                                 double concentration, std::uint64_t seed);
    static SamplerSpec uniform_cp(std::size_t k, std::uint64_t seed);
    static SamplerSpec uniform_sphere(std::size_t n, std::uint64_t seed);

    EmbeddingDescriptor descriptor() const;

    // Closed-form population locations. The projected Gaussian's ambient mean
    // is a multiple of the identity plus a rank-one term along the center, so
    // the mean is the center line and, for k = 3 (or any sphere), the
    // antimean is the orthogonal line (the antipode). Throws
    // UnsupportedDescriptorError where the population antimean is not unique.
    AmbientPoint true_mean() const;
    AmbientPoint true_antimean() const;
};

// Deterministic stream of standard normals: a fixed-seed Mersenne Twister
// feeding a Box-Muller transform. The twister's output sequence is pinned by
// the standard, so streams reproduce across builds and platforms.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed);
    double next();

  private:
    double uniform();  // in (0, 1]
    std::mt19937_64 rng_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

// Derives an independent substream seed; replicate streams never depend on
// execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Draws n observations. Deterministic for a fixed (spec, n).
Sample draw_sample(const SamplerSpec& spec, std::size_t n);
// Same, with the stream index replacing spec.seed (for replicate loops).
Sample draw_sample_stream(const SamplerSpec& spec, std::size_t n, std::uint64_t stream_seed);

struct BruteForceResult {
    AmbientPoint argmax;
    double value = 0.0;
    // The grid maximum is matched (within 1e-9) by a point farther than
    // chord distance 0.5: the maximizer is not isolated.
    bool flat_maximum = false;
};

// Exhaustive maximization of the Frechet function over a latitude/longitude
// grid (Hopf parametrization for the shape sphere), with one local
// refinement pass. Supported on the two-dimensional manifolds only.
BruteForceResult brute_force_antimean(const Sample& s, std::size_t grid_resolution);

struct ExperimentResult {
    std::size_t replicates = 0;
    std::size_t rejections = 0;
    std::size_t errors = 0;  // replicates that raised; never counted as rejections
    double empirical_level = 0.0;
    std::vector<double> per_replicate_stats;  // NaN for errored replicates
    double wall_clock_seconds = 0.0;
    std::uint64_t seed = 0;
};

enum class ExperimentMethod { OneSample, TwoSampleVW, TwoSampleGeneric };

// Both groups drawn from the same spec (the null holds); reports the
// empirical rejection rate at level alpha. The one-sample method tests the
// spec's true location, using only the first group.
ExperimentResult run_level_experiment(const SamplerSpec& spec, std::size_t n, std::size_t m,
                                      std::size_t replicates, double alpha, LocationKind kind,
                                      ExperimentMethod method, std::size_t workers = 1);

// Groups drawn from different specs; the rejection rate is the power.
// One-sample: data from alt_spec tested against null_spec's true location.
ExperimentResult run_power_experiment(const SamplerSpec& null_spec, const SamplerSpec& alt_spec,
                                      std::size_t n, std::size_t m, std::size_t replicates,
                                      double alpha, LocationKind kind, ExperimentMethod method,
                                      std::size_t workers = 1);

struct ConsistencyRow {
    std::size_t n = 0;
    double median_chord_error = 0.0;
};

// Median (over seeds) chord distance between the sample antimean and the
// spec's true antimean, for each sample size in n_grid.
std::vector<ConsistencyRow> run_consistency_experiment(const SamplerSpec& spec,
                                                       const std::vector<std::size_t>& n_grid,
                                                       std::size_t seeds);

// A spec whose true location sits at the requested chord distance from the
// base spec's (rotating the center inside a fixed 2-plane).
SamplerSpec shifted_spec(const SamplerSpec& base, double chord_separation);

}  // namespace shapetest
