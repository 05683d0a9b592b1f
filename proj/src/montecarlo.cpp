#include "shapetest/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace shapetest {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

void require_unit(double norm, const char* what) {
    if (std::abs(norm - 1.0) > 1e-10) throw NotNormalizedError(what);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ (index + 1));
}

GaussianStream::GaussianStream(std::uint64_t seed) : rng_(splitmix64(seed)) {}

double GaussianStream::uniform() {
    // 53 random bits mapped into (0, 1]; never zero, so logs are safe.
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianStream::next() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * kPi * u2;
    cached_ = r * std::sin(angle);
    has_cached_ = true;
    return r * std::cos(angle);
}

SamplerSpec SamplerSpec::projected_gaussian_cp(std::size_t k, std::vector<Complex> center,
                                               double concentration, std::uint64_t seed) {
    if (k < 3) throw DomainError("shape sampler needs k >= 3");
    if (center.size() != k - 1) throw DimensionMismatchError("center must have k - 1 entries");
    if (!(concentration >= 0.0) || !std::isfinite(concentration))
        throw DomainError("concentration must be finite and nonnegative");
    double norm_sq = 0.0;
    for (Complex c : center) norm_sq += std::norm(c);
    require_unit(std::sqrt(norm_sq), "sampler center must be unit-norm");
    SamplerSpec spec;
    spec.kind = Kind::ProjectedGaussianCP;
    spec.dimension = k;
    spec.cp_center = std::move(center);
    spec.concentration = concentration;
    spec.seed = seed;
    return spec;
}

SamplerSpec SamplerSpec::projected_gaussian_sphere(std::size_t n, std::vector<double> center,
                                                   double concentration, std::uint64_t seed) {
    if (n < 2) throw DomainError("sphere sampler needs N >= 2");
    if (center.size() != n) throw DimensionMismatchError("center must have N entries");
    if (!(concentration >= 0.0) || !std::isfinite(concentration))
        throw DomainError("concentration must be finite and nonnegative");
    double norm_sq = 0.0;
    for (double c : center) norm_sq += c * c;
    require_unit(std::sqrt(norm_sq), "sampler center must be unit-norm");
    SamplerSpec spec;
    spec.kind = Kind::ProjectedGaussianSphere;
    spec.dimension = n;
    spec.sphere_center = std::move(center);
    spec.concentration = concentration;
    spec.seed = seed;
    return spec;
}

SamplerSpec SamplerSpec::uniform_cp(std::size_t k, std::uint64_t seed) {
    std::vector<Complex> center(k - 1, Complex(0.0, 0.0));
    center[0] = 1.0;
    SamplerSpec spec = projected_gaussian_cp(k, std::move(center), 0.0, seed);
    spec.kind = Kind::UniformCP;
    return spec;
}

SamplerSpec SamplerSpec::uniform_sphere(std::size_t n, std::uint64_t seed) {
    std::vector<double> center(n, 0.0);
    center[0] = 1.0;
    SamplerSpec spec = projected_gaussian_sphere(n, std::move(center), 0.0, seed);
    spec.kind = Kind::UniformSphere;
    return spec;
}

EmbeddingDescriptor SamplerSpec::descriptor() const {
    if (kind == Kind::ProjectedGaussianCP || kind == Kind::UniformCP)
        return EmbeddingDescriptor::veronese_whitney(dimension);
    return EmbeddingDescriptor::sphere(dimension);
}

AmbientPoint SamplerSpec::true_mean() const {
    switch (kind) {
        case Kind::ProjectedGaussianCP:
            if (concentration <= 0.0)
                throw UnsupportedDescriptorError("uniform distribution has no unique mean");
            return vw_embed(cp_center);
        case Kind::ProjectedGaussianSphere:
            if (concentration <= 0.0)
                throw UnsupportedDescriptorError("uniform distribution has no unique mean");
            return AmbientPoint::sphere_vector(sphere_center);
        default:
            throw UnsupportedDescriptorError("uniform distribution has no unique mean");
    }
}

AmbientPoint SamplerSpec::true_antimean() const {
    switch (kind) {
        case Kind::ProjectedGaussianCP: {
            if (concentration <= 0.0)
                throw UnsupportedDescriptorError("uniform distribution has no unique antimean");
            if (dimension != 3)
                throw UnsupportedDescriptorError(
                    "population antimean is only unique for the two-dimensional shape space");
            // Orthogonal line to the center in C^2.
            std::vector<Complex> perp{-std::conj(cp_center[1]), std::conj(cp_center[0])};
            return vw_embed(perp);
        }
        case Kind::ProjectedGaussianSphere: {
            if (concentration <= 0.0)
                throw UnsupportedDescriptorError("uniform distribution has no unique antimean");
            std::vector<double> antipode(sphere_center);
            for (double& x : antipode) x = -x;
            return AmbientPoint::sphere_vector(std::move(antipode));
        }
        default:
            throw UnsupportedDescriptorError("uniform distribution has no unique antimean");
    }
}

Sample draw_sample_stream(const SamplerSpec& spec, std::size_t n, std::uint64_t stream_seed) {
    if (n < 1) throw DomainError("sample size must be positive");
    GaussianStream stream(stream_seed);
    std::vector<AmbientPoint> points;
    points.reserve(n);

    const bool on_cp =
        spec.kind == SamplerSpec::Kind::ProjectedGaussianCP || spec.kind == SamplerSpec::Kind::UniformCP;
    for (std::size_t i = 0; i < n; ++i) {
        if (on_cp) {
            const std::size_t dim = spec.dimension - 1;
            std::vector<Complex> w(dim);
            double norm_sq;
            do {
                norm_sq = 0.0;
                for (std::size_t j = 0; j < dim; ++j) {
                    double re = spec.concentration * spec.cp_center[j].real() + stream.next();
                    double im = spec.concentration * spec.cp_center[j].imag() + stream.next();
                    w[j] = Complex(re, im);
                    norm_sq += re * re + im * im;
                }
            } while (norm_sq < 1e-24);
            double inv = 1.0 / std::sqrt(norm_sq);
            for (Complex& z : w) z *= inv;
            points.push_back(vw_embed(w));
        } else {
            std::vector<double> w(spec.dimension);
            double norm_sq;
            do {
                norm_sq = 0.0;
                for (std::size_t j = 0; j < spec.dimension; ++j) {
                    w[j] = spec.concentration * spec.sphere_center[j] + stream.next();
                    norm_sq += w[j] * w[j];
                }
            } while (norm_sq < 1e-24);
            double inv = 1.0 / std::sqrt(norm_sq);
            for (double& x : w) x *= inv;
            points.push_back(AmbientPoint::sphere_vector(std::move(w)));
        }
    }
    return make_sample(spec.descriptor(), std::move(points));
}

Sample draw_sample(const SamplerSpec& spec, std::size_t n) {
    return draw_sample_stream(spec, n, spec.seed);
}

namespace {

AmbientPoint sphere_grid_point(double theta, double phi) {
    return AmbientPoint::sphere_vector(
        {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
}

AmbientPoint cp_grid_point(double theta, double phi) {
    std::vector<Complex> z{Complex(std::cos(0.5 * theta), 0.0),
                           Complex(std::sin(0.5 * theta) * std::cos(phi),
                                   std::sin(0.5 * theta) * std::sin(phi))};
    // Normalization is exact up to rounding; re-normalize for the embedding.
    double norm = std::sqrt(std::norm(z[0]) + std::norm(z[1]));
    z[0] /= norm;
    z[1] /= norm;
    return vw_embed(z);
}

}  // namespace

BruteForceResult brute_force_antimean(const Sample& s, std::size_t grid_resolution) {
    if (grid_resolution < 100) throw DomainError("grid resolution must be at least 100");
    const bool on_sphere = s.descriptor.kind() == ManifoldKind::Sphere;
    if (on_sphere && s.descriptor.sphere_n() != 3)
        throw UnsupportedDescriptorError("grid search is limited to two-dimensional manifolds");
    if (!on_sphere && s.descriptor.shape_k() != 3)
        throw UnsupportedDescriptorError("grid search is limited to two-dimensional manifolds");

    auto at = [&](double theta, double phi) {
        return on_sphere ? sphere_grid_point(theta, phi) : cp_grid_point(theta, phi);
    };

    const std::size_t n_theta = grid_resolution + 1;
    const std::size_t n_phi = 2 * grid_resolution;
    std::vector<double> values(n_theta * n_phi);

    double best = -1.0;
    std::size_t best_i = 0, best_j = 0;
    for (std::size_t i = 0; i < n_theta; ++i) {
        double theta = kPi * static_cast<double>(i) / static_cast<double>(grid_resolution);
        for (std::size_t j = 0; j < n_phi; ++j) {
            double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_phi);
            double value = frechet_function(at(theta, phi), s);
            values[i * n_phi + j] = value;
            if (value > best) {
                best = value;
                best_i = i;
                best_j = j;
            }
        }
    }

    const double theta_best = kPi * static_cast<double>(best_i) / static_cast<double>(grid_resolution);
    const double phi_best = 2.0 * kPi * static_cast<double>(best_j) / static_cast<double>(n_phi);
    AmbientPoint coarse_argmax = at(theta_best, phi_best);

    // Flat-maximum detection on the coarse grid: is the maximum matched far
    // away from the argmax?
    double far_best = -1.0;
    for (std::size_t i = 0; i < n_theta; ++i) {
        double theta = kPi * static_cast<double>(i) / static_cast<double>(grid_resolution);
        for (std::size_t j = 0; j < n_phi; ++j) {
            double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_phi);
            if (chord_distance_sq(coarse_argmax, at(theta, phi)) <= 0.25) continue;
            far_best = std::max(far_best, values[i * n_phi + j]);
        }
    }

    // One refinement pass around the coarse cell.
    const double h_theta = kPi / static_cast<double>(grid_resolution);
    const double h_phi = 2.0 * kPi / static_cast<double>(n_phi);
    const int refine = 40;
    double refined_best = best;
    double refined_theta = theta_best, refined_phi = phi_best;
    for (int i = -refine; i <= refine; ++i) {
        double theta = theta_best + h_theta * static_cast<double>(i) / refine;
        if (theta < 0.0 || theta > kPi) continue;
        for (int j = -refine; j <= refine; ++j) {
            double phi = phi_best + h_phi * static_cast<double>(j) / refine;
            double value = frechet_function(at(theta, phi), s);
            if (value > refined_best) {
                refined_best = value;
                refined_theta = theta;
                refined_phi = phi;
            }
        }
    }

    BruteForceResult result{at(refined_theta, refined_phi), refined_best, false};
    result.flat_maximum = far_best >= 0.0 && best - far_best < 1e-9;
    return result;
}

namespace {

using ReplicateRunner = std::function<double(std::size_t)>;  // returns statistic, throws on error

ExperimentResult run_replicates(std::size_t replicates, std::uint64_t seed,
                                std::size_t workers, const ReplicateRunner& runner,
                                const std::function<bool(double)>& rejects) {
    ExperimentResult result;
    result.replicates = replicates;
    result.seed = seed;
    result.per_replicate_stats.assign(replicates, std::numeric_limits<double>::quiet_NaN());

    const auto start = std::chrono::steady_clock::now();
    std::vector<char> errored(replicates, 0);

    auto worker_loop = [&](std::size_t worker_index, std::size_t worker_count) {
        for (std::size_t r = worker_index; r < replicates; r += worker_count) {
            try {
                result.per_replicate_stats[r] = runner(r);
            } catch (const Error&) {
                errored[r] = 1;
            }
        }
    };

    if (workers <= 1) {
        worker_loop(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker_loop, w, workers);
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t r = 0; r < replicates; ++r) {
        if (errored[r]) {
            ++result.errors;
        } else if (rejects(result.per_replicate_stats[r])) {
            ++result.rejections;
        }
    }
    result.empirical_level =
        static_cast<double>(result.rejections) / static_cast<double>(replicates);
    const auto stop = std::chrono::steady_clock::now();
    result.wall_clock_seconds = std::chrono::duration<double>(stop - start).count();
    return result;
}

ExperimentResult run_experiment(const SamplerSpec& spec_a, const SamplerSpec& spec_b,
                                std::size_t n, std::size_t m, std::size_t replicates,
                                double alpha, LocationKind kind, ExperimentMethod method,
                                std::size_t workers) {
    if (replicates < 1) throw DomainError("experiment needs at least one replicate");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");

    const std::uint64_t master = spec_a.seed;
    AmbientPoint hypothesized = AmbientPoint::zero(spec_a.descriptor());
    if (method == ExperimentMethod::OneSample)
        hypothesized = kind == LocationKind::Antimean ? spec_a.true_antimean()
                                                      : spec_a.true_mean();

    auto runner = [&, hypothesized](std::size_t r) -> double {
        const std::uint64_t seed_a = derive_seed(master, 2 * r);
        const std::uint64_t seed_b = derive_seed(master, 2 * r + 1);
        switch (method) {
            case ExperimentMethod::OneSample: {
                Sample sample = draw_sample_stream(spec_b, n, seed_a);
                OneSampleTest test = one_sample_statistic(sample, hypothesized, kind);
                return test.statistic;
            }
            case ExperimentMethod::TwoSampleVW: {
                Sample a = draw_sample_stream(spec_a, n, seed_a);
                Sample b = draw_sample_stream(spec_b, m, seed_b);
                return vw_two_sample_statistic(a, b, kind, alpha).statistic;
            }
            case ExperimentMethod::TwoSampleGeneric:
            default: {
                Sample a = draw_sample_stream(spec_a, n, seed_a);
                Sample b = draw_sample_stream(spec_b, m, seed_b);
                return generic_two_sample_statistic(a, b, kind, alpha).statistic;
            }
        }
    };

    const std::size_t df = spec_a.descriptor().intrinsic_dim();
    const double critical = chi2_quantile(1.0 - alpha, static_cast<unsigned>(df));

    return run_replicates(replicates, master, workers, runner,
                          [critical](double stat) { return stat > critical; });
}

}  // namespace

ExperimentResult run_level_experiment(const SamplerSpec& spec, std::size_t n, std::size_t m,
                                      std::size_t replicates, double alpha, LocationKind kind,
                                      ExperimentMethod method, std::size_t workers) {
    return run_experiment(spec, spec, n, m, replicates, alpha, kind, method, workers);
}

ExperimentResult run_power_experiment(const SamplerSpec& null_spec, const SamplerSpec& alt_spec,
                                      std::size_t n, std::size_t m, std::size_t replicates,
                                      double alpha, LocationKind kind, ExperimentMethod method,
                                      std::size_t workers) {
    return run_experiment(null_spec, alt_spec, n, m, replicates, alpha, kind, method, workers);
}

std::vector<ConsistencyRow> run_consistency_experiment(const SamplerSpec& spec,
                                                       const std::vector<std::size_t>& n_grid,
                                                       std::size_t seeds) {
    if (seeds < 1) throw DomainError("consistency experiment needs at least one seed");
    AmbientPoint truth = spec.true_antimean();
    std::vector<ConsistencyRow> table;
    table.reserve(n_grid.size());
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::size_t n = n_grid[gi];
        std::vector<double> errors(seeds);
        for (std::size_t si = 0; si < seeds; ++si) {
            const std::uint64_t stream = derive_seed(spec.seed, gi * seeds + si);
            Sample sample = draw_sample_stream(spec, n, stream);
            LocationEstimate est = extrinsic_estimate(sample, LocationKind::Antimean);
            errors[si] = std::sqrt(chord_distance_sq(est.point, truth));
        }
        std::sort(errors.begin(), errors.end());
        double median = seeds % 2 == 1 ? errors[seeds / 2]
                                       : 0.5 * (errors[seeds / 2 - 1] + errors[seeds / 2]);
        table.push_back({n, median});
    }
    return table;
}

SamplerSpec shifted_spec(const SamplerSpec& base, double chord_separation) {
    if (!(chord_separation > 0.0)) throw DomainError("separation must be positive");
    SamplerSpec shifted = base;
    if (base.kind == SamplerSpec::Kind::ProjectedGaussianCP) {
        if (base.dimension != 3)
            throw UnsupportedDescriptorError("separation control is defined for k = 3");
        if (chord_separation > std::sqrt(2.0))
            throw DomainError("chord separation exceeds the diameter of the embedded space");
        const double eta = std::asin(chord_separation / std::sqrt(2.0));
        std::vector<Complex> perp{-std::conj(base.cp_center[1]), std::conj(base.cp_center[0])};
        std::vector<Complex> rotated(2);
        for (std::size_t i = 0; i < 2; ++i)
            rotated[i] = std::cos(eta) * base.cp_center[i] + std::sin(eta) * perp[i];
        shifted.cp_center = std::move(rotated);
        return shifted;
    }
    if (base.kind == SamplerSpec::Kind::ProjectedGaussianSphere) {
        if (chord_separation > 2.0)
            throw DomainError("chord separation exceeds the sphere diameter");
        const double psi = 2.0 * std::asin(0.5 * chord_separation);
        // Rotate inside the plane spanned by the center and a deterministic
        // orthogonal direction.
        std::vector<double> e(base.sphere_center.size(), 0.0);
        std::size_t pick = 0;
        double smallest = std::abs(base.sphere_center[0]);
        for (std::size_t i = 1; i < e.size(); ++i)
            if (std::abs(base.sphere_center[i]) < smallest) {
                smallest = std::abs(base.sphere_center[i]);
                pick = i;
            }
        e[pick] = 1.0;
        double dot = base.sphere_center[pick];
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] -= dot * base.sphere_center[i];
            norm_sq += e[i] * e[i];
        }
        double inv = 1.0 / std::sqrt(norm_sq);
        std::vector<double> rotated(e.size());
        for (std::size_t i = 0; i < e.size(); ++i)
            rotated[i] = std::cos(psi) * base.sphere_center[i] + std::sin(psi) * e[i] * inv;
        shifted.sphere_center = std::move(rotated);
        return shifted;
    }
    throw UnsupportedDescriptorError("separation control needs a projected Gaussian spec");
}

}  // namespace shapetest
