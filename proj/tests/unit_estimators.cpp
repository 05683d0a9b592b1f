#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/test_helpers.hpp"

using namespace shapetest;
using shapetest::testing::chord;
using shapetest::testing::random_unit_complex;

namespace {

Sample sphere_sample(std::vector<std::vector<double>> points) {
    std::vector<AmbientPoint> ambient;
    for (auto& p : points) ambient.push_back(AmbientPoint::sphere_vector(std::move(p)));
    EmbeddingDescriptor descriptor = ambient.front().descriptor();
    return make_sample(descriptor, std::move(ambient));
}

Sample cp_point_mass(const std::vector<Complex>& rep, std::size_t copies) {
    std::vector<AmbientPoint> points(copies, vw_embed(rep));
    EmbeddingDescriptor descriptor = points.front().descriptor();
    return make_sample(descriptor, std::move(points));
}

// Frame rows composed with a central finite-difference projection
// differential, bypassing the closed-form derivative.
RealMatrix finite_difference_anticov(const Sample& s, const TangentFrame& frame,
                                     const AmbientPoint& mean, ProjectionMode mode, double h) {
    const std::size_t d = frame.basis.size();
    const std::size_t ambient = s.descriptor.ambient_dim();
    RealMatrix b(d, ambient);
    std::vector<double> center = mean.flatten();
    for (std::size_t col = 0; col < ambient; ++col) {
        std::vector<double> plus = center, minus = center;
        plus[col] += h;
        minus[col] -= h;
        AmbientPoint image = (1.0 / (2.0 * h)) *
                             (project(AmbientPoint::unflatten(s.descriptor, plus), mode) -
                              project(AmbientPoint::unflatten(s.descriptor, minus), mode));
        for (std::size_t r = 0; r < d; ++r) b(r, col) = frame.basis[r].inner(image);
    }

    std::vector<std::vector<double>> coords;
    for (const AmbientPoint& x : s.points) coords.push_back(x.flatten());
    std::vector<double> mu(ambient, 0.0);
    for (const auto& c : coords)
        for (std::size_t i = 0; i < ambient; ++i) mu[i] += c[i];
    for (double& x : mu) x /= static_cast<double>(coords.size());
    RealMatrix cov(ambient, ambient);
    for (const auto& c : coords)
        for (std::size_t i = 0; i < ambient; ++i)
            for (std::size_t j = 0; j < ambient; ++j)
                cov(i, j) += (c[i] - mu[i]) * (c[j] - mu[j]);
    for (std::size_t i = 0; i < ambient; ++i)
        for (std::size_t j = 0; j < ambient; ++j)
            cov(i, j) /= static_cast<double>(coords.size());
    return matmul(matmul(b, cov), transpose(b));
}

}  // namespace

TEST_CASE("Frechet function closed cases") {
    AmbientPoint p = AmbientPoint::sphere_vector({1.0, 0.0, 0.0});
    Sample mass = sphere_sample({{1.0, 0.0, 0.0}});
    CHECK(frechet_function(p, mass) == 0.0);
    AmbientPoint antipode = AmbientPoint::sphere_vector({-1.0, 0.0, 0.0});
    CHECK(frechet_function(antipode, mass) == doctest::Approx(4.0));

    Sample cp = cp_point_mass({Complex(1, 0), Complex(0, 0)}, 1);
    AmbientPoint e2 = vw_embed(std::vector<Complex>{Complex(0, 0), Complex(1, 0)});
    CHECK(frechet_function(e2, cp) == doctest::Approx(2.0));

    CHECK_THROWS_AS(frechet_function(p, cp), DescriptorMismatchError);
}

TEST_CASE("sphere antimeans of tiny samples") {
    Sample single = sphere_sample({{1.0, 0.0, 0.0}});
    LocationEstimate anti = extrinsic_estimate(single, LocationKind::Antimean);
    CHECK(anti.point.vec()[0] == doctest::Approx(-1.0));

    Sample pair = sphere_sample({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
    LocationEstimate anti2 = extrinsic_estimate(pair, LocationKind::Antimean);
    const double inv_root2 = 1.0 / std::sqrt(2.0);
    CHECK(anti2.point.vec()[0] == doctest::Approx(-inv_root2));
    CHECK(anti2.point.vec()[1] == doctest::Approx(-inv_root2));
    CHECK(anti2.point.vec()[2] == doctest::Approx(0.0));

    LocationEstimate mean = extrinsic_estimate(pair, LocationKind::Mean);
    CHECK(mean.point.vec()[0] == doctest::Approx(inv_root2));
}

TEST_CASE("antipodal sphere pair has no antimean") {
    Sample antipodal = sphere_sample({{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}});
    CHECK_THROWS_AS(extrinsic_estimate(antipodal, LocationKind::Antimean), FocalPointError);
}

TEST_CASE("shape antimean maximizes the Frechet function") {
    auto spec = SamplerSpec::projected_gaussian_cp(
        3, {Complex(0.8, 0.0), Complex(0.36, 0.48)}, 1.5, 91);
    for (int round = 0; round < 5; ++round) {
        Sample s = draw_sample_stream(spec, 50, derive_seed(11, round));
        LocationEstimate est = extrinsic_estimate(s, LocationKind::Antimean);

        BruteForceResult brute = brute_force_antimean(s, 250);
        CHECK(chord(est.point, brute.argmax) < 1e-3);

        double at_estimate = frechet_function(est.point, s);
        GaussianStream g(derive_seed(12, round));
        for (int trial = 0; trial < 10000; ++trial) {
            AmbientPoint candidate = vw_embed(random_unit_complex(g, 2));
            REQUIRE(frechet_function(candidate, s) <= at_estimate + 1e-9);
        }
    }
}

TEST_CASE("anticovariance of a point mass is zero") {
    Sample mass = cp_point_mass({Complex(1, 0), Complex(0, 0)}, 1);
    LocationEstimate est = extrinsic_estimate(mass, LocationKind::Mean);
    for (std::size_t i = 0; i < est.anticov.rows(); ++i)
        for (std::size_t j = 0; j < est.anticov.cols(); ++j)
            CHECK(est.anticov(i, j) == 0.0);
}

TEST_CASE("anticovariance matches a finite-difference differential") {
    auto spec = SamplerSpec::projected_gaussian_sphere(3, {0.0, 0.0, 1.0}, 4.0, 5);
    Sample s = draw_sample(spec, 200);
    LocationEstimate est = extrinsic_estimate(s, LocationKind::Antimean);
    CHECK(est.point.vec()[2] < -0.9);

    RealMatrix reference = finite_difference_anticov(
        s, est.frame, est.ambient_mean, ProjectionMode::Farthest, 1e-6);
    for (std::size_t i = 0; i < reference.rows(); ++i)
        for (std::size_t j = 0; j < reference.cols(); ++j)
            CHECK(std::abs(reference(i, j) - est.anticov(i, j)) < 1e-6);
}

TEST_CASE("rotating the sample conjugates the anticovariance spectrum") {
    auto spec = SamplerSpec::projected_gaussian_sphere(3, {0.0, 0.0, 1.0}, 3.0, 21);
    Sample s = draw_sample(spec, 100);
    LocationEstimate est = extrinsic_estimate(s, LocationKind::Antimean);

    // Rotation permuting the axes: (x, y, z) -> (y, z, x).
    std::vector<AmbientPoint> rotated;
    for (const AmbientPoint& p : s.points)
        rotated.push_back(AmbientPoint::sphere_vector({p.vec()[1], p.vec()[2], p.vec()[0]}));
    Sample rs = make_sample(s.descriptor, std::move(rotated));
    LocationEstimate rest = extrinsic_estimate(rs, LocationKind::Antimean);

    SymmetricEigen before = symmetric_eig(est.anticov);
    SymmetricEigen after = symmetric_eig(rest.anticov);
    for (std::size_t i = 0; i < before.eigenvalues.size(); ++i)
        CHECK(std::abs(before.eigenvalues[i] - after.eigenvalues[i]) < 1e-9);
}

TEST_CASE("anticovariance stays positive semidefinite") {
    GaussianStream seeds(303);
    for (int trial = 0; trial < 20; ++trial) {
        auto spec = SamplerSpec::projected_gaussian_cp(
            4, random_unit_complex(seeds, 3), 1.0 + trial * 0.2,
            derive_seed(40, static_cast<std::uint64_t>(trial)));
        Sample s = draw_sample(spec, 30);
        LocationEstimate est = extrinsic_estimate(s, LocationKind::Antimean);
        for (std::size_t i = 0; i < est.anticov.rows(); ++i)
            for (std::size_t j = 0; j < est.anticov.cols(); ++j)
                REQUIRE(est.anticov(i, j) == est.anticov(j, i));
        SymmetricEigen eig = symmetric_eig(est.anticov);
        REQUIRE(eig.eigenvalues.front() >= -1e-10);
    }
}

TEST_CASE("duplicating every point leaves estimate and anticovariance in place") {
    auto spec = SamplerSpec::projected_gaussian_cp(3, {Complex(1, 0), Complex(0, 0)}, 2.0, 17);
    Sample s = draw_sample(spec, 40);
    std::vector<AmbientPoint> doubled = s.points;
    doubled.insert(doubled.end(), s.points.begin(), s.points.end());
    Sample s2 = make_sample(s.descriptor, std::move(doubled));

    LocationEstimate a = extrinsic_estimate(s, LocationKind::Antimean);
    LocationEstimate b = extrinsic_estimate(s2, LocationKind::Antimean);
    CHECK(chord(a.point, b.point) < 1e-12);
    for (std::size_t i = 0; i < a.anticov.rows(); ++i)
        for (std::size_t j = 0; j < a.anticov.cols(); ++j)
            CHECK(std::abs(a.anticov(i, j) - b.anticov(i, j)) < 1e-13);
}

TEST_CASE("one-sample statistic vanishes at the sample antimean") {
    auto spec = SamplerSpec::projected_gaussian_cp(3, {Complex(1, 0), Complex(0, 0)}, 2.0, 23);
    Sample s = draw_sample(spec, 60);
    LocationEstimate est = extrinsic_estimate(s, LocationKind::Antimean);
    OneSampleTest test = one_sample_statistic(s, est.point, LocationKind::Antimean);
    CHECK(test.statistic == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(test.pvalue == doctest::Approx(1.0));
    CHECK(test.df == 2);
}

TEST_CASE("one-sample statistic refuses degenerate samples") {
    Sample mass = cp_point_mass({Complex(1, 0), Complex(0, 0)}, 1);
    AmbientPoint hyp = vw_embed(std::vector<Complex>{Complex(0, 0), Complex(1, 0)});
    CHECK_THROWS_AS(one_sample_statistic(mass, hyp, LocationKind::Mean),
                    SingularAnticovarianceError);
}

TEST_CASE("one-sample statistic holds its level roughly") {
    // Small sanity run; the full 2000-replicate gate lives in the acceptance
    // suite.
    auto spec = SamplerSpec::projected_gaussian_cp(3, {Complex(1, 0), Complex(0, 0)}, 2.0, 777);
    ExperimentResult level = run_level_experiment(spec, 200, 0, 200, 0.05,
                                                  LocationKind::Antimean,
                                                  ExperimentMethod::OneSample, 2);
    CHECK(level.errors == 0);
    CHECK(level.empirical_level > 0.005);
    CHECK(level.empirical_level < 0.15);
}

TEST_CASE("one-sample statistic detects a shifted antimean") {
    auto spec = SamplerSpec::projected_gaussian_cp(3, {Complex(1, 0), Complex(0, 0)}, 2.0, 888);
    ExperimentResult power = run_power_experiment(spec, shifted_spec(spec, 0.5), 200, 0, 200,
                                                  0.05, LocationKind::Antimean,
                                                  ExperimentMethod::OneSample, 2);
    CHECK(power.errors == 0);
    CHECK(power.empirical_level > 0.9);
}
