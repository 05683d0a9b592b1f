#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/test_helpers.hpp"

using namespace shapetest;
using shapetest::testing::chord;

namespace {

KAdConfig triangle() {
    return KAdConfig{"tri", {Complex(0.0, 0.0), Complex(1.0, 0.0),
                             Complex(0.5, 0.5 * std::sqrt(3.0))}};
}

KAdConfig random_kad(GaussianStream& g, std::size_t k) {
    KAdConfig config;
    config.id = "random";
    for (std::size_t i = 0; i < k; ++i) config.landmarks.push_back(Complex(g.next(), g.next()));
    return config;
}

}  // namespace

TEST_CASE("Helmert submatrix rows for small k") {
    RealMatrix h2 = helmert_submatrix(2);
    CHECK(h2(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(h2(0, 1) == doctest::Approx(-1.0 / std::sqrt(2.0)));

    RealMatrix h3 = helmert_submatrix(3);
    CHECK(h3(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(h3(0, 1) == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(h3(0, 2) == doctest::Approx(0.0));
    CHECK(h3(1, 0) == doctest::Approx(1.0 / std::sqrt(6.0)));
    CHECK(h3(1, 1) == doctest::Approx(1.0 / std::sqrt(6.0)));
    CHECK(h3(1, 2) == doctest::Approx(-2.0 / std::sqrt(6.0)));
}

TEST_CASE("Helmert rows are orthonormal and annihilate the ones vector") {
    for (std::size_t k = 2; k <= 20; ++k) {
        RealMatrix h = helmert_submatrix(k);
        RealMatrix gram = matmul(h, transpose(h));
        for (std::size_t i = 0; i < k - 1; ++i)
            for (std::size_t j = 0; j < k - 1; ++j)
                REQUIRE(std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
        for (std::size_t i = 0; i < k - 1; ++i) {
            double row_sum = 0.0;
            for (std::size_t j = 0; j < k; ++j) row_sum += h(i, j);
            REQUIRE(std::abs(row_sum) < 1e-12);
        }
    }
}

TEST_CASE("to_shape produces a unit representative invariant under rotation") {
    ShapePoint shape = to_shape(triangle());
    double norm_sq = 0.0;
    for (Complex z : shape.rep) norm_sq += std::norm(z);
    CHECK(norm_sq == doctest::Approx(1.0).epsilon(1e-12));

    KAdConfig rotated = triangle();
    Complex rot = std::polar(1.0, 0.77);
    for (Complex& z : rotated.landmarks) z *= rot;
    CHECK(chord(vw_embed(to_shape(triangle())), vw_embed(to_shape(rotated))) < 1e-10);
}

TEST_CASE("translation and scaling do not change the shape") {
    KAdConfig base = triangle();
    KAdConfig moved = base;
    for (Complex& z : moved.landmarks) z = 5.0 * z + Complex(7.0, 2.0);
    AmbientPoint pa = vw_embed(to_shape(base));
    AmbientPoint pb = vw_embed(to_shape(moved));
    CHECK((pa - pb).norm() < 1e-12);
}

TEST_CASE("a collinear triple is a valid shape") {
    KAdConfig collinear{"line", {Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(2.0, 0.0)}};
    ShapePoint shape = to_shape(collinear);
    CHECK(shape.k == 3);
}

TEST_CASE("coincident landmarks are rejected") {
    KAdConfig degenerate{"dot", {Complex(2.0, 1.0), Complex(2.0, 1.0), Complex(2.0, 1.0)}};
    CHECK_THROWS_AS(to_shape(degenerate), DegenerateKAdError);
}

TEST_CASE("full similarity invariance across random k-ads") {
    GaussianStream g(321);
    for (std::size_t k : {std::size_t(3), std::size_t(5), std::size_t(13)}) {
        for (int trial = 0; trial < 334; ++trial) {
            KAdConfig base = random_kad(g, k);
            Complex alpha(g.next(), g.next());
            if (std::abs(alpha) < 1e-3) alpha += 1.0;
            Complex beta(g.next(), g.next());
            KAdConfig moved = base;
            for (Complex& z : moved.landmarks) z = alpha * z + beta;
            REQUIRE((vw_embed(to_shape(base)) - vw_embed(to_shape(moved))).norm() < 1e-10);
        }
    }
}

TEST_CASE("shape distance agrees with the embedded chord distance") {
    ShapePoint a = to_shape(triangle());
    CHECK(shape_distance(a, a) == doctest::Approx(0.0));

    ShapePoint e1 = shape_from_representative({Complex(1.0, 0.0), Complex(0.0, 0.0)});
    ShapePoint e2 = shape_from_representative({Complex(0.0, 0.0), Complex(1.0, 0.0)});
    CHECK(shape_distance(e1, e2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    GaussianStream g(17);
    for (int trial = 0; trial < 1000; ++trial) {
        ShapePoint x = shape_from_representative(shapetest::testing::random_unit_complex(g, 3));
        ShapePoint y = shape_from_representative(shapetest::testing::random_unit_complex(g, 3));
        double direct = shape_distance(x, y);
        double embedded = std::sqrt(chord_distance_sq(vw_embed(x), vw_embed(y)));
        REQUIRE(std::abs(direct - embedded) < 1e-10);
    }
}

TEST_CASE("landmark labels matter: permutations move a generic triangle") {
    KAdConfig base{"t", {Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(0.3, 0.9)}};
    ShapePoint original = to_shape(base);
    double largest = 0.0;
    std::vector<std::size_t> perm{0, 1, 2};
    while (std::next_permutation(perm.begin(), perm.end())) {
        KAdConfig shuffled = base;
        for (std::size_t i = 0; i < 3; ++i) shuffled.landmarks[i] = base.landmarks[perm[i]];
        largest = std::max(largest, shape_distance(original, to_shape(shuffled)));
    }
    CHECK(largest > 0.1);
}

TEST_CASE("helmert_expand inverts helmert_reduce on sum-zero vectors") {
    GaussianStream g(55);
    KAdConfig config = random_kad(g, 6);
    ShapePoint shape = to_shape(config);
    std::vector<Complex> expanded = helmert_expand(shape.rep);
    Complex total(0.0, 0.0);
    for (Complex z : expanded) total += z;
    CHECK(std::abs(total) < 1e-10);
    std::vector<Complex> back = helmert_reduce(expanded);
    for (std::size_t i = 0; i < back.size(); ++i)
        CHECK(std::abs(back[i] - shape.rep[i]) < 1e-12);
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(to_shape(KAdConfig{"small", {Complex(0, 0), Complex(1, 0)}}), DomainError);
    CHECK_THROWS_AS(shape_from_representative({Complex(0, 0), Complex(0, 0)}),
                    NotNormalizedError);
    ShapePoint a = shape_from_representative({Complex(1, 0), Complex(0, 0)});
    ShapePoint b = shape_from_representative({Complex(1, 0), Complex(0, 0), Complex(0, 0)});
    CHECK_THROWS_AS(shape_distance(a, b), DimensionMismatchError);
}
