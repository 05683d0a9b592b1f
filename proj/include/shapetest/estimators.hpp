#pragma once

#include <optional>
#include <vector>

#include "shapetest/manifolds.hpp"

namespace shapetest {

// A collection of on-manifold observations sharing one embedding.
struct Sample {
    EmbeddingDescriptor descriptor;
    std::vector<AmbientPoint> points;

    std::size_t size() const { return points.size(); }
};

Sample make_sample(EmbeddingDescriptor descriptor, std::vector<AmbientPoint> points);

enum class LocationKind { Mean, Antimean };

ProjectionMode projection_mode(LocationKind kind);

// An extrinsic location estimate together with the pieces the asymptotic
// tests need: the raw ambient mean, its eigendecomposition (Hermitian case),
// the tangent-space covariance of the projected mean, and the frame it is
// expressed in.
struct LocationEstimate {
    LocationKind kind;
    AmbientPoint point;         // projection of the ambient mean onto the manifold
    AmbientPoint ambient_mean;  // (1/n) sum of the embedded observations
    std::optional<EigenDecomposition> eigen;
    RealMatrix anticov;  // intrinsic_dim x intrinsic_dim, PSD
    TangentFrame frame;  // anchored at point
    std::size_t n = 0;
};

// Mean of squared chord distances from p to the sample.
double frechet_function(const AmbientPoint& p, const Sample& s);

// Extrinsic sample mean or antimean: the projection of the ambient mean, by
// nearest or farthest projection. Throws FocalPointError when the ambient
// mean is focal for the requested kind.
LocationEstimate extrinsic_estimate(const Sample& s, LocationKind kind);

// Tangent-space covariance of the projected sample mean, in the frame of the
// estimate: B Sigma B^T with Sigma the ambient sample covariance (divisor n)
// and B the frame rows composed with the projection differential at the
// ambient mean. Zero matrix for n < 2.
RealMatrix sample_anticovariance(const Sample& s, const LocationEstimate& est);

struct OneSampleTest {
    double statistic = 0.0;
    std::size_t df = 0;
    double pvalue = 1.0;
};

// Chi-square statistic for H0: the extrinsic location equals `hypothesized`.
// n times the squared standardized tangential coordinates of the difference
// between the projected sample mean and the hypothesized point, with the
// frame anchored at the hypothesized point. df = intrinsic dimension.
OneSampleTest one_sample_statistic(const Sample& s, const AmbientPoint& hypothesized,
                                   LocationKind kind = LocationKind::Antimean);

}  // namespace shapetest
