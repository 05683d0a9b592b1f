#pragma once

#include <array>
#include <optional>
#include <utility>

#include "shapetest/estimators.hpp"

namespace shapetest {

enum class PoolingRule { AmbientAverage, ProjectionAverage };
enum class TestMethod { VWCoordinates, GenericTangent };

// How singular test covariances are handled: Strict raises
// SingularCovarianceError, PseudoInverse substitutes a truncated
// Moore-Penrose inverse and reduces the degrees of freedom to the numerical
// rank.
enum class SolvePolicy { Strict, PseudoInverse };

// Common location estimate under the null hypothesis of equal locations.
struct PooledEstimate {
    AmbientPoint ambient;  // weighted ambient average before projecting
    AmbientPoint point;    // its projection onto the manifold
    std::optional<EigenDecomposition> eigen;
    std::array<double, 2> weights;  // n/(n+m), m/(n+m)
    PoolingRule rule;
    LocationKind kind;
};

// Pools the two groups: AmbientAverage averages the raw ambient means,
// ProjectionAverage averages the per-group projected points; both then
// project the average.
PooledEstimate pooled_estimate(const Sample& a, const Sample& b, LocationKind kind,
                               PoolingRule rule);

// Tangential coordinates of the observations around the pooled anchor
// eigenvector: rows 1..k-2 hold real parts of u_a* X_j u_anchor for the
// completion eigenvectors u_a, rows k-1..2k-4 the imaginary parts.
struct CoordinateMatrix {
    RealMatrix values;            // (2k-4) x sample size
    ComplexMatrix anchored_frame; // eigenvector set of the pooled estimate
};

std::pair<CoordinateMatrix, CoordinateMatrix> coordinate_matrices(const Sample& a,
                                                                  const Sample& b,
                                                                  const PooledEstimate& pooled);

struct TwoSampleReport {
    double statistic = 0.0;
    std::size_t df = 0;
    double pvalue = 1.0;
    double alpha = 0.05;
    bool reject = false;
    LocationKind location_kind = LocationKind::Antimean;
    AmbientPoint pooled_point;
    LocationEstimate group_a;
    LocationEstimate group_b;
    TestMethod method = TestMethod::VWCoordinates;
    PoolingRule pooling = PoolingRule::AmbientAverage;
    bool pseudo_inverse_used = false;
};

// Coordinate-based chi-square test for equality of the two groups' extrinsic
// locations on the shape embedding. The statistic is the squared Mahalanobis
// distance between the coordinate row means under the combined covariance
// (1/n) S1 + (1/m) S2; df = 2k-4 under Strict policy.
TwoSampleReport vw_two_sample_statistic(const Sample& a, const Sample& b, LocationKind kind,
                                        double alpha, SolvePolicy policy = SolvePolicy::Strict,
                                        PoolingRule pooling = PoolingRule::AmbientAverage);

// Tangent-space chi-square test valid for any embedding: compares the
// projected group means in the frame at the pooled point, with per-group
// covariances pushed through the projection differential at the pooled
// ambient mean.
TwoSampleReport generic_two_sample_statistic(const Sample& a, const Sample& b, LocationKind kind,
                                             double alpha,
                                             SolvePolicy policy = SolvePolicy::Strict,
                                             PoolingRule pooling = PoolingRule::ProjectionAverage);

// Shared implementations taking a precomputed pooled estimate; exposed so
// invariance tests can rerun a statistic under a modified pooled frame.
TwoSampleReport vw_two_sample_from_pooled(const Sample& a, const Sample& b,
                                          const PooledEstimate& pooled, double alpha,
                                          SolvePolicy policy);
TwoSampleReport generic_two_sample_from_pooled(const Sample& a, const Sample& b,
                                               const PooledEstimate& pooled, double alpha,
                                               SolvePolicy policy);

}  // namespace shapetest
