#include "shapetest/estimators.hpp"

#include <cmath>

namespace shapetest {

Sample make_sample(EmbeddingDescriptor descriptor, std::vector<AmbientPoint> points) {
    if (points.empty()) throw DomainError("a sample needs at least one point");
    for (const AmbientPoint& p : points)
        if (p.descriptor() != descriptor)
            throw DescriptorMismatchError("sample points disagree on the embedding");
    return Sample{descriptor, std::move(points)};
}

ProjectionMode projection_mode(LocationKind kind) {
    return kind == LocationKind::Mean ? ProjectionMode::Nearest : ProjectionMode::Farthest;
}

double frechet_function(const AmbientPoint& p, const Sample& s) {
    if (p.descriptor() != s.descriptor)
        throw DescriptorMismatchError("evaluation point does not match the sample");
    double sum = 0.0;
    for (const AmbientPoint& x : s.points) sum += chord_distance_sq(p, x);
    return sum / static_cast<double>(s.size());
}

namespace {

AmbientPoint ambient_mean(const Sample& s) {
    AmbientPoint mean = AmbientPoint::zero(s.descriptor);
    for (const AmbientPoint& x : s.points) mean += x;
    mean *= 1.0 / static_cast<double>(s.size());
    return mean;
}

// Ambient sample covariance (divisor n) in the orthonormal coordinate layout.
RealMatrix ambient_covariance(const Sample& s) {
    const std::size_t dim = s.descriptor.ambient_dim();
    const std::size_t n = s.size();
    std::vector<std::vector<double>> coords;
    coords.reserve(n);
    for (const AmbientPoint& x : s.points) coords.push_back(x.flatten());
    std::vector<double> mean(dim, 0.0);
    for (const auto& c : coords)
        for (std::size_t i = 0; i < dim; ++i) mean[i] += c[i];
    for (double& m : mean) m /= static_cast<double>(n);
    RealMatrix cov(dim, dim);
    for (const auto& c : coords)
        for (std::size_t i = 0; i < dim; ++i) {
            double di = c[i] - mean[i];
            if (di == 0.0) continue;
            for (std::size_t j = 0; j < dim; ++j) cov(i, j) += di * (c[j] - mean[j]);
        }
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) cov(i, j) /= static_cast<double>(n);
    return cov;
}

// Rows of the composed map: frame coordinates of the projection differential.
// The differential is self-adjoint, so row a is the coordinate vector of
// d P(f_a) at the evaluation point.
RealMatrix composed_frame_rows(const TangentFrame& frame, const AmbientPoint& at,
                               ProjectionMode mode) {
    const std::size_t d = frame.basis.size();
    const std::size_t ambient = at.descriptor().ambient_dim();
    RealMatrix b(d, ambient);
    for (std::size_t a = 0; a < d; ++a) {
        AmbientPoint image = projection_differential(at, frame.basis[a], mode);
        std::vector<double> coords = image.flatten();
        for (std::size_t j = 0; j < ambient; ++j) b(a, j) = coords[j];
    }
    return b;
}

RealMatrix anticovariance_in_frame(const Sample& s, const TangentFrame& frame,
                                   const AmbientPoint& ambient_mean_point,
                                   ProjectionMode mode) {
    const std::size_t d = frame.basis.size();
    if (s.size() < 2) return RealMatrix(d, d);
    RealMatrix b = composed_frame_rows(frame, ambient_mean_point, mode);
    RealMatrix cov = ambient_covariance(s);
    RealMatrix anticov = matmul(matmul(b, cov), transpose(b));
    // Symmetric up to rounding; make it exact.
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            double value = 0.5 * (anticov(i, j) + anticov(j, i));
            anticov(i, j) = value;
            anticov(j, i) = value;
        }
    return anticov;
}

}  // namespace

LocationEstimate extrinsic_estimate(const Sample& s, LocationKind kind) {
    const ProjectionMode mode = projection_mode(kind);
    AmbientPoint mean = ambient_mean(s);

    std::optional<EigenDecomposition> eigen;
    AmbientPoint point = AmbientPoint::zero(s.descriptor);
    TangentFrame frame{point, {}};
    if (s.descriptor.kind() == ManifoldKind::VeroneseWhitney) {
        eigen = hermitian_eig(mean.matrix());
        const double gap = mode == ProjectionMode::Farthest ? eigen->gap_at_smallest()
                                                            : eigen->gap_at_largest();
        if (gap < eigen->tie_tolerance())
            throw FocalPointError("ambient mean is focal for the requested location");
        frame = vw_frame_from_eigen(*eigen, mode, s.descriptor.shape_k());
        point = frame.base;
    } else {
        point = project(mean, mode);
        frame = tangent_frame_at(point);
    }

    LocationEstimate est{kind, point, mean, std::move(eigen), RealMatrix(), frame, s.size()};
    est.anticov = anticovariance_in_frame(s, est.frame, est.ambient_mean, mode);
    return est;
}

RealMatrix sample_anticovariance(const Sample& s, const LocationEstimate& est) {
    return anticovariance_in_frame(s, est.frame, est.ambient_mean, projection_mode(est.kind));
}

OneSampleTest one_sample_statistic(const Sample& s, const AmbientPoint& hypothesized,
                                   LocationKind kind) {
    if (hypothesized.descriptor() != s.descriptor)
        throw DescriptorMismatchError("hypothesized point does not match the sample");
    if (s.size() < 2)
        throw SingularAnticovarianceError("one-sample statistic needs n >= 2");

    const ProjectionMode mode = projection_mode(kind);
    AmbientPoint mean = ambient_mean(s);
    AmbientPoint projected = project(mean, mode);

    // Frame anchored at the hypothesized location; the anticovariance is
    // expressed in the same frame so the standardized coordinates are
    // asymptotically standard normal under H0.
    TangentFrame frame = tangent_frame_at(hypothesized);
    RealMatrix anticov = anticovariance_in_frame(s, frame, mean, mode);

    AmbientPoint diff = projected;
    diff -= hypothesized;
    std::vector<double> tangential = frame.tangential_coordinates(diff);

    std::vector<double> standardized;
    try {
        standardized = solve_spd(anticov, tangential);
    } catch (const SingularMatrixError&) {
        throw SingularAnticovarianceError("sample anticovariance is singular");
    }
    double quad = 0.0;
    for (std::size_t i = 0; i < tangential.size(); ++i) quad += tangential[i] * standardized[i];

    OneSampleTest result;
    result.df = s.descriptor.intrinsic_dim();
    result.statistic = static_cast<double>(s.size()) * std::max(0.0, quad);
    result.pvalue = chi2_sf(result.statistic, static_cast<unsigned>(result.df));
    return result;
}

}  // namespace shapetest
