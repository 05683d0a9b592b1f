#include "shapetest/twosample.hpp"

#include <cmath>

namespace shapetest {

namespace {

AmbientPoint raw_ambient_mean(const Sample& s) {
    AmbientPoint mean = AmbientPoint::zero(s.descriptor);
    for (const AmbientPoint& x : s.points) mean += x;
    mean *= 1.0 / static_cast<double>(s.size());
    return mean;
}

std::vector<double> row_means(const RealMatrix& m) {
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) sum += m(i, j);
        out[i] = sum / static_cast<double>(m.cols());
    }
    return out;
}

// Column covariance with divisor n: (1/n) M M' - mean mean'.
RealMatrix column_covariance(const RealMatrix& m, const std::vector<double>& mean) {
    RealMatrix cov(m.rows(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.rows(); ++j) {
            double sum = 0.0;
            for (std::size_t c = 0; c < m.cols(); ++c) sum += m(i, c) * m(j, c);
            double value = sum / static_cast<double>(m.cols()) - mean[i] * mean[j];
            cov(i, j) = value;
            cov(j, i) = value;
        }
    return cov;
}

std::size_t numerical_rank(const RealMatrix& sym) {
    return sym_pseudo_inverse(sym).rank;
}

struct QuadraticForm {
    double value = 0.0;
    std::size_t df = 0;
    bool pseudo_inverse_used = false;
};

// delta' combined^{-1} delta, with the policy deciding how rank deficiency is
// handled. per_group_ranks are checked first: the asymptotics assume each
// group covariance is nonsingular.
QuadraticForm standardized_quadratic(const RealMatrix& combined, const std::vector<double>& delta,
                                     const std::array<std::size_t, 2>& per_group_ranks,
                                     SolvePolicy policy) {
    const std::size_t d = delta.size();
    QuadraticForm out;
    out.df = d;
    const bool group_deficient = per_group_ranks[0] < d || per_group_ranks[1] < d;
    if (policy == SolvePolicy::Strict) {
        if (group_deficient)
            throw SingularCovarianceError(
                "per-group covariance is rank deficient; rerun with --pseudo-inverse");
        std::vector<double> solved;
        try {
            solved = solve_spd(combined, delta);
        } catch (const SingularMatrixError&) {
            throw SingularCovarianceError(
                "combined covariance is singular; rerun with --pseudo-inverse");
        }
        for (std::size_t i = 0; i < d; ++i) out.value += delta[i] * solved[i];
        return out;
    }
    PseudoInverseResult pinv = sym_pseudo_inverse(combined);
    std::vector<double> solved = matvec(pinv.inverse, delta);
    for (std::size_t i = 0; i < d; ++i) out.value += delta[i] * solved[i];
    out.df = pinv.rank;
    out.pseudo_inverse_used = group_deficient || pinv.truncated;
    if (out.df == 0) throw SingularCovarianceError("covariance has numerical rank zero");
    return out;
}

TwoSampleReport finish_report(TwoSampleReport report, const QuadraticForm& quad, double alpha) {
    report.statistic = std::max(0.0, quad.value);
    report.df = quad.df;
    report.pseudo_inverse_used = quad.pseudo_inverse_used;
    report.pvalue = chi2_sf(report.statistic, static_cast<unsigned>(report.df));
    report.alpha = alpha;
    report.reject = report.pvalue < alpha;
    return report;
}

}  // namespace

PooledEstimate pooled_estimate(const Sample& a, const Sample& b, LocationKind kind,
                               PoolingRule rule) {
    if (a.descriptor != b.descriptor)
        throw DescriptorMismatchError("samples live on different embeddings");
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    const double wa = n / (n + m), wb = m / (n + m);

    const ProjectionMode mode = projection_mode(kind);
    AmbientPoint mean_a = raw_ambient_mean(a);
    AmbientPoint mean_b = raw_ambient_mean(b);

    AmbientPoint pooled_ambient = AmbientPoint::zero(a.descriptor);
    if (rule == PoolingRule::AmbientAverage) {
        pooled_ambient = wa * mean_a + wb * mean_b;
    } else {
        pooled_ambient = wa * project(mean_a, mode) + wb * project(mean_b, mode);
    }

    PooledEstimate pooled{pooled_ambient, AmbientPoint::zero(a.descriptor), std::nullopt,
                          {wa, wb}, rule, kind};
    if (a.descriptor.kind() == ManifoldKind::VeroneseWhitney) {
        EigenDecomposition eigen = hermitian_eig(pooled_ambient.matrix());
        const double gap = mode == ProjectionMode::Farthest ? eigen.gap_at_smallest()
                                                            : eigen.gap_at_largest();
        if (gap < eigen.tie_tolerance())
            throw FocalPointError("pooled ambient mean is focal for the requested location");
        pooled.point = vw_frame_from_eigen(eigen, mode, a.descriptor.shape_k()).base;
        pooled.eigen = std::move(eigen);
    } else {
        pooled.point = project(pooled_ambient, mode);
    }
    return pooled;
}

std::pair<CoordinateMatrix, CoordinateMatrix> coordinate_matrices(const Sample& a,
                                                                  const Sample& b,
                                                                  const PooledEstimate& pooled) {
    if (a.descriptor.kind() != ManifoldKind::VeroneseWhitney)
        throw UnsupportedDescriptorError("coordinate matrices are shape-embedding specific");
    if (!pooled.eigen) throw DomainError("pooled estimate carries no eigendecomposition");

    const EigenDecomposition& eigen = *pooled.eigen;
    const std::size_t dim = eigen.eigenvalues.size();  // k - 1
    const std::size_t k = dim + 1;
    const std::size_t anchor_index =
        projection_mode(pooled.kind) == ProjectionMode::Farthest ? 0 : dim - 1;

    std::vector<Complex> anchor(dim);
    for (std::size_t i = 0; i < dim; ++i) anchor[i] = eigen.eigenvectors(i, anchor_index);
    std::vector<std::vector<Complex>> completion;
    for (std::size_t j = 0; j < dim; ++j) {
        if (j == anchor_index) continue;
        std::vector<Complex> u(dim);
        for (std::size_t i = 0; i < dim; ++i) u[i] = eigen.eigenvectors(i, j);
        completion.push_back(std::move(u));
    }

    auto fill = [&](const Sample& s) {
        CoordinateMatrix cm{RealMatrix(2 * k - 4, s.size()), eigen.eigenvectors};
        for (std::size_t col = 0; col < s.size(); ++col) {
            const HermitianMatrix& x = s.points[col].matrix();
            std::vector<Complex> x_anchor(dim, Complex(0.0, 0.0));
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) x_anchor[i] += x(i, j) * anchor[j];
            for (std::size_t c = 0; c < completion.size(); ++c) {
                Complex coupling(0.0, 0.0);
                for (std::size_t i = 0; i < dim; ++i)
                    coupling += std::conj(completion[c][i]) * x_anchor[i];
                cm.values(c, col) = coupling.real();
                cm.values(c + (k - 2), col) = coupling.imag();
            }
        }
        return cm;
    };
    return {fill(a), fill(b)};
}

TwoSampleReport vw_two_sample_from_pooled(const Sample& a, const Sample& b,
                                          const PooledEstimate& pooled, double alpha,
                                          SolvePolicy policy) {
    auto [t, s] = coordinate_matrices(a, b, pooled);
    std::vector<double> t_bar = row_means(t.values);
    std::vector<double> s_bar = row_means(s.values);
    RealMatrix sigma1 = column_covariance(t.values, t_bar);
    RealMatrix sigma2 = column_covariance(s.values, s_bar);

    const std::size_t d = t_bar.size();
    RealMatrix combined(d, d);
    const double inv_n = 1.0 / static_cast<double>(a.size());
    const double inv_m = 1.0 / static_cast<double>(b.size());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            combined(i, j) = inv_n * sigma1(i, j) + inv_m * sigma2(i, j);

    std::vector<double> delta(d);
    for (std::size_t i = 0; i < d; ++i) delta[i] = t_bar[i] - s_bar[i];

    QuadraticForm quad = standardized_quadratic(
        combined, delta, {numerical_rank(sigma1), numerical_rank(sigma2)}, policy);

    TwoSampleReport report{0.0,
                           0,
                           1.0,
                           alpha,
                           false,
                           pooled.kind,
                           pooled.point,
                           extrinsic_estimate(a, pooled.kind),
                           extrinsic_estimate(b, pooled.kind),
                           TestMethod::VWCoordinates,
                           pooled.rule,
                           false};
    return finish_report(std::move(report), quad, alpha);
}

TwoSampleReport generic_two_sample_from_pooled(const Sample& a, const Sample& b,
                                               const PooledEstimate& pooled, double alpha,
                                               SolvePolicy policy) {
    const ProjectionMode mode = projection_mode(pooled.kind);
    LocationEstimate est_a = extrinsic_estimate(a, pooled.kind);
    LocationEstimate est_b = extrinsic_estimate(b, pooled.kind);

    // Frame at the pooled point; group covariances are pushed through the
    // projection differential at the pooled raw ambient mean, the common
    // plug-in for the population mean under the null. The pooling rule only
    // decides which average is projected for the pooled point itself.
    TangentFrame frame = pooled.eigen
                             ? vw_frame_from_eigen(*pooled.eigen, mode,
                                                   a.descriptor.shape_k())
                             : tangent_frame_at(pooled.point);
    AmbientPoint raw_pooled =
        pooled.weights[0] * est_a.ambient_mean + pooled.weights[1] * est_b.ambient_mean;

    const std::size_t d = frame.basis.size();
    const std::size_t ambient_dim = a.descriptor.ambient_dim();
    RealMatrix b_rows(d, ambient_dim);
    for (std::size_t r = 0; r < d; ++r) {
        AmbientPoint image = projection_differential(raw_pooled, frame.basis[r], mode);
        std::vector<double> coords = image.flatten();
        for (std::size_t j = 0; j < ambient_dim; ++j) b_rows(r, j) = coords[j];
    }

    auto pushed_covariance = [&](const Sample& s) {
        const std::size_t n = s.size();
        std::vector<std::vector<double>> coords;
        coords.reserve(n);
        for (const AmbientPoint& x : s.points) coords.push_back(x.flatten());
        std::vector<double> mean(ambient_dim, 0.0);
        for (const auto& c : coords)
            for (std::size_t i = 0; i < ambient_dim; ++i) mean[i] += c[i];
        for (double& x : mean) x /= static_cast<double>(n);
        // Project each centered observation once: cov of B rows applied to
        // the ambient covariance equals the covariance of the projected
        // coordinates.
        RealMatrix pushed(d, n);
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t r = 0; r < d; ++r) {
                double sum = 0.0;
                for (std::size_t i = 0; i < ambient_dim; ++i)
                    sum += b_rows(r, i) * (coords[c][i] - mean[i]);
                pushed(r, c) = sum;
            }
        RealMatrix cov(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) {
                double sum = 0.0;
                for (std::size_t c = 0; c < n; ++c) sum += pushed(i, c) * pushed(j, c);
                cov(i, j) = sum / static_cast<double>(n);
                cov(j, i) = cov(i, j);
            }
        return cov;
    };

    RealMatrix c1 = pushed_covariance(a);
    RealMatrix c2 = pushed_covariance(b);
    RealMatrix combined(d, d);
    const double inv_n = 1.0 / static_cast<double>(a.size());
    const double inv_m = 1.0 / static_cast<double>(b.size());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            combined(i, j) = inv_n * c1(i, j) + inv_m * c2(i, j);

    AmbientPoint diff = est_a.point;
    diff -= est_b.point;
    std::vector<double> delta = frame.tangential_coordinates(diff);

    QuadraticForm quad = standardized_quadratic(
        combined, delta, {numerical_rank(c1), numerical_rank(c2)}, policy);

    TwoSampleReport report{0.0,
                           0,
                           1.0,
                           alpha,
                           false,
                           pooled.kind,
                           pooled.point,
                           std::move(est_a),
                           std::move(est_b),
                           TestMethod::GenericTangent,
                           pooled.rule,
                           false};
    return finish_report(std::move(report), quad, alpha);
}

TwoSampleReport vw_two_sample_statistic(const Sample& a, const Sample& b, LocationKind kind,
                                        double alpha, SolvePolicy policy, PoolingRule pooling) {
    if (a.descriptor.kind() != ManifoldKind::VeroneseWhitney)
        throw UnsupportedDescriptorError("the coordinate test is shape-embedding specific");
    if (a.size() < 2 || b.size() < 2) throw DomainError("two-sample test needs n, m >= 2");
    PooledEstimate pooled = pooled_estimate(a, b, kind, pooling);
    return vw_two_sample_from_pooled(a, b, pooled, alpha, policy);
}

TwoSampleReport generic_two_sample_statistic(const Sample& a, const Sample& b, LocationKind kind,
                                             double alpha, SolvePolicy policy,
                                             PoolingRule pooling) {
    if (a.size() < 2 || b.size() < 2) throw DomainError("two-sample test needs n, m >= 2");
    PooledEstimate pooled = pooled_estimate(a, b, kind, pooling);
    return generic_two_sample_from_pooled(a, b, pooled, alpha, policy);
}

}  // namespace shapetest
