#include "shapetest/shapes.hpp"

#include <cmath>

namespace shapetest {

RealMatrix helmert_submatrix(std::size_t k) {
    if (k < 2) throw DomainError("Helmert submatrix needs k >= 2");
    RealMatrix h(k - 1, k);
    for (std::size_t j = 1; j < k; ++j) {
        double scale = 1.0 / std::sqrt(static_cast<double>(j) * static_cast<double>(j + 1));
        for (std::size_t i = 0; i < j; ++i) h(j - 1, i) = scale;
        h(j - 1, j) = -static_cast<double>(j) * scale;
    }
    return h;
}

std::vector<Complex> helmert_reduce(const std::vector<Complex>& centered) {
    const std::size_t k = centered.size();
    RealMatrix h = helmert_submatrix(k);
    std::vector<Complex> out(k - 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < k - 1; ++i) {
        Complex sum(0.0, 0.0);
        for (std::size_t j = 0; j < k; ++j) sum += h(i, j) * centered[j];
        out[i] = sum;
    }
    return out;
}

std::vector<Complex> helmert_expand(const std::vector<Complex>& reduced) {
    const std::size_t k = reduced.size() + 1;
    RealMatrix h = helmert_submatrix(k);
    std::vector<Complex> out(k, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < k; ++j) {
        Complex sum(0.0, 0.0);
        for (std::size_t i = 0; i < k - 1; ++i) sum += h(i, j) * reduced[i];
        out[j] = sum;
    }
    return out;
}

ShapePoint to_shape(const KAdConfig& config) {
    const std::size_t k = config.k();
    if (k < 3) throw DomainError("a k-ad needs at least three landmarks");
    for (Complex z : config.landmarks)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw DomainError("non-finite landmark coordinate");

    Complex centroid(0.0, 0.0);
    for (Complex z : config.landmarks) centroid += z;
    centroid /= static_cast<double>(k);

    std::vector<Complex> centered(k);
    double spread = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        centered[j] = config.landmarks[j] - centroid;
        spread = std::max(spread, std::abs(config.landmarks[j]));
    }

    std::vector<Complex> reduced = helmert_reduce(centered);
    double norm_sq = 0.0;
    for (Complex w : reduced) norm_sq += std::norm(w);
    double norm = std::sqrt(norm_sq);
    if (norm <= 1e-12 * std::max(1e-300, spread))
        throw DegenerateKAdError("all landmarks coincide: k-ad has no shape");

    ShapePoint shape;
    shape.k = k;
    shape.rep.resize(k - 1);
    for (std::size_t i = 0; i < k - 1; ++i) shape.rep[i] = reduced[i] / norm;
    if (!config.id.empty()) shape.source_id = config.id;
    return shape;
}

ShapePoint shape_from_representative(std::vector<Complex> rep,
                                     std::optional<std::string> source_id) {
    if (rep.size() < 2) throw DomainError("projective representative needs dimension >= 2");
    double norm_sq = 0.0;
    for (Complex w : rep) norm_sq += std::norm(w);
    double norm = std::sqrt(norm_sq);
    if (norm == 0.0) throw NotNormalizedError("zero vector is not a projective point");
    for (Complex& w : rep) w /= norm;
    ShapePoint shape;
    shape.k = rep.size() + 1;
    shape.rep = std::move(rep);
    shape.source_id = std::move(source_id);
    return shape;
}

double shape_distance(const ShapePoint& a, const ShapePoint& b) {
    if (a.k != b.k) throw DimensionMismatchError("shapes have different landmark counts");
    Complex dot(0.0, 0.0);
    for (std::size_t i = 0; i < a.rep.size(); ++i) dot += std::conj(a.rep[i]) * b.rep[i];
    double d_sq = 2.0 - 2.0 * std::norm(dot);
    return std::sqrt(std::max(0.0, d_sq));
}

}  // namespace shapetest
