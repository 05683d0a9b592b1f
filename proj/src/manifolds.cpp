#include "shapetest/manifolds.hpp"

#include <cmath>

namespace shapetest {

EmbeddingDescriptor EmbeddingDescriptor::sphere(std::size_t n) {
    if (n < 2) throw DomainError("sphere descriptor needs N >= 2");
    return EmbeddingDescriptor(ManifoldKind::Sphere, n);
}

EmbeddingDescriptor EmbeddingDescriptor::veronese_whitney(std::size_t k) {
    if (k < 3) throw DomainError("shape descriptor needs k >= 3");
    return EmbeddingDescriptor(ManifoldKind::VeroneseWhitney, k);
}

std::size_t EmbeddingDescriptor::intrinsic_dim() const {
    return kind_ == ManifoldKind::Sphere ? param_ - 1 : 2 * param_ - 4;
}

std::size_t EmbeddingDescriptor::ambient_dim() const {
    return kind_ == ManifoldKind::Sphere ? param_ : (param_ - 1) * (param_ - 1);
}

AmbientPoint AmbientPoint::sphere_vector(std::vector<double> v) {
    AmbientPoint p(EmbeddingDescriptor::sphere(v.size()));
    for (double x : v)
        if (!std::isfinite(x)) throw DomainError("non-finite ambient coordinate");
    p.vec_ = std::move(v);
    return p;
}

AmbientPoint AmbientPoint::hermitian(HermitianMatrix m) {
    AmbientPoint p(EmbeddingDescriptor::veronese_whitney(m.dim() + 1));
    p.mat_ = std::move(m);
    return p;
}

AmbientPoint AmbientPoint::zero(const EmbeddingDescriptor& descriptor) {
    if (descriptor.kind() == ManifoldKind::Sphere)
        return sphere_vector(std::vector<double>(descriptor.sphere_n(), 0.0));
    return hermitian(HermitianMatrix(descriptor.shape_k() - 1));
}

bool AmbientPoint::on_manifold(double tol_scale) const {
    if (descriptor_.kind() == ManifoldKind::Sphere) {
        return std::abs(norm() - 1.0) <= 1e-12 * tol_scale;
    }
    // Rank-one projector: P^2 = P and trace P = 1.
    const std::size_t n = mat_.dim();
    if (std::abs(mat_.trace() - 1.0) > 1e-9 * tol_scale) return false;
    double defect = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex sq(0.0, 0.0);
            for (std::size_t l = 0; l < n; ++l) sq += mat_(i, l) * mat_(l, j);
            defect += std::norm(sq - mat_(i, j));
        }
    return std::sqrt(defect) <= 1e-9 * tol_scale;
}

double AmbientPoint::inner(const AmbientPoint& other) const {
    require_same_descriptor(*this, other);
    if (descriptor_.kind() == ManifoldKind::Sphere) {
        double sum = 0.0;
        for (std::size_t i = 0; i < vec_.size(); ++i) sum += vec_[i] * other.vec_[i];
        return sum;
    }
    return herm_inner(mat_, other.mat_);
}

double AmbientPoint::norm() const {
    if (descriptor_.kind() == ManifoldKind::Sphere) {
        double sum = 0.0;
        for (double x : vec_) sum += x * x;
        return std::sqrt(sum);
    }
    return mat_.frobenius_norm();
}

AmbientPoint& AmbientPoint::operator+=(const AmbientPoint& other) {
    require_same_descriptor(*this, other);
    if (descriptor_.kind() == ManifoldKind::Sphere) {
        for (std::size_t i = 0; i < vec_.size(); ++i) vec_[i] += other.vec_[i];
    } else {
        mat_ += other.mat_;
    }
    return *this;
}

AmbientPoint& AmbientPoint::operator-=(const AmbientPoint& other) {
    require_same_descriptor(*this, other);
    if (descriptor_.kind() == ManifoldKind::Sphere) {
        for (std::size_t i = 0; i < vec_.size(); ++i) vec_[i] -= other.vec_[i];
    } else {
        mat_ -= other.mat_;
    }
    return *this;
}

AmbientPoint& AmbientPoint::operator*=(double scale) {
    if (descriptor_.kind() == ManifoldKind::Sphere) {
        for (double& x : vec_) x *= scale;
    } else {
        mat_ *= scale;
    }
    return *this;
}

std::vector<double> AmbientPoint::flatten() const {
    if (descriptor_.kind() == ManifoldKind::Sphere) return vec_;
    const std::size_t n = mat_.dim();
    std::vector<double> coords;
    coords.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) coords.push_back(mat_(i, i).real());
    const double root2 = std::sqrt(2.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            coords.push_back(root2 * mat_(i, j).real());
            coords.push_back(root2 * mat_(i, j).imag());
        }
    return coords;
}

AmbientPoint AmbientPoint::unflatten(const EmbeddingDescriptor& descriptor,
                                     const std::vector<double>& coords) {
    if (coords.size() != descriptor.ambient_dim())
        throw DimensionMismatchError("coordinate vector has wrong length");
    if (descriptor.kind() == ManifoldKind::Sphere) return sphere_vector(coords);
    const std::size_t n = descriptor.shape_k() - 1;
    HermitianMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, coords[i]);
    const double inv_root2 = 1.0 / std::sqrt(2.0);
    std::size_t pos = n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            m.set(i, j, Complex(coords[pos] * inv_root2, coords[pos + 1] * inv_root2));
            pos += 2;
        }
    return hermitian(std::move(m));
}

void require_same_descriptor(const AmbientPoint& a, const AmbientPoint& b) {
    if (a.descriptor() != b.descriptor())
        throw DescriptorMismatchError("ambient points live on different embeddings");
}

std::vector<double> TangentFrame::tangential_coordinates(const AmbientPoint& v) const {
    std::vector<double> coords(basis.size());
    for (std::size_t a = 0; a < basis.size(); ++a) coords[a] = basis[a].inner(v);
    return coords;
}

double chord_distance_sq(const AmbientPoint& p, const AmbientPoint& q) {
    require_same_descriptor(p, q);
    AmbientPoint diff = p;
    diff -= q;
    double n = diff.norm();
    return n * n;
}

AmbientPoint vw_embed(const std::vector<Complex>& unit_rep) {
    double norm_sq = 0.0;
    for (Complex z : unit_rep) norm_sq += std::norm(z);
    if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-10)
        throw NotNormalizedError("representative is not unit-norm");
    const std::size_t n = unit_rep.size();
    HermitianMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m.set(i, j, unit_rep[i] * std::conj(unit_rep[j]));
    return AmbientPoint::hermitian(std::move(m));
}

AmbientPoint vw_embed(const ShapePoint& z) { return vw_embed(z.rep); }

namespace {

AmbientPoint eigenvector_projector(const EigenDecomposition& eigen, std::size_t index) {
    const std::size_t n = eigen.eigenvalues.size();
    std::vector<Complex> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = eigen.eigenvectors(i, index);
    HermitianMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m.set(i, j, u[i] * std::conj(u[j]));
    return AmbientPoint::hermitian(std::move(m));
}

AmbientPoint project_sphere(const AmbientPoint& y, ProjectionMode mode) {
    double n = y.norm();
    if (n <= 1e-9) throw FocalPointError("zero ambient vector has no unique projection");
    double scale = (mode == ProjectionMode::Nearest ? 1.0 : -1.0) / n;
    AmbientPoint p = y;
    p *= scale;
    return p;
}

AmbientPoint project_vw(const AmbientPoint& y, ProjectionMode mode) {
    EigenDecomposition eigen = hermitian_eig(y.matrix());
    const std::size_t n = eigen.eigenvalues.size();
    if (mode == ProjectionMode::Farthest) {
        if (eigen.gap_at_smallest() < eigen.tie_tolerance())
            throw FocalPointError("smallest eigenvalue is not simple: farthest point not unique");
        return eigenvector_projector(eigen, 0);
    }
    if (eigen.gap_at_largest() < eigen.tie_tolerance())
        throw FocalPointError("largest eigenvalue is not simple: nearest point not unique");
    return eigenvector_projector(eigen, n - 1);
}

}  // namespace

AmbientPoint project(const AmbientPoint& y, ProjectionMode mode) {
    if (y.descriptor().kind() == ManifoldKind::Sphere) return project_sphere(y, mode);
    return project_vw(y, mode);
}

AmbientPoint farthest_projection(const AmbientPoint& y) {
    return project(y, ProjectionMode::Farthest);
}

AmbientPoint nearest_projection(const AmbientPoint& y) {
    return project(y, ProjectionMode::Nearest);
}

namespace {

void project_out(std::vector<double>& w, const std::vector<double>& direction) {
    double dot = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) dot += w[i] * direction[i];
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= dot * direction[i];
}

// Gram-Schmidt completion of the base point from the canonical basis, in
// index order; candidates nearly inside the accepted span are skipped.
TangentFrame sphere_frame(const AmbientPoint& p) {
    const std::size_t n = p.descriptor().sphere_n();
    const std::vector<double>& base = p.vec();
    std::vector<std::vector<double>> basis;
    for (std::size_t c = 0; c < n && basis.size() < n - 1; ++c) {
        std::vector<double> w(n, 0.0);
        w[c] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            project_out(w, base);
            for (const auto& b : basis) project_out(w, b);
        }
        double norm_sq = 0.0;
        for (double x : w) norm_sq += x * x;
        double norm = std::sqrt(norm_sq);
        if (norm < 1e-6) continue;
        for (double& x : w) x /= norm;
        basis.push_back(std::move(w));
    }
    TangentFrame frame{p, {}};
    for (auto& b : basis) frame.basis.push_back(AmbientPoint::sphere_vector(std::move(b)));
    return frame;
}

std::vector<Complex> eigen_column(const EigenDecomposition& eigen, std::size_t j) {
    const std::size_t n = eigen.eigenvalues.size();
    std::vector<Complex> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = eigen.eigenvectors(i, j);
    return u;
}

// Frame matrices (anchor u* + u anchor*)/sqrt(2) and i(anchor u* - u anchor*)/sqrt(2).
TangentFrame vw_frame(const AmbientPoint& base, const std::vector<Complex>& anchor,
                      const std::vector<std::vector<Complex>>& completion) {
    const std::size_t n = anchor.size();
    const double inv_root2 = 1.0 / std::sqrt(2.0);
    TangentFrame frame{base, {}};
    for (const auto& u : completion) {
        HermitianMatrix m(n);
        add_sym_outer_product(m, anchor, u, Complex(inv_root2, 0.0));
        frame.basis.push_back(AmbientPoint::hermitian(std::move(m)));
    }
    for (const auto& u : completion) {
        HermitianMatrix m(n);
        add_sym_outer_product(m, anchor, u, Complex(0.0, inv_root2));
        frame.basis.push_back(AmbientPoint::hermitian(std::move(m)));
    }
    return frame;
}

}  // namespace

TangentFrame tangent_frame_at(const AmbientPoint& p) {
    if (!p.on_manifold()) throw NotOnManifoldError("tangent frame needs an on-manifold point");
    if (p.descriptor().kind() == ManifoldKind::Sphere) return sphere_frame(p);
    // Eigenvalues of a rank-one projector are {0, ..., 0, 1}: the anchor is
    // the last column, the completion spans its orthogonal complement.
    EigenDecomposition eigen = hermitian_eig(p.matrix());
    const std::size_t n = eigen.eigenvalues.size();
    std::vector<Complex> anchor = eigen_column(eigen, n - 1);
    std::vector<std::vector<Complex>> completion;
    for (std::size_t j = 0; j + 1 < n; ++j) completion.push_back(eigen_column(eigen, j));
    return vw_frame(p, anchor, completion);
}

TangentFrame vw_frame_from_eigen(const EigenDecomposition& eigen, ProjectionMode mode,
                                 std::size_t k) {
    const std::size_t n = eigen.eigenvalues.size();
    if (n != k - 1) throw DimensionMismatchError("eigendecomposition does not match k");
    const std::size_t anchor_index = mode == ProjectionMode::Farthest ? 0 : n - 1;
    std::vector<Complex> anchor = eigen_column(eigen, anchor_index);
    std::vector<std::vector<Complex>> completion;
    for (std::size_t j = 0; j < n; ++j)
        if (j != anchor_index) completion.push_back(eigen_column(eigen, j));
    return vw_frame(eigenvector_projector(eigen, anchor_index), anchor, completion);
}

AmbientPoint projection_differential(const AmbientPoint& y, const AmbientPoint& v,
                                     ProjectionMode mode) {
    require_same_descriptor(y, v);
    if (y.descriptor().kind() == ManifoldKind::Sphere) {
        double n = y.norm();
        if (n <= 1e-9) throw FocalPointError("projection differential undefined at the origin");
        std::vector<double> unit(y.vec());
        for (double& x : unit) x /= n;
        double dot = 0.0;
        for (std::size_t i = 0; i < unit.size(); ++i) dot += unit[i] * v.vec()[i];
        double sign = mode == ProjectionMode::Nearest ? 1.0 : -1.0;
        std::vector<double> out(unit.size());
        for (std::size_t i = 0; i < unit.size(); ++i)
            out[i] = sign * (v.vec()[i] - dot * unit[i]) / n;
        return AmbientPoint::sphere_vector(std::move(out));
    }

    EigenDecomposition eigen = hermitian_eig(y.matrix());
    const std::size_t n = eigen.eigenvalues.size();
    const std::size_t anchor_index = mode == ProjectionMode::Farthest ? 0 : n - 1;
    const double anchor_gap = mode == ProjectionMode::Farthest ? eigen.gap_at_smallest()
                                                               : eigen.gap_at_largest();
    if (anchor_gap < eigen.tie_tolerance())
        throw FocalPointError("eigenvalue tie: projection differential undefined");

    std::vector<Complex> anchor = eigen_column(eigen, anchor_index);
    const HermitianMatrix& dv = v.matrix();
    HermitianMatrix out(n);
    for (std::size_t a = 0; a < n; ++a) {
        if (a == anchor_index) continue;
        std::vector<Complex> ua = eigen_column(eigen, a);
        // First-order eigenvector perturbation coefficient.
        Complex coupling(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            Complex row(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j) row += dv(i, j) * anchor[j];
            coupling += std::conj(ua[i]) * row;
        }
        double factor = 1.0 / (eigen.eigenvalues[anchor_index] - eigen.eigenvalues[a]);
        add_sym_outer_product(out, ua, anchor, factor * coupling);
    }
    return AmbientPoint::hermitian(std::move(out));
}

}  // namespace shapetest
