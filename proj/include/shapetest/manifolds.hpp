#pragma once

#include <cstddef>
#include <vector>

#include "shapetest/cxlinalg.hpp"
#include "shapetest/shapes.hpp"

namespace shapetest {

enum class ManifoldKind { Sphere, VeroneseWhitney };

// Identifies one of the two supported embedded manifolds: the unit sphere
// S^{N-1} in R^N, or the projective shape space embedded in the space of
// (k-1) x (k-1) Hermitian matrices as rank-one projectors.
class EmbeddingDescriptor {
  public:
    static EmbeddingDescriptor sphere(std::size_t n);
    static EmbeddingDescriptor veronese_whitney(std::size_t k);

    ManifoldKind kind() const { return kind_; }
    std::size_t sphere_n() const { return param_; }
    std::size_t shape_k() const { return param_; }

    // Dimension of the manifold itself.
    std::size_t intrinsic_dim() const;
    // Real dimension of the ambient Euclidean space: N for the sphere,
    // (k-1)^2 for the Hermitian matrix space.
    std::size_t ambient_dim() const;

    bool operator==(const EmbeddingDescriptor& other) const {
        return kind_ == other.kind_ && param_ == other.param_;
    }
    bool operator!=(const EmbeddingDescriptor& other) const { return !(*this == other); }

  private:
    EmbeddingDescriptor(ManifoldKind kind, std::size_t param) : kind_(kind), param_(param) {}
    ManifoldKind kind_;
    std::size_t param_;
};

// An element of the ambient Euclidean space: a real N-vector for the sphere,
// a Hermitian matrix for the shape embedding. Used both for points on the
// embedded manifold and for raw ambient vectors (means, tangents,
// differences); on_manifold() distinguishes the two roles.
class AmbientPoint {
  public:
    static AmbientPoint sphere_vector(std::vector<double> v);
    static AmbientPoint hermitian(HermitianMatrix m);
    static AmbientPoint zero(const EmbeddingDescriptor& descriptor);

    const EmbeddingDescriptor& descriptor() const { return descriptor_; }
    const std::vector<double>& vec() const { return vec_; }
    const HermitianMatrix& matrix() const { return mat_; }

    bool on_manifold(double tol_scale = 1.0) const;

    double inner(const AmbientPoint& other) const;
    double norm() const;

    AmbientPoint& operator+=(const AmbientPoint& other);
    AmbientPoint& operator-=(const AmbientPoint& other);
    AmbientPoint& operator*=(double scale);
    friend AmbientPoint operator+(AmbientPoint a, const AmbientPoint& b) { return a += b; }
    friend AmbientPoint operator-(AmbientPoint a, const AmbientPoint& b) { return a -= b; }
    friend AmbientPoint operator*(double s, AmbientPoint a) { return a *= s; }

    // Coordinates with respect to a fixed orthonormal basis of the ambient
    // space, so Euclidean inner products of coordinate vectors equal ambient
    // inner products. Sphere: the vector itself. Hermitian: diagonal entries
    // first, then sqrt(2) * (Re, Im) of the upper triangle in row-major
    // order.
    std::vector<double> flatten() const;
    static AmbientPoint unflatten(const EmbeddingDescriptor& descriptor,
                                  const std::vector<double>& coords);

  private:
    explicit AmbientPoint(EmbeddingDescriptor d) : descriptor_(d) {}
    EmbeddingDescriptor descriptor_;
    std::vector<double> vec_;  // sphere payload
    HermitianMatrix mat_;      // Hermitian payload
};

void require_same_descriptor(const AmbientPoint& a, const AmbientPoint& b);

// Orthonormal basis of the tangent space at a point of the embedded manifold.
struct TangentFrame {
    AmbientPoint base;
    std::vector<AmbientPoint> basis;

    // Coordinates of an ambient vector in this frame.
    std::vector<double> tangential_coordinates(const AmbientPoint& v) const;
};

enum class ProjectionMode { Nearest, Farthest };

// Squared Euclidean (Frobenius) distance between two embedded points.
double chord_distance_sq(const AmbientPoint& p, const AmbientPoint& q);

// Rank-one projector z z* of a unit projective representative.
AmbientPoint vw_embed(const ShapePoint& z);
AmbientPoint vw_embed(const std::vector<Complex>& unit_rep);

// Unique farthest point of the embedded manifold from an ambient point:
// -y/|y| on the sphere, the smallest-eigenvalue eigenprojector in the
// Hermitian case. Throws FocalPointError when the extremum is not unique
// (zero vector, or eigenvalue tie at the relevant end of the spectrum).
AmbientPoint farthest_projection(const AmbientPoint& y);
AmbientPoint nearest_projection(const AmbientPoint& y);
AmbientPoint project(const AmbientPoint& y, ProjectionMode mode);

// Orthonormal tangent frame at an on-manifold point. Sphere: deterministic
// Gram-Schmidt completion of the canonical basis. Hermitian: the rank-one
// cross matrices (anchor u_a* + u_a anchor*)/sqrt(2) and their imaginary
// counterparts, with the completion taken from the point's own
// eigendecomposition; symmetric parts first, then antisymmetric, each in
// ascending completion order.
TangentFrame tangent_frame_at(const AmbientPoint& p);

// Same frame construction anchored on an explicit eigendecomposition of an
// ambient matrix: anchor is the smallest eigenvector (Farthest) or the
// largest (Nearest), and the completion is the remaining eigenvectors in
// ascending order.
TangentFrame vw_frame_from_eigen(const EigenDecomposition& eigen, ProjectionMode mode,
                                 std::size_t k);

// Differential of the projection map at ambient point y applied to ambient
// vector v. First-order eigenprojector perturbation in the Hermitian case:
// sum over non-anchor eigenvectors of (lambda_anchor - lambda_a)^{-1} times
// the cross terms, which is negative for the farthest projection.
AmbientPoint projection_differential(const AmbientPoint& y, const AmbientPoint& v,
                                     ProjectionMode mode);

}  // namespace shapetest
