#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shapetest/cxlinalg.hpp"

namespace shapetest {

// One labeled planar configuration of k landmarks, encoded as complex numbers
// z_j = x_j + i y_j. Landmarks are labeled: their order carries meaning.
struct KAdConfig {
    std::string id;
    std::vector<Complex> landmarks;

    std::size_t k() const { return landmarks.size(); }
};

// A similarity shape: a point of the projective space of centered unit-norm
// configurations. rep is a unit-norm complex (k-1)-vector obtained from a
// centered k-ad by the fixed Helmert reduction; its overall phase is
// arbitrary and cancels in the rank-one embedding.
struct ShapePoint {
    std::size_t k = 0;
    std::vector<Complex> rep;
    std::optional<std::string> source_id;
};

// The (k-1) x k Helmert submatrix: orthonormal rows, each orthogonal to the
// all-ones vector. Row j has j equal positive entries followed by one
// negative balancing entry and zeros.
RealMatrix helmert_submatrix(std::size_t k);

// Centers the k-ad, reduces it through the Helmert submatrix, and normalizes.
// Throws DegenerateKAdError when all landmarks coincide.
ShapePoint to_shape(const KAdConfig& config);

// Applies the Helmert reduction to a complex k-vector (used by to_shape and
// by icon reconstruction through its transpose).
std::vector<Complex> helmert_reduce(const std::vector<Complex>& centered);

// Maps a reduced (k-1)-vector back to a sum-zero k-vector of landmarks.
std::vector<Complex> helmert_expand(const std::vector<Complex>& reduced);

// Chord distance sqrt(2 - 2 |<a, b>|^2) between the rank-one embeddings of
// two shapes; zero exactly when the shapes agree as projective points.
double shape_distance(const ShapePoint& a, const ShapePoint& b);

// Builds a ShapePoint directly from a projective representative (normalizes;
// used by samplers and tests). Throws NotNormalizedError on zero input.
ShapePoint shape_from_representative(std::vector<Complex> rep,
                                     std::optional<std::string> source_id = std::nullopt);

}  // namespace shapetest
