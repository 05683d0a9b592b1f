#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "shapetest/errors.hpp"

namespace shapetest {

using Complex = std::complex<double>;

// Dense row-major complex matrix. Entries are required to be finite.
class ComplexMatrix {
  public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n);
    // Validating constructor: rejects non-finite entries and size mismatches.
    static ComplexMatrix from_entries(std::size_t rows, std::size_t cols,
                                      std::vector<Complex> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }

    std::vector<Complex> column(std::size_t j) const;
    double frobenius_norm() const;

  private:
    std::size_t rows_, cols_;
    std::vector<Complex> entries_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);

// Self-adjoint complex matrix. The upper triangle is authoritative: set()
// mirrors the conjugate into the lower triangle and drops imaginary parts on
// the diagonal, so H == H* holds exactly as stored.
class HermitianMatrix {
  public:
    HermitianMatrix() : dim_(0) {}
    explicit HermitianMatrix(std::size_t dim)
        : dim_(dim), entries_(dim * dim, Complex(0.0, 0.0)) {}

    static HermitianMatrix identity(std::size_t n);
    // Validates that m is self-adjoint within tol * ||m||_F, then symmetrizes.
    static HermitianMatrix from_complex(const ComplexMatrix& m, double tol = 1e-12);

    std::size_t dim() const { return dim_; }

    const Complex& operator()(std::size_t i, std::size_t j) const {
        return entries_[i * dim_ + j];
    }
    void set(std::size_t i, std::size_t j, Complex value);

    double frobenius_norm() const;
    double trace() const;

    HermitianMatrix& operator+=(const HermitianMatrix& other);
    HermitianMatrix& operator-=(const HermitianMatrix& other);
    HermitianMatrix& operator*=(double scale);

    friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) {
        return a += b;
    }
    friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) {
        return a -= b;
    }
    friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

  private:
    std::size_t dim_;
    std::vector<Complex> entries_;
};

// Rank-one update target += scale * v v* for a complex vector v.
void add_outer_product(HermitianMatrix& target, const std::vector<Complex>& v, double scale);
// target += scale * (a b* + b a*), the Hermitian part of a rank-two cross term.
void add_sym_outer_product(HermitianMatrix& target, const std::vector<Complex>& a,
                           const std::vector<Complex>& b, Complex scale);
// Real inner product Re tr(A B) on the Hermitian space.
double herm_inner(const HermitianMatrix& a, const HermitianMatrix& b);

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // nondecreasing
    ComplexMatrix eigenvectors;       // unit-norm columns aligned with eigenvalues
    double min_gap = 0.0;             // smallest adjacent eigenvalue difference
    bool phase_canonical = false;     // largest-magnitude entry real nonnegative

    // Gap at the chosen end of the spectrum; this is what projection
    // uniqueness depends on, not min_gap over the whole spectrum.
    double gap_at_smallest() const;
    double gap_at_largest() const;
    // Ties below this threshold make the corresponding projection undefined.
    double tie_tolerance() const;
};

// Cyclic Jacobi eigendecomposition of a Hermitian matrix. Deterministic for a
// fixed input; eigenvector phases are canonicalized (largest-magnitude entry
// real nonnegative, ties broken by lowest index). Throws NonConvergenceError
// if the off-diagonal norm does not fall below 1e-12 * ||H|| within the sweep
// budget.
EigenDecomposition hermitian_eig(const HermitianMatrix& h);

// Rotates each column so its largest-magnitude entry is real nonnegative.
// Idempotent; hermitian_eig applies this to its eigenvector columns.
void canonicalize_phases(ComplexMatrix& vectors);

// Dense row-major real matrix.
class RealMatrix {
  public:
    RealMatrix() : rows_(0), cols_(0) {}
    RealMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols),
                                                     entries_(rows * cols, 0.0) {}

    static RealMatrix identity(std::size_t n);
    static RealMatrix from_entries(std::size_t rows, std::size_t cols,
                                   std::vector<double> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }

    const std::vector<double>& entries() const { return entries_; }

  private:
    std::size_t rows_, cols_;
    std::vector<double> entries_;
};

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);
RealMatrix transpose(const RealMatrix& a);
std::vector<double> matvec(const RealMatrix& a, const std::vector<double>& v);

struct SymmetricEigen {
    std::vector<double> eigenvalues;  // ascending
    RealMatrix eigenvectors;          // orthonormal columns
};

// Eigendecomposition of a real symmetric matrix (complex Jacobi specialised
// to real input; rotations stay real throughout).
SymmetricEigen symmetric_eig(const RealMatrix& s);

// (S + ridge I)^{-1/2} for symmetric S. Throws SingularMatrixError when the
// smallest eigenvalue of S + ridge I is <= 1e-13 times the largest.
RealMatrix sym_inv_sqrt(const RealMatrix& s, double ridge);

// Solves S x = v for symmetric positive definite S, with the same singularity
// threshold as sym_inv_sqrt.
std::vector<double> solve_spd(const RealMatrix& s, const std::vector<double>& v);

struct PseudoInverseResult {
    RealMatrix inverse;
    std::size_t rank = 0;
    bool truncated = false;  // any eigenvalue fell below the cutoff
};

// Moore-Penrose inverse of a symmetric PSD matrix; eigenvalues below
// 1e-10 * (largest) are truncated and counted out of the rank.
PseudoInverseResult sym_pseudo_inverse(const RealMatrix& s);

// Upper tail P(X > x) of the chi-square distribution with df degrees of
// freedom, via the regularized incomplete gamma function.
double chi2_sf(double x, unsigned df);

// Inverse of the lower tail: chi2_sf(result, df) == 1 - p. Monotone
// root-finding (bisection) on chi2_sf.
double chi2_quantile(double p, unsigned df);

}  // namespace shapetest
