#include "shapetest/cxlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace shapetest {

namespace {

bool is_finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

double abs2(Complex c) { return c.real() * c.real() + c.imag() * c.imag(); }

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_entries(std::size_t rows, std::size_t cols,
                                          std::vector<Complex> entries) {
    if (entries.size() != rows * cols)
        throw DimensionMismatchError("entry count does not match rows * cols");
    for (Complex c : entries)
        if (!is_finite(c)) throw DomainError("non-finite matrix entry");
    ComplexMatrix m(rows, cols);
    m.entries_ = std::move(entries);
    return m;
}

std::vector<Complex> ComplexMatrix::column(std::size_t j) const {
    std::vector<Complex> col(rows_);
    for (std::size_t i = 0; i < rows_; ++i) col[i] = (*this)(i, j);
    return col;
}

double ComplexMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (Complex c : entries_) sum += abs2(c);
    return std::sqrt(sum);
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatchError("complex matmul shape mismatch");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Complex aik = a(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
    HermitianMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1.0;
    return m;
}

HermitianMatrix HermitianMatrix::from_complex(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) throw DimensionMismatchError("Hermitian matrix must be square");
    const std::size_t n = m.rows();
    double defect = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) defect += abs2(m(i, j) - std::conj(m(j, i)));
    double scale = m.frobenius_norm();
    if (std::sqrt(defect) > tol * std::max(1.0, scale))
        throw DomainError("matrix is not self-adjoint");
    HermitianMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            h.set(i, j, v);
        }
    }
    return h;
}

void HermitianMatrix::set(std::size_t i, std::size_t j, Complex value) {
    if (!is_finite(value)) throw DomainError("non-finite matrix entry");
    if (i == j) {
        entries_[i * dim_ + j] = Complex(value.real(), 0.0);
    } else {
        entries_[i * dim_ + j] = value;
        entries_[j * dim_ + i] = std::conj(value);
    }
}

double HermitianMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (Complex c : entries_) sum += abs2(c);
    return std::sqrt(sum);
}

double HermitianMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += entries_[i * dim_ + i].real();
    return t;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
    if (dim_ != other.dim_) throw DimensionMismatchError("Hermitian sum shape mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
    if (dim_ != other.dim_) throw DimensionMismatchError("Hermitian sum shape mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double scale) {
    for (Complex& c : entries_) c *= scale;
    return *this;
}

void add_outer_product(HermitianMatrix& target, const std::vector<Complex>& v, double scale) {
    const std::size_t n = target.dim();
    if (v.size() != n) throw DimensionMismatchError("outer product shape mismatch");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            target.set(i, j, target(i, j) + scale * v[i] * std::conj(v[j]));
}

void add_sym_outer_product(HermitianMatrix& target, const std::vector<Complex>& a,
                           const std::vector<Complex>& b, Complex scale) {
    const std::size_t n = target.dim();
    if (a.size() != n || b.size() != n)
        throw DimensionMismatchError("outer product shape mismatch");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Complex v = scale * a[i] * std::conj(b[j]) + std::conj(scale) * b[i] * std::conj(a[j]);
            target.set(i, j, target(i, j) + v);
        }
}

double herm_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatchError("inner product shape mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            Complex prod = a(i, j) * b(j, i);
            sum += prod.real();
        }
    return sum;
}

double EigenDecomposition::gap_at_smallest() const {
    if (eigenvalues.size() < 2) return std::numeric_limits<double>::infinity();
    return eigenvalues[1] - eigenvalues[0];
}

double EigenDecomposition::gap_at_largest() const {
    const std::size_t n = eigenvalues.size();
    if (n < 2) return std::numeric_limits<double>::infinity();
    return eigenvalues[n - 1] - eigenvalues[n - 2];
}

double EigenDecomposition::tie_tolerance() const {
    double radius = 0.0;
    for (double l : eigenvalues) radius = std::max(radius, std::abs(l));
    return 1e-9 * std::max(1.0, radius);
}

void canonicalize_phases(ComplexMatrix& vectors) {
    const std::size_t n = vectors.rows();
    for (std::size_t j = 0; j < vectors.cols(); ++j) {
        // First index wins magnitude ties.
        std::size_t pivot = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            double mag = abs2(vectors(i, j));
            if (mag > best) {
                best = mag;
                pivot = i;
            }
        }
        Complex p = vectors(pivot, j);
        double mag = std::abs(p);
        if (mag == 0.0) continue;
        Complex phase = std::conj(p) / mag;
        for (std::size_t i = 0; i < n; ++i) vectors(i, j) *= phase;
        vectors(pivot, j) = Complex(std::abs(vectors(pivot, j).real()), 0.0);
    }
}

EigenDecomposition hermitian_eig(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    if (n == 0) throw DimensionMismatchError("empty matrix");

    // Working copies: full dense storage, updated in place.
    std::vector<Complex> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = h(i, j);
    std::vector<Complex> v(n * n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    const double norm = h.frobenius_norm();
    const double target = 1e-12 * norm;
    constexpr int kMaxSweeps = 64;

    bool converged = norm == 0.0 || n == 1;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                Complex apq = a[p * n + q];
                double mag = std::abs(apq);
                if (mag == 0.0) continue;
                double app = a[p * n + p].real();
                double aqq = a[q * n + q].real();
                // Unitary 2x2 rotation [[c, s], [-conj(s), c]] with s = t*c*e^{i phi},
                // phi = arg(apq), chosen to annihilate the (p,q) entry.
                double phi_re = apq.real() / mag, phi_im = apq.imag() / mag;
                Complex phase(phi_re, phi_im);
                double tau = (aqq - app) / (2.0 * mag);
                double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                Complex s = t * c * phase;
                Complex sc = std::conj(s);

                // Column update A <- A U.
                for (std::size_t r = 0; r < n; ++r) {
                    Complex arp = a[r * n + p], arq = a[r * n + q];
                    a[r * n + p] = c * arp - sc * arq;
                    a[r * n + q] = s * arp + c * arq;
                }
                // Row update A <- U* A.
                for (std::size_t col = 0; col < n; ++col) {
                    Complex apc = a[p * n + col], aqc = a[q * n + col];
                    a[p * n + col] = c * apc - s * aqc;
                    a[q * n + col] = sc * apc + c * aqc;
                }
                // Keep the pivot pair exactly Hermitian against rounding drift.
                a[p * n + q] = Complex(0.0, 0.0);
                a[q * n + p] = Complex(0.0, 0.0);
                a[p * n + p] = Complex(a[p * n + p].real(), 0.0);
                a[q * n + q] = Complex(a[q * n + q].real(), 0.0);
                // Accumulate eigenvectors V <- V U.
                for (std::size_t r = 0; r < n; ++r) {
                    Complex vrp = v[r * n + p], vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - sc * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) off += abs2(a[i * n + j]);
        converged = std::sqrt(off) <= target;
    }
    if (!converged)
        throw NonConvergenceError("Jacobi sweeps did not reduce the off-diagonal norm");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a[x * n + x].real() < a[y * n + y].real();
    });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a[order[j] * n + order[j]].real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v[i * n + order[j]];
    }
    canonicalize_phases(out.eigenvectors);
    out.phase_canonical = true;
    out.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < n; ++j)
        out.min_gap = std::min(out.min_gap, out.eigenvalues[j + 1] - out.eigenvalues[j]);
    if (n == 1) out.min_gap = std::numeric_limits<double>::infinity();
    return out;
}

RealMatrix RealMatrix::identity(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

RealMatrix RealMatrix::from_entries(std::size_t rows, std::size_t cols,
                                    std::vector<double> entries) {
    if (entries.size() != rows * cols)
        throw DimensionMismatchError("entry count does not match rows * cols");
    for (double x : entries)
        if (!std::isfinite(x)) throw DomainError("non-finite matrix entry");
    RealMatrix m(rows, cols);
    m.entries_ = std::move(entries);
    return m;
}

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatchError("real matmul shape mismatch");
    RealMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

RealMatrix transpose(const RealMatrix& a) {
    RealMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

std::vector<double> matvec(const RealMatrix& a, const std::vector<double>& v) {
    if (a.cols() != v.size()) throw DimensionMismatchError("matvec shape mismatch");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) sum += a(i, j) * v[j];
        out[i] = sum;
    }
    return out;
}

SymmetricEigen symmetric_eig(const RealMatrix& s) {
    if (s.rows() != s.cols()) throw DimensionMismatchError("symmetric_eig needs a square matrix");
    const std::size_t n = s.rows();
    HermitianMatrix h(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            h.set(i, j, Complex(0.5 * (s(i, j) + s(j, i)), 0.0));
    EigenDecomposition eig = hermitian_eig(h);
    SymmetricEigen out;
    out.eigenvalues = eig.eigenvalues;
    out.eigenvectors = RealMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.eigenvectors(i, j) = eig.eigenvectors(i, j).real();
    return out;
}

namespace {

// Shared spectral helper: f applied to the eigenvalues of a symmetric matrix.
template <typename F>
RealMatrix symmetric_spectral_map(const SymmetricEigen& eig, F&& f) {
    const std::size_t n = eig.eigenvalues.size();
    RealMatrix out(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        double fa = f(eig.eigenvalues[a]);
        for (std::size_t i = 0; i < n; ++i) {
            double scaled = fa * eig.eigenvectors(i, a);
            if (scaled == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += scaled * eig.eigenvectors(j, a);
        }
    }
    return out;
}

void check_spd_spectrum(const SymmetricEigen& eig) {
    double largest = 0.0;
    for (double l : eig.eigenvalues) largest = std::max(largest, l);
    double smallest = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    if (smallest <= 1e-13 * largest || largest == 0.0)
        throw SingularMatrixError("matrix is numerically singular");
}

}  // namespace

RealMatrix sym_inv_sqrt(const RealMatrix& s, double ridge) {
    if (s.rows() != s.cols()) throw DimensionMismatchError("sym_inv_sqrt needs a square matrix");
    if (ridge < 0.0) throw DomainError("ridge must be nonnegative");
    RealMatrix shifted = s;
    for (std::size_t i = 0; i < s.rows(); ++i) shifted(i, i) += ridge;
    SymmetricEigen eig = symmetric_eig(shifted);
    check_spd_spectrum(eig);
    return symmetric_spectral_map(eig, [](double l) { return 1.0 / std::sqrt(l); });
}

std::vector<double> solve_spd(const RealMatrix& s, const std::vector<double>& v) {
    if (s.rows() != s.cols() || s.rows() != v.size())
        throw DimensionMismatchError("solve_spd shape mismatch");
    SymmetricEigen eig = symmetric_eig(s);
    check_spd_spectrum(eig);
    const std::size_t n = v.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += eig.eigenvectors(i, a) * v[i];
        proj /= eig.eigenvalues[a];
        for (std::size_t i = 0; i < n; ++i) out[i] += proj * eig.eigenvectors(i, a);
    }
    return out;
}

PseudoInverseResult sym_pseudo_inverse(const RealMatrix& s) {
    if (s.rows() != s.cols())
        throw DimensionMismatchError("sym_pseudo_inverse needs a square matrix");
    SymmetricEigen eig = symmetric_eig(s);
    double largest = 0.0;
    for (double l : eig.eigenvalues) largest = std::max(largest, std::abs(l));
    const double cutoff = 1e-10 * largest;
    PseudoInverseResult result;
    result.rank = 0;
    for (double l : eig.eigenvalues)
        if (l > cutoff) ++result.rank;
    result.truncated = result.rank < eig.eigenvalues.size();
    const double threshold = cutoff;
    result.inverse =
        symmetric_spectral_map(eig, [threshold](double l) { return l > threshold ? 1.0 / l : 0.0; });
    return result;
}

namespace {

// ln Gamma via the Lanczos approximation, double precision.
double log_gamma(double x) {
    static const double coeffs[14] = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   0.339946499848118887e-4, 0.465236289270485756e-4,
        -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
        0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
        -0.261908384015814087e-4, 0.368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double coeff : coeffs) ser += coeff / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

// Lower regularized incomplete gamma P(a, x) by series expansion; valid for
// x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < 10000; ++i) {
        ++ap;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * std::numeric_limits<double>::epsilon())
            return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
    throw NonConvergenceError("incomplete gamma series did not converge");
}

// Upper regularized incomplete gamma Q(a, x) by continued fraction; valid for
// x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double fpmin = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= eps)
            return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
    }
    throw NonConvergenceError("incomplete gamma continued fraction did not converge");
}

}  // namespace

double chi2_sf(double x, unsigned df) {
    if (df < 1) throw DomainError("degrees of freedom must be positive");
    if (!(x >= 0.0)) throw DomainError("chi-square statistic must be nonnegative");
    if (x == 0.0) return 1.0;
    const double a = 0.5 * static_cast<double>(df);
    const double half = 0.5 * x;
    if (half < a + 1.0) return 1.0 - gamma_p_series(a, half);
    return gamma_q_cf(a, half);
}

double chi2_quantile(double p, unsigned df) {
    if (df < 1) throw DomainError("degrees of freedom must be positive");
    if (!(p > 0.0) || !(p < 1.0)) throw DomainError("probability must lie in (0, 1)");
    const double tail = 1.0 - p;
    double lo = 0.0;
    double hi = std::max(1.0, static_cast<double>(df));
    while (chi2_sf(hi, df) > tail) {
        hi *= 2.0;
        if (hi > 1e12) throw NonConvergenceError("chi2_quantile bracket expansion failed");
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (chi2_sf(mid, df) > tail)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace shapetest
