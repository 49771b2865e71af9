#include "gfrob/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gfrob {

template <Scalar T>
T trace(const Matrix<T>& m) {
    if (!m.is_square()) {
        throw DimensionError("trace of non-square " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + " matrix");
    }
    CompensatedSum<T> s;
    for (std::size_t j = 0; j < m.rows(); ++j) s += m(j, j);
    return s.value();
}

template <Scalar T>
Matrix<T> conj_transpose(const Matrix<T>& m) {
    Matrix<T> t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = conj(m(i, j));
    return t;
}

template <Scalar T>
T dot(std::span<const T> x, std::span<const T> y) {
    if (x.size() != y.size()) throw DimensionError("dot: length mismatch");
    CompensatedSum<T> s;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s.value();
}

template <Scalar T>
double hermitian_defect(const Matrix<T>& g) {
    if (!g.is_square()) throw DimensionError("Hermitian test on non-square matrix");
    double num = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) num += abs2(g(i, j) - conj(g(j, i)));
    const double den = frobenius_norm(g);
    if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
    return std::sqrt(num) / den;
}

template <Scalar T>
CholeskyFactor<T> cholesky(const Matrix<T>& g) {
    if (!g.is_square()) throw DimensionError("cholesky: matrix is not square");
    const double defect = hermitian_defect(g);
    if (!(defect <= kHermitianTolerance)) {
        throw NotHermitianError("cholesky: matrix is not Hermitian (relative defect " +
                                std::to_string(defect) + ")");
    }
    const std::size_t n = g.rows();
    double max_diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) max_diag = std::max(max_diag, std::abs(real_part(g(j, j))));
    // Pivots at roundoff level belong to numerically singular matrices.
    const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_diag;
    Matrix<T> l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = real_part(g(j, j));
        for (std::size_t k = 0; k < j; ++k) d -= abs2(l(j, k));
        if (!(d > floor) || !std::isfinite(d)) throw NotPositiveDefiniteError(j, d);
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            T s = g(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return CholeskyFactor<T>(std::move(l));
}

template <Scalar T>
Matrix<T> CholeskyFactor<T>::reconstruct() const {
    return lower_ * conj_transpose(lower_);
}

template <Scalar T>
Matrix<T> CholeskyFactor<T>::solve_lower(const Matrix<T>& b) const {
    const std::size_t n = dim();
    if (b.rows() != n) throw DimensionError("solve: right-hand side has wrong row count");
    Matrix<T> x = b;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            T s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * x(k, c);
            x(i, c) = s / lower_(i, i);
        }
    }
    return x;
}

template <Scalar T>
Matrix<T> CholeskyFactor<T>::solve(const Matrix<T>& b) const {
    const std::size_t n = dim();
    Matrix<T> x = solve_lower(b);
    // L^H x = y
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t ii = n; ii-- > 0;) {
            T s = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) s -= conj(lower_(k, ii)) * x(k, c);
            x(ii, c) = s / lower_(ii, ii);
        }
    }
    return x;
}

template <Scalar T>
Vector<T> CholeskyFactor<T>::solve(std::span<const T> b) const {
    const Matrix<T> x = solve(Matrix<T>::column(b));
    return x.col(0);
}

template <Scalar T>
Matrix<T> CholeskyFactor<T>::inverse() const {
    const Matrix<T> linv = solve_lower(Matrix<T>::identity(dim()));
    return conj_transpose(linv) * linv;
}

#define GFROB_INSTANTIATE(T)                                              \
    template T trace(const Matrix<T>&);                                   \
    template Matrix<T> conj_transpose(const Matrix<T>&);                  \
    template T dot(std::span<const T>, std::span<const T>);               \
    template double hermitian_defect(const Matrix<T>&);                   \
    template CholeskyFactor<T> cholesky(const Matrix<T>&);                \
    template class CholeskyFactor<T>;

GFROB_INSTANTIATE(double)
GFROB_INSTANTIATE(complex)

#undef GFROB_INSTANTIATE

}  // namespace gfrob
