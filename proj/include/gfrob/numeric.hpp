#pragma once

#include <cstddef>
#include <span>

#include "gfrob/matrix.hpp"

namespace gfrob {

/// Neumaier-compensated running sum. Used wherever a reduction result must not
/// depend on how the terms were partitioned.
template <Scalar T>
class CompensatedSum {
public:
    void add(T x) noexcept {
        if constexpr (is_complex_v<T>) {
            re_.add(x.real());
            im_.add(x.imag());
        } else {
            const double t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x)) {
                comp_ += (sum_ - t) + x;
            } else {
                comp_ += (x - t) + sum_;
            }
            sum_ = t;
        }
    }

    CompensatedSum& operator+=(T x) noexcept {
        add(x);
        return *this;
    }

    T value() const noexcept {
        if constexpr (is_complex_v<T>) {
            return {re_.value(), im_.value()};
        } else {
            return sum_ + comp_;
        }
    }

private:
    // Only one of the two representations is used per instantiation.
    double sum_ = 0.0;
    double comp_ = 0.0;
    struct Part {
        double s = 0.0, c = 0.0;
        void add(double x) noexcept {
            const double t = s + x;
            c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
            s = t;
        }
        double value() const noexcept { return s + c; }
    };
    Part re_, im_;
};

/// Sum of the diagonal. Throws DimensionError for non-square input.
template <Scalar T>
T trace(const Matrix<T>& m);

/// (M^H)_ij = conj(M_ji); plain transpose over the reals.
template <Scalar T>
Matrix<T> conj_transpose(const Matrix<T>& m);

/// Unconjugated bilinear sum x^T y.
template <Scalar T>
T dot(std::span<const T> x, std::span<const T> y);

/// Relative Hermitian defect ||G - G^H||_F / ||G||_F.
template <Scalar T>
double hermitian_defect(const Matrix<T>& g);

inline constexpr double kHermitianTolerance = 1e-12;

/// Lower-triangular L with G = L L^H and positive real diagonal.
template <Scalar T>
class CholeskyFactor {
public:
    explicit CholeskyFactor(Matrix<T> lower) : lower_(std::move(lower)) {}

    const Matrix<T>& lower() const noexcept { return lower_; }
    std::size_t dim() const noexcept { return lower_.rows(); }

    /// L L^H.
    Matrix<T> reconstruct() const;

    /// Solve G X = B by forward then backward substitution.
    Matrix<T> solve(const Matrix<T>& b) const;
    Vector<T> solve(std::span<const T> b) const;

    /// L^-1 B.
    Matrix<T> solve_lower(const Matrix<T>& b) const;

    /// G^-1 formed as (L^-1)^H (L^-1), which is Hermitian to the last bit.
    Matrix<T> inverse() const;

private:
    Matrix<T> lower_;
};

/// Cholesky factorization of a Hermitian positive definite matrix.
/// Rejects inputs whose Hermitian defect exceeds kHermitianTolerance.
template <Scalar T>
CholeskyFactor<T> cholesky(const Matrix<T>& g);

template <Scalar T>
Matrix<T> solve_hpd(const CholeskyFactor<T>& f, const Matrix<T>& b) {
    return f.solve(b);
}

}  // namespace gfrob
