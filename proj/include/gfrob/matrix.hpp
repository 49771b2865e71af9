#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "gfrob/error.hpp"

namespace gfrob {

using complex = std::complex<double>;

/// The two supported scalar fields.
template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, complex>;

template <Scalar T>
inline constexpr bool is_complex_v = std::same_as<T, complex>;

enum class Field { real, complex };

template <Scalar T>
inline constexpr Field field_of = is_complex_v<T> ? Field::complex : Field::real;

inline const char* to_string(Field f) { return f == Field::real ? "real" : "complex"; }

template <Scalar T>
constexpr T conj(const T& z) {
    if constexpr (is_complex_v<T>) {
        return std::conj(z);
    } else {
        return z;
    }
}

template <Scalar T>
constexpr double real_part(const T& z) {
    if constexpr (is_complex_v<T>) {
        return z.real();
    } else {
        return z;
    }
}

template <Scalar T>
constexpr double imag_part(const T& z) {
    if constexpr (is_complex_v<T>) {
        return z.imag();
    } else {
        return 0.0;
    }
}

/// |z|^2 without the square root.
template <Scalar T>
constexpr double abs2(const T& z) {
    if constexpr (is_complex_v<T>) {
        return std::norm(z);
    } else {
        return z * z;
    }
}

template <Scalar T>
using Vector = std::vector<T>;

/// Dense row-major matrix over a scalar field. Shapes are at least 1x1.
template <Scalar T>
class Matrix {
public:
    using value_type = T;

    Matrix() : Matrix(1, 1) {}

    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(checked_size(rows, cols), fill) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != checked_size(rows, cols)) {
            throw DimensionError("matrix data has " + std::to_string(data_.size()) +
                                 " entries, expected " + std::to_string(rows * cols));
        }
    }

    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(checked_size(rows_, cols_));
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionError("ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    static Matrix diagonal(std::span<const T> d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static Matrix diagonal(std::initializer_list<T> d) {
        return diagonal(std::span<const T>(d.begin(), d.size()));
    }

    /// Column vector from coordinates.
    static Matrix column(std::span<const T> v) {
        return Matrix(v.size(), 1, std::vector<T>(v.begin(), v.end()));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    Vector<T> col(std::size_t j) const {
        Vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o, "+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o, "-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(T s) noexcept {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, T s) { return a *= s; }
    friend Matrix operator*(T s, Matrix a) { return a *= s; }
    friend Matrix operator-(Matrix a) { return a *= T{-1}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    static std::size_t checked_size(std::size_t r, std::size_t c) {
        if (r == 0 || c == 0) throw DimensionError("matrix dimensions must be positive");
        return r * c;
    }

    void require_same_shape(const Matrix& o, const char* op) const {
        if (o.rows_ != rows_ || o.cols_ != cols_) {
            throw DimensionError(std::string("shape mismatch in ") + op);
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<complex>;

template <Scalar T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            if (aik == T{}) continue;
            auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

template <Scalar T>
Vector<T> operator*(const Matrix<T>& a, std::span<const T> x) {
    if (a.cols() != x.size()) throw DimensionError("matvec: length mismatch");
    Vector<T> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        T acc{};
        auto ai = a.row(i);
        for (std::size_t j = 0; j < x.size(); ++j) acc += ai[j] * x[j];
        y[i] = acc;
    }
    return y;
}

template <Scalar T>
Vector<T> operator*(const Matrix<T>& a, const Vector<T>& x) {
    return a * std::span<const T>(x);
}

template <Scalar T>
Matrix<T> transpose(const Matrix<T>& m) {
    Matrix<T> t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

/// Entrywise conjugate; identity on the real field.
template <Scalar T>
Matrix<T> conj(const Matrix<T>& m) {
    if constexpr (!is_complex_v<T>) {
        return m;
    } else {
        Matrix<T> c = m;
        for (auto& x : c.data()) x = std::conj(x);
        return c;
    }
}

template <Scalar T>
Vector<T> conj(std::span<const T> v) {
    Vector<T> c(v.begin(), v.end());
    if constexpr (is_complex_v<T>) {
        for (auto& x : c) x = std::conj(x);
    }
    return c;
}

/// Promote a real matrix to the complex field. The only sanctioned field crossing.
inline ComplexMatrix to_complex(const RealMatrix& m) {
    ComplexMatrix c(m.rows(), m.cols());
    for (std::size_t k = 0; k < m.size(); ++k) c.data()[k] = m.data()[k];
    return c;
}

/// Entrywise Frobenius norm sqrt(sum |m_ij|^2).
template <Scalar T>
double frobenius_norm(const Matrix<T>& m) {
    double s = 0.0;
    for (const auto& x : m.data()) s += abs2(x);
    return std::sqrt(s);
}

template <Scalar T>
double max_abs(const Matrix<T>& m) {
    double s = 0.0;
    for (const auto& x : m.data()) s = std::max(s, std::abs(x));
    return s;
}

template <Scalar T>
double euclidean_norm(std::span<const T> v) {
    double s = 0.0;
    for (const auto& x : v) s += abs2(x);
    return std::sqrt(s);
}

}  // namespace gfrob
