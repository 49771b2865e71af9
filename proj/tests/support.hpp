#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <random>

#include <Eigen/Dense>
#include <doctest.h>

#include "gfrob/matrix.hpp"

namespace testing {

using gfrob::complex;
using gfrob::Matrix;
using gfrob::Scalar;
using gfrob::Vector;

template <Scalar T>
using EMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <Scalar T>
EMatrix<T> to_eigen(const Matrix<T>& m) {
    EMatrix<T> e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

template <Scalar T>
Matrix<T> from_eigen(const EMatrix<T>& e) {
    Matrix<T> m(e.rows(), e.cols());
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
    return m;
}

/// Test-side generator, independent of the library's RNG streams.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double normal() { return nd_(eng_); }
    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    std::size_t dim(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_); }

    template <Scalar T>
    T scalar() {
        if constexpr (gfrob::is_complex_v<T>) {
            return {normal(), normal()};
        } else {
            return normal();
        }
    }

    template <Scalar T>
    Matrix<T> matrix(std::size_t r, std::size_t c) {
        Matrix<T> m(r, c);
        for (auto& x : m.data()) x = scalar<T>();
        return m;
    }

    template <Scalar T>
    Vector<T> vector(std::size_t n) {
        Vector<T> v(n);
        for (auto& x : v) x = scalar<T>();
        return v;
    }

    /// Unitary from the QR factorization of a random matrix.
    template <Scalar T>
    EMatrix<T> unitary(std::size_t n) {
        const EMatrix<T> a = to_eigen(matrix<T>(n, n));
        Eigen::HouseholderQR<EMatrix<T>> qr(a);
        return qr.householderQ() * EMatrix<T>::Identity(n, n);
    }

    /// Hermitian positive definite with eigenvalues log-uniform in [1, cond].
    template <Scalar T>
    Matrix<T> hpd(std::size_t n, double cond = 10.0) {
        const EMatrix<T> u = unitary<T>(n);
        Eigen::VectorXd ev(n);
        for (std::size_t i = 0; i < n; ++i) ev(i) = std::pow(cond, uniform());
        EMatrix<T> g = u * ev.cast<T>().asDiagonal() * u.adjoint();
        g = (0.5 * (g + g.adjoint())).eval();
        return from_eigen<T>(g);
    }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> nd_{0.0, 1.0};
};

template <Scalar T>
double rel_err(T got, T want, double scale = 0.0) {
    const double s = std::max({std::abs(want), scale, 1e-300});
    return std::abs(got - want) / s;
}

template <Scalar T>
double rel_err(const Matrix<T>& got, const Matrix<T>& want) {
    REQUIRE(got.rows() == want.rows());
    REQUIRE(got.cols() == want.cols());
    return gfrob::frobenius_norm(got - want) / std::max(gfrob::frobenius_norm(want), 1e-300);
}

inline const complex I{0.0, 1.0};

/// Fresh scratch directory, removed on scope exit.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("gfrob_" + tag + "_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace testing
