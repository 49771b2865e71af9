#pragma once

#include <cstdint>
#include <random>

#include "gfrob/matrix.hpp"

namespace gfrob {

/// Deterministic random stream identified by (seed, substream). Two streams
/// with the same pair produce the same draws on every run and thread; streams
/// with different substream indices are statistically independent.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t substream = 0);

    /// Substream keyed by two indices, e.g. (purpose tag, batch index).
    RngStream(std::uint64_t seed, std::uint64_t tag, std::uint64_t substream);

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    /// Standard normal over the field: N(0,1) for reals, and N(0,1/2) real and
    /// imaginary parts for complex scalars so that E|z|^2 = 1.
    template <Scalar T>
    T normal_scalar() {
        if constexpr (is_complex_v<T>) {
            constexpr double s = 0.70710678118654752440;
            const double re = normal();
            const double im = normal();
            return {s * re, s * im};
        } else {
            return normal();
        }
    }

    template <Scalar T>
    Vector<T> normal_vector(std::size_t n) {
        Vector<T> v(n);
        for (auto& x : v) x = normal_scalar<T>();
        return v;
    }

    template <Scalar T>
    Matrix<T> normal_matrix(std::size_t rows, std::size_t cols) {
        Matrix<T> m(rows, cols);
        for (auto& x : m.data()) x = normal_scalar<T>();
        return m;
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace gfrob
