#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfrob/rng.hpp"

namespace gfrob {

struct VerifyOptions {
    std::uint64_t seed = 0;
    std::size_t trials = 100;
    std::size_t dim_max = 20;
    /// Scales every property threshold by tol / 1e-9.
    double tol = 1e-9;
    bool real = true;
    bool complex = true;
};

struct PropertyResult {
    std::string name;
    Field field = Field::real;
    /// Largest relative residual over all trials.
    double worst = 0.0;
    double threshold = 0.0;
    std::size_t trials = 0;

    bool passed() const { return worst <= threshold; }
};

/// Cross-formula identity checks on random instances: matrix vs basis
/// Frobenius inner product, adjoint invariance, the conjugated trace swap,
/// linearity of the metric trace, basis sums under two orthonormal bases,
/// identity-metric reduction, Hermitian symmetry and the left/right metric
/// trace routes.
std::vector<PropertyResult> run_identity_suite(const VerifyOptions& opts);

/// "PASS name [field] worst=... threshold=... trials=..."
std::string format_result(const PropertyResult& r);

/// B B^H / n + 0.1 I for a standard normal B; eigenvalues at least 0.1.
template <Scalar T>
Matrix<T> random_hpd(std::size_t n, RngStream& rng);

/// Random unitary (orthogonal for reals) matrix, Gram-Schmidt on a normal draw.
template <Scalar T>
Matrix<T> random_unitary(std::size_t n, RngStream& rng);

}  // namespace gfrob
