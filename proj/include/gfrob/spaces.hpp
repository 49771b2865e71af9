#pragma once

#include <memory>
#include <span>

#include "gfrob/numeric.hpp"

namespace gfrob {

/// Matrix whose columns q_1..q_n are orthonormal for some inner product.
template <Scalar T>
struct OrthonormalBasis {
    Matrix<T> columns;

    std::size_t dim() const noexcept { return columns.cols(); }
    Vector<T> vector(std::size_t i) const { return columns.col(i); }
};

/// Inner-product space K^n with <v1, v2> = v1^T G conj(v2) for a Hermitian
/// positive definite Gram matrix G. Immutable; copies share the factorization.
template <Scalar T>
class InnerProductSpace {
public:
    /// Validates and factors the Gram matrix.
    explicit InnerProductSpace(const Matrix<T>& gram);

    static InnerProductSpace standard(std::size_t n) {
        return InnerProductSpace(Matrix<T>::identity(n));
    }

    std::size_t dim() const noexcept { return impl_->gram.rows(); }
    const Matrix<T>& gram() const noexcept { return impl_->gram; }
    const CholeskyFactor<T>& factor() const noexcept { return impl_->chol; }

    T inner(std::span<const T> v1, std::span<const T> v2) const;
    double norm2(std::span<const T> v) const { return real_part(inner(v, v)); }
    double norm(std::span<const T> v) const;

    /// Coordinates of R_V v in the dual basis: G conj(v).
    Vector<T> riesz(std::span<const T> v) const;
    /// Inverse of riesz: conj(G^-1 l).
    Vector<T> riesz_inv(std::span<const T> l) const;

    /// G^-1 B.
    Matrix<T> solve(const Matrix<T>& b) const { return impl_->chol.solve(b); }
    Vector<T> solve(std::span<const T> b) const { return impl_->chol.solve(b); }

    /// G^-1, exactly Hermitian.
    const Matrix<T>& inverse_gram() const noexcept { return impl_->inverse; }

    /// Columns of L^-T with G = L L^H, so that Q^T G conj(Q) = I.
    const OrthonormalBasis<T>& orthonormal_basis() const noexcept { return impl_->basis; }

    /// The dual space V*, metrized by transporting <.,.> through the Riesz map:
    /// its Gram matrix is conj(G)^-1.
    InnerProductSpace dual() const;

    /// ||Q^T G conj(Q) - I||_max for a candidate basis.
    double orthonormality_defect(const Matrix<T>& q) const;

    /// Same handle, or identical Gram matrices.
    bool same_as(const InnerProductSpace& o) const noexcept {
        return impl_ == o.impl_ || impl_->gram == o.impl_->gram;
    }

private:
    struct Impl {
        Matrix<T> gram;
        CholeskyFactor<T> chol;
        Matrix<T> inverse;
        OrthonormalBasis<T> basis;
    };
    std::shared_ptr<const Impl> impl_;
};

template <Scalar T>
InnerProductSpace<T> make_space(const Matrix<T>& gram) {
    return InnerProductSpace<T>(gram);
}

template <Scalar T>
T inner(const InnerProductSpace<T>& space, std::span<const T> v1, std::span<const T> v2) {
    return space.inner(v1, v2);
}

template <Scalar T>
OrthonormalBasis<T> orthonormal_basis(const InnerProductSpace<T>& space) {
    return space.orthonormal_basis();
}

}  // namespace gfrob
