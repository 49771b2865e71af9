#pragma once

#include "gfrob/spaces.hpp"

namespace gfrob {

/// Sesquilinear form a(v1, v2) = v1^T A conj(v2) on an inner-product space.
///
/// The same matrix A represents the associated conjugate linear map
/// V -> V* (v |-> A conj(v) in dual coordinates), so A_ij = a(e_i, e_j).
/// No symmetry is assumed.
template <Scalar T>
class SesquilinearForm {
public:
    SesquilinearForm(InnerProductSpace<T> space, Matrix<T> rep);

    const InnerProductSpace<T>& space() const noexcept { return space_; }
    const Matrix<T>& rep() const noexcept { return rep_; }
    std::size_t dim() const noexcept { return rep_.rows(); }

    T eval(std::span<const T> v1, std::span<const T> v2) const;

    friend SesquilinearForm operator+(const SesquilinearForm& a, const SesquilinearForm& b) {
        a.require_same_space(b);
        return {a.space_, a.rep_ + b.rep_};
    }
    friend SesquilinearForm operator*(T alpha, const SesquilinearForm& a) {
        return {a.space_, alpha * a.rep_};
    }

private:
    void require_same_space(const SesquilinearForm& o) const;

    InnerProductSpace<T> space_;
    Matrix<T> rep_;
};

template <Scalar T>
T eval(const SesquilinearForm<T>& form, std::span<const T> v1, std::span<const T> v2) {
    return form.eval(v1, v2);
}

/// Matrix of the composition of conjugate linear maps A o B (a linear map): A conj(B).
/// Also represents conj-linear-after-linear compositions (right factor conjugated).
template <Scalar T>
Matrix<T> compose_conjlinear(const Matrix<T>& a, const Matrix<T>& b);

/// Matrix of R_V^-1 regarded as a conjugate linear map V* -> V, i.e. conj(G)^-1.
template <Scalar T>
Matrix<T> riesz_inverse_rep(const InnerProductSpace<T>& space);

/// trace_V a = conj(trace(R_V^-1 A)), evaluated from the endomorphism R_V^-1 A.
template <Scalar T>
T metric_trace(const SesquilinearForm<T>& form);

/// trace(A R_V^-1), the right-composition route to the same value.
template <Scalar T>
T metric_trace_right(const SesquilinearForm<T>& form);

/// Sum of a(q_i, q_i) over the columns of an orthonormal basis.
template <Scalar T>
T metric_trace_basis(const SesquilinearForm<T>& form, const Matrix<T>& basis);

}  // namespace gfrob
