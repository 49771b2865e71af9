#pragma once

#include "gfrob/forms.hpp"

namespace gfrob {

/// A linear map V -> W held as its m x n matrix together with both metrics.
template <Scalar T>
class MetrizedMap {
public:
    MetrizedMap(InnerProductSpace<T> domain, InnerProductSpace<T> codomain, Matrix<T> rep);

    /// Both spaces standard (identity Gram).
    static MetrizedMap standard(Matrix<T> rep) {
        auto dom = InnerProductSpace<T>::standard(rep.cols());
        auto cod = InnerProductSpace<T>::standard(rep.rows());
        return {std::move(dom), std::move(cod), std::move(rep)};
    }

    const InnerProductSpace<T>& domain() const noexcept { return domain_; }
    const InnerProductSpace<T>& codomain() const noexcept { return codomain_; }
    const Matrix<T>& rep() const noexcept { return rep_; }

    Vector<T> apply(std::span<const T> v) const { return rep_ * v; }

private:
    InnerProductSpace<T> domain_;
    InnerProductSpace<T> codomain_;
    Matrix<T> rep_;
};

/// Frobenius-type inner product <S, T>_{V->W} = trace_V(S* R_W T).
/// In matrices: trace(V^-1 S^T W conj(T)), evaluated with factored solves.
/// Sesquilinear in (S, T); reduces to sum s_ij conj(t_ij) for identity metrics.
template <Scalar T>
T frob_inner(const MetrizedMap<T>& s, const MetrizedMap<T>& t);

/// Same value as a sum over an orthonormal basis of the domain:
/// sum_i <S q_i, T q_i>_W. Bases failing the Gram test at 1e-8 are rejected.
template <Scalar T>
T frob_inner_basis(const MetrizedMap<T>& s, const MetrizedMap<T>& t, const OrthonormalBasis<T>& q);

/// sqrt(Re <T, T>). Throws ConsistencyError when the imaginary part exceeds
/// 1e-12 relative to the real part.
template <Scalar T>
double frob_norm(const MetrizedMap<T>& t);

/// The adjoint T*: W* -> V*, represented by T^T, with dual metrics conj(G)^-1.
template <Scalar T>
MetrizedMap<T> adjoint_map(const MetrizedMap<T>& t);

/// Classical entrywise Frobenius inner product sum s_ij conj(t_ij).
template <Scalar T>
T frob_inner_entrywise(const Matrix<T>& s, const Matrix<T>& t);

inline constexpr double kBasisOrthonormalityTolerance = 1e-8;
inline constexpr double kNormImaginaryTolerance = 1e-12;

}  // namespace gfrob
