#include "gfrob/forms.hpp"

#include <string>

namespace gfrob {

template <Scalar T>
SesquilinearForm<T>::SesquilinearForm(InnerProductSpace<T> space, Matrix<T> rep)
    : space_(std::move(space)), rep_(std::move(rep)) {
    if (rep_.rows() != space_.dim() || rep_.cols() != space_.dim()) {
        throw DimensionError("form matrix is " + std::to_string(rep_.rows()) + "x" +
                             std::to_string(rep_.cols()) + " on a space of dimension " +
                             std::to_string(space_.dim()));
    }
}

template <Scalar T>
void SesquilinearForm<T>::require_same_space(const SesquilinearForm& o) const {
    if (!space_.same_as(o.space_)) throw SpaceMismatchError("forms live on different spaces");
}

template <Scalar T>
T SesquilinearForm<T>::eval(std::span<const T> v1, std::span<const T> v2) const {
    if (v1.size() != dim() || v2.size() != dim()) throw DimensionError("form eval: length mismatch");
    CompensatedSum<T> s;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (v1[i] == T{}) continue;
        T r{};
        for (std::size_t j = 0; j < dim(); ++j) r += rep_(i, j) * conj(v2[j]);
        s += v1[i] * r;
    }
    return s.value();
}

template <Scalar T>
Matrix<T> compose_conjlinear(const Matrix<T>& a, const Matrix<T>& b) {
    return a * conj(b);
}

template <Scalar T>
Matrix<T> riesz_inverse_rep(const InnerProductSpace<T>& space) {
    return conj(space.inverse_gram());
}

template <Scalar T>
T metric_trace(const SesquilinearForm<T>& form) {
    // R_V^-1 A as an endomorphism, formed by factored solves rather than an explicit inverse:
    // conj(G)^-1 conj(A) = conj(G^-1 A).
    const Matrix<T> endo = conj(form.space().solve(form.rep()));
    return conj(trace(endo));
}

template <Scalar T>
T metric_trace_right(const SesquilinearForm<T>& form) {
    return trace(compose_conjlinear(form.rep(), riesz_inverse_rep(form.space())));
}

template <Scalar T>
T metric_trace_basis(const SesquilinearForm<T>& form, const Matrix<T>& basis) {
    if (basis.rows() != form.dim() || basis.cols() != form.dim()) {
        throw DimensionError("basis must be n x n");
    }
    CompensatedSum<T> s;
    for (std::size_t i = 0; i < basis.cols(); ++i) {
        const auto q = basis.col(i);
        s += form.eval(q, q);
    }
    return s.value();
}

template class SesquilinearForm<double>;
template class SesquilinearForm<complex>;

#define GFROB_INSTANTIATE(T)                                                        \
    template Matrix<T> compose_conjlinear(const Matrix<T>&, const Matrix<T>&);      \
    template Matrix<T> riesz_inverse_rep(const InnerProductSpace<T>&);              \
    template T metric_trace(const SesquilinearForm<T>&);                            \
    template T metric_trace_right(const SesquilinearForm<T>&);                      \
    template T metric_trace_basis(const SesquilinearForm<T>&, const Matrix<T>&);

GFROB_INSTANTIATE(double)
GFROB_INSTANTIATE(complex)

#undef GFROB_INSTANTIATE

}  // namespace gfrob
