#include "gfrob/frobenius.hpp"

#include <cmath>
#include <string>

namespace gfrob {

template <Scalar T>
MetrizedMap<T>::MetrizedMap(InnerProductSpace<T> domain, InnerProductSpace<T> codomain, Matrix<T> rep)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), rep_(std::move(rep)) {
    if (rep_.rows() != codomain_.dim() || rep_.cols() != domain_.dim()) {
        throw DimensionError("map matrix is " + std::to_string(rep_.rows()) + "x" +
                             std::to_string(rep_.cols()) + " but spaces need " +
                             std::to_string(codomain_.dim()) + "x" + std::to_string(domain_.dim()));
    }
}

namespace {

template <Scalar T>
void require_shared_spaces(const MetrizedMap<T>& s, const MetrizedMap<T>& t) {
    if (!s.domain().same_as(t.domain()) || !s.codomain().same_as(t.codomain())) {
        throw SpaceMismatchError("Frobenius inner product of maps between different spaces");
    }
}

}  // namespace

template <Scalar T>
T frob_inner(const MetrizedMap<T>& s, const MetrizedMap<T>& t) {
    require_shared_spaces(s, t);
    // S* R_W T as a form on the domain has matrix S^T W conj(T).
    const Matrix<T> form = transpose(s.rep()) * t.codomain().gram() * conj(t.rep());
    return trace(s.domain().solve(form));
}

template <Scalar T>
T frob_inner_basis(const MetrizedMap<T>& s, const MetrizedMap<T>& t, const OrthonormalBasis<T>& q) {
    require_shared_spaces(s, t);
    const double defect = s.domain().orthonormality_defect(q.columns);
    if (!(defect <= kBasisOrthonormalityTolerance)) {
        throw DomainError("basis is not orthonormal for the domain metric (defect " +
                          std::to_string(defect) + ")");
    }
    CompensatedSum<T> sum;
    for (std::size_t i = 0; i < q.dim(); ++i) {
        const auto qi = q.vector(i);
        const auto sq = s.apply(qi);
        const auto tq = t.apply(qi);
        sum += t.codomain().inner(sq, tq);
    }
    return sum.value();
}

template <Scalar T>
double frob_norm(const MetrizedMap<T>& t) {
    const T v = frob_inner(t, t);
    const double re = real_part(v);
    const double im = imag_part(v);
    if (std::abs(im) > kNormImaginaryTolerance * std::max(std::abs(re), 1e-300)) {
        throw ConsistencyError("Frobenius-type <T,T> has imaginary part " + std::to_string(im) +
                               " against real part " + std::to_string(re));
    }
    if (re < 0.0) {
        // Only roundoff can push a positive definite form below zero.
        if (re < -kNormImaginaryTolerance) {
            throw ConsistencyError("Frobenius-type <T,T> is negative: " + std::to_string(re));
        }
        return 0.0;
    }
    return std::sqrt(re);
}

template <Scalar T>
MetrizedMap<T> adjoint_map(const MetrizedMap<T>& t) {
    return MetrizedMap<T>(t.codomain().dual(), t.domain().dual(), transpose(t.rep()));
}

template <Scalar T>
T frob_inner_entrywise(const Matrix<T>& s, const Matrix<T>& t) {
    if (s.rows() != t.rows() || s.cols() != t.cols()) throw DimensionError("entrywise inner: shape mismatch");
    CompensatedSum<T> sum;
    for (std::size_t k = 0; k < s.size(); ++k) sum += s.data()[k] * conj(t.data()[k]);
    return sum.value();
}

template class MetrizedMap<double>;
template class MetrizedMap<complex>;

#define GFROB_INSTANTIATE(T)                                                                    \
    template T frob_inner(const MetrizedMap<T>&, const MetrizedMap<T>&);                        \
    template T frob_inner_basis(const MetrizedMap<T>&, const MetrizedMap<T>&,                   \
                                const OrthonormalBasis<T>&);                                    \
    template double frob_norm(const MetrizedMap<T>&);                                           \
    template MetrizedMap<T> adjoint_map(const MetrizedMap<T>&);                                 \
    template T frob_inner_entrywise(const Matrix<T>&, const Matrix<T>&);

GFROB_INSTANTIATE(double)
GFROB_INSTANTIATE(complex)

#undef GFROB_INSTANTIATE

}  // namespace gfrob
