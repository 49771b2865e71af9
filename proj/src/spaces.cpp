#include "gfrob/spaces.hpp"

#include <cmath>
#include <string>

namespace gfrob {

namespace {

template <Scalar T>
void require_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw DimensionError(std::string(what) + ": vector length " + std::to_string(got) +
                             " does not match space dimension " + std::to_string(want));
    }
}

}  // namespace

template <Scalar T>
InnerProductSpace<T>::InnerProductSpace(const Matrix<T>& gram) {
    auto chol = cholesky(gram);
    auto inv = chol.inverse();
    // Q = L^-T, i.e. the transpose of L^-1.
    auto linv = chol.solve_lower(Matrix<T>::identity(gram.rows()));
    impl_ = std::make_shared<const Impl>(
        Impl{gram, std::move(chol), std::move(inv), OrthonormalBasis<T>{transpose(linv)}});
}

template <Scalar T>
T InnerProductSpace<T>::inner(std::span<const T> v1, std::span<const T> v2) const {
    require_length<T>(v1.size(), dim(), "inner");
    require_length<T>(v2.size(), dim(), "inner");
    const auto& g = gram();
    CompensatedSum<T> s;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (v1[i] == T{}) continue;
        T row{};
        for (std::size_t j = 0; j < dim(); ++j) row += g(i, j) * conj(v2[j]);
        s += v1[i] * row;
    }
    return s.value();
}

template <Scalar T>
double InnerProductSpace<T>::norm(std::span<const T> v) const {
    return std::sqrt(std::max(0.0, norm2(v)));
}

template <Scalar T>
Vector<T> InnerProductSpace<T>::riesz(std::span<const T> v) const {
    require_length<T>(v.size(), dim(), "riesz");
    const auto cv = conj<T>(v);
    return gram() * cv;
}

template <Scalar T>
Vector<T> InnerProductSpace<T>::riesz_inv(std::span<const T> l) const {
    require_length<T>(l.size(), dim(), "riesz_inv");
    auto x = solve(l);
    return conj<T>(std::span<const T>(x));
}

template <Scalar T>
InnerProductSpace<T> InnerProductSpace<T>::dual() const {
    return InnerProductSpace(conj(inverse_gram()));
}

template <Scalar T>
double InnerProductSpace<T>::orthonormality_defect(const Matrix<T>& q) const {
    if (q.rows() != dim() || q.cols() != dim()) {
        throw DimensionError("orthonormality test: basis must be n x n");
    }
    const Matrix<T> test = transpose(q) * gram() * conj(q);
    return max_abs(test - Matrix<T>::identity(dim()));
}

template class InnerProductSpace<double>;
template class InnerProductSpace<complex>;

}  // namespace gfrob
