#include "gfrob/estimate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gfrob/parallel.hpp"

namespace gfrob {

const char* to_string(LawKind k) {
    switch (k) {
        case LawKind::sphere: return "sphere";
        case LawKind::ball: return "ball";
        case LawKind::gaussian: return "gaussian";
    }
    return "?";
}

LawKind parse_law(std::string_view name) {
    if (name == "sphere") return LawKind::sphere;
    if (name == "ball") return LawKind::ball;
    if (name == "gaussian") return LawKind::gaussian;
    throw DomainError("unknown sampling law '" + std::string(name) + "'");
}

template <Scalar T>
double EstimateReport<T>::z_score() const {
    if (!exact) return 0.0;
    const double diff = std::abs(estimate - *exact);
    // Estimators that are exact per draw report a roundoff-sized error.
    const double se = std::max(standard_error, kRoundoffFloor * std::max(std::abs(*exact), std::abs(estimate)));
    if (se > 0.0) return diff / se;
    return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

namespace detail {

template <Scalar T>
void Moments<T>::add(std::span<const T> x) {
    ++count_;
    const double inv = 1.0 / static_cast<double>(count_);
    for (std::size_t k = 0; k < mean_.size(); ++k) {
        const T delta = x[k] - mean_[k];
        mean_[k] += delta * inv;
        m2_[k] += real_part(conj(delta) * (x[k] - mean_[k]));
    }
}

template <Scalar T>
void Moments<T>::merge(const Moments& o) {
    if (o.count_ == 0) return;
    if (count_ == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(o.count_);
    const double n = na + nb;
    for (std::size_t k = 0; k < mean_.size(); ++k) {
        const T delta = o.mean_[k] - mean_[k];
        mean_[k] += delta * (nb / n);
        m2_[k] += o.m2_[k] + abs2(delta) * (na * nb / n);
    }
    count_ += o.count_;
}

std::uint64_t law_tag(LawKind k) {
    switch (k) {
        case LawKind::sphere: return 0x5348;
        case LawKind::ball: return 0x4241;
        case LawKind::gaussian: return 0x4741;
    }
    return 0;
}

template <Scalar T>
Vector<T> draw(const SamplingLaw<T>& law, RngStream& rng) {
    const std::size_t n = law.space.dim();
    const auto u = rng.normal_vector<T>(n);
    Vector<T> v = law.space.orthonormal_basis().columns * u;
    if (law.kind == LawKind::gaussian) return v;

    double scale = 1.0 / euclidean_norm<T>(u);
    if (law.kind == LawKind::ball) {
        const double real_dim = is_complex_v<T> ? 2.0 * static_cast<double>(n) : static_cast<double>(n);
        scale *= std::pow(rng.uniform(), 1.0 / real_dim);
    }
    for (auto& x : v) x *= scale;
    return v;
}

template <Scalar T>
double law_weight(const SamplingLaw<T>& law, std::span<const T> v) {
    const double n = static_cast<double>(law.space.dim());
    if (law.kind == LawKind::sphere) return n;
    return n / law.space.norm2(v);
}

}  // namespace detail

namespace {

/// Streams `count` draws through term(v, out) in parallel batches and returns
/// the merged moments of the k-component terms.
template <Scalar T, class Term>
detail::Moments<T> accumulate(const SamplingLaw<T>& law, std::size_t count, std::size_t k, Term&& term) {
    if (count == 0) throw DomainError("sample count must be at least 1");
    const std::size_t nb = parallel::block_count(count, kSampleBatch);
    const auto tag = detail::law_tag(law.kind);
    auto parts = parallel::map_blocks(nb, detail::Moments<T>(k), [&](std::size_t b) {
        RngStream rng(law.seed, tag, b);
        detail::Moments<T> m(k);
        Vector<T> out(k);
        const std::size_t lo = b * kSampleBatch;
        const std::size_t hi = std::min(count, lo + kSampleBatch);
        for (std::size_t i = lo; i < hi; ++i) {
            const auto v = detail::draw(law, rng);
            term(std::span<const T>(v), std::span<T>(out));
            m.add(out);
        }
        return m;
    });
    detail::Moments<T> total(k);
    for (const auto& p : parts) total.merge(p);
    return total;
}

template <Scalar T>
EstimateReport<T> make_report(const detail::Moments<T>& m, const SamplingLaw<T>& law) {
    EstimateReport<T> r;
    r.estimate = m.mean()[0];
    r.sample_count = m.count();
    r.standard_error = std::sqrt(m.variance(0) / static_cast<double>(m.count()));
    r.seed = law.seed;
    r.law = law.kind;
    return r;
}

}  // namespace

template <Scalar T>
std::vector<Vector<T>> sample(const SamplingLaw<T>& law, std::size_t count) {
    std::vector<Vector<T>> out;
    out.reserve(count);
    const auto tag = detail::law_tag(law.kind);
    for (std::size_t b = 0; b * kSampleBatch < count; ++b) {
        RngStream rng(law.seed, tag, b);
        const std::size_t hi = std::min(count, (b + 1) * kSampleBatch);
        for (std::size_t i = b * kSampleBatch; i < hi; ++i) out.push_back(detail::draw(law, rng));
    }
    return out;
}

template <Scalar T>
RieszInverseEstimate<T> estimate_riesz_inverse(const SamplingLaw<T>& law, std::size_t count) {
    const std::size_t n = law.space.dim();
    auto m = accumulate(law, count, n * n, [&](std::span<const T> v, std::span<T> out) {
        const double w = detail::law_weight(law, v);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out[i * n + j] = w * v[i] * conj(v[j]);
    });
    RieszInverseEstimate<T> r{Matrix<T>(n, n), RealMatrix(n, n), m.count()};
    for (std::size_t k = 0; k < n * n; ++k) {
        r.estimate.data()[k] = m.mean()[k];
        r.standard_error.data()[k] = std::sqrt(m.variance(k) / static_cast<double>(m.count()));
    }
    return r;
}

template <Scalar T>
EstimateReport<T> estimate_metric_trace(const SesquilinearForm<T>& form, const SamplingLaw<T>& law,
                                        std::size_t count) {
    if (!form.space().same_as(law.space)) throw SpaceMismatchError("form and law live on different spaces");
    auto m = accumulate(law, count, 1, [&](std::span<const T> v, std::span<T> out) {
        out[0] = detail::law_weight(law, v) * form.eval(v, v);
    });
    auto r = make_report(m, law);
    r.exact = metric_trace(form);
    return r;
}

template <Scalar T>
EstimateReport<T> estimate_classical_trace(const Matrix<T>& a, LawKind kind, std::size_t count,
                                           std::uint64_t seed) {
    if (!a.is_square()) throw DimensionError("classical trace estimate needs a square matrix");
    const SamplingLaw<T> law{kind, InnerProductSpace<T>::standard(a.rows()), seed};
    const SesquilinearForm<T> form(law.space, a);
    auto m = accumulate(law, count, 1, [&](std::span<const T> v, std::span<T> out) {
        const double w = kind == LawKind::gaussian ? 1.0 : detail::law_weight(law, v);
        out[0] = w * form.eval(v, v);
    });
    auto r = make_report(m, law);
    r.exact = trace(a);
    return r;
}

template <Scalar T>
EstimateReport<T> estimate_frob_inner(const MetrizedMap<T>& s, const MetrizedMap<T>& t,
                                      const SamplingLaw<T>& law, std::size_t count) {
    if (!s.domain().same_as(law.space)) throw SpaceMismatchError("law must live on the maps' domain");
    const T exact = frob_inner(s, t);  // also validates the spaces
    auto m = accumulate(law, count, 1, [&](std::span<const T> v, std::span<T> out) {
        const auto sv = s.apply(v);
        const auto tv = t.apply(v);
        out[0] = detail::law_weight(law, v) * t.codomain().inner(sv, tv);
    });
    auto r = make_report(m, law);
    r.exact = exact;
    return r;
}

template struct EstimateReport<double>;
template struct EstimateReport<complex>;
template class detail::Moments<double>;
template class detail::Moments<complex>;

#define GFROB_INSTANTIATE(T)                                                                           \
    template Vector<T> detail::draw(const SamplingLaw<T>&, RngStream&);                                 \
    template double detail::law_weight(const SamplingLaw<T>&, std::span<const T>);                     \
    template std::vector<Vector<T>> sample(const SamplingLaw<T>&, std::size_t);                         \
    template RieszInverseEstimate<T> estimate_riesz_inverse(const SamplingLaw<T>&, std::size_t);        \
    template EstimateReport<T> estimate_metric_trace(const SesquilinearForm<T>&, const SamplingLaw<T>&, \
                                                     std::size_t);                                      \
    template EstimateReport<T> estimate_classical_trace(const Matrix<T>&, LawKind, std::size_t,         \
                                                        std::uint64_t);                                 \
    template EstimateReport<T> estimate_frob_inner(const MetrizedMap<T>&, const MetrizedMap<T>&,        \
                                                   const SamplingLaw<T>&, std::size_t);

GFROB_INSTANTIATE(double)
GFROB_INSTANTIATE(complex)

#undef GFROB_INSTANTIATE

}  // namespace gfrob
