#include "gfrob/reference.hpp"

#include <cmath>

namespace gfrob::reference {

RiskGradient evaluate(const Params& p, const LossDescriptor& loss, const Dataset& data) {
    const std::size_t n = data.input_dim();
    const std::size_t m = data.output_dim();
    if (p.weights.rows() != m || p.weights.cols() != n || p.bias.size() != m)
        throw DimensionError("parameters do not conform to the dataset");
    RiskGradient out{0.0, RealMatrix(n, m), Vector<double>(m, 0.0)};
    std::vector<double> z(m), g(m);
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t r = 0; r < m; ++r) {
            z[r] = p.bias[r];
            for (std::size_t c = 0; c < n; ++c) z[r] += p.weights(r, c) * data.inputs(i, c);
        }
        out.risk += loss_value_grad(loss, z, data.targets.row(i), g);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < m; ++c) out.a(r, c) += data.inputs(i, r) * g[c];
        for (std::size_t c = 0; c < m; ++c) out.mean_grad[c] += g[c];
    }
    const double inv = 1.0 / static_cast<double>(data.size());
    out.risk *= inv;
    out.a *= inv;
    for (auto& v : out.mean_grad) v *= inv;
    return out;
}

Moments2 input_moments(const Dataset& data) {
    const std::size_t n = data.input_dim();
    const double inv = 1.0 / static_cast<double>(data.size());
    Moments2 out{Vector<double>(n, 0.0), RealMatrix(n, n)};
    for (std::size_t i = 0; i < data.size(); ++i)
        for (std::size_t r = 0; r < n; ++r) out.mean[r] += data.inputs(i, r);
    for (auto& v : out.mean) v *= inv;
    for (std::size_t i = 0; i < data.size(); ++i)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                out.covariance(r, c) += (data.inputs(i, r) - out.mean[r]) * (data.inputs(i, c) - out.mean[c]);
    out.covariance *= inv;
    return out;
}

namespace {

template <Scalar T, class Term>
EstimateReport<T> serial_estimate(const SamplingLaw<T>& law, std::size_t count, Term&& term) {
    if (count == 0) throw DomainError("sample count must be at least 1");
    detail::Moments<T> m(1);
    for (const auto& v : sample(law, count)) {
        const T x = term(std::span<const T>(v));
        m.add(std::span<const T>(&x, 1));
    }
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
EstimateReport<T> estimate_metric_trace(const SesquilinearForm<T>& form, const SamplingLaw<T>& law,
                                        std::size_t count) {
    auto r = serial_estimate(law, count, [&](std::span<const T> v) {
        return detail::law_weight(law, v) * form.eval(v, v);
    });
    r.exact = metric_trace(form);
    return r;
}

template <Scalar T>
EstimateReport<T> estimate_frob_inner(const MetrizedMap<T>& s, const MetrizedMap<T>& t,
                                      const SamplingLaw<T>& law, std::size_t count) {
    auto r = serial_estimate(law, count, [&](std::span<const T> v) {
        return detail::law_weight(law, v) * t.codomain().inner(s.apply(v), t.apply(v));
    });
    r.exact = frob_inner(s, t);
    return r;
}

template EstimateReport<double> estimate_metric_trace(const SesquilinearForm<double>&, const SamplingLaw<double>&,
                                                      std::size_t);
template EstimateReport<complex> estimate_metric_trace(const SesquilinearForm<complex>&,
                                                       const SamplingLaw<complex>&, std::size_t);
template EstimateReport<double> estimate_frob_inner(const MetrizedMap<double>&, const MetrizedMap<double>&,
                                                    const SamplingLaw<double>&, std::size_t);
template EstimateReport<complex> estimate_frob_inner(const MetrizedMap<complex>&, const MetrizedMap<complex>&,
                                                     const SamplingLaw<complex>&, std::size_t);

}  // namespace gfrob::reference
