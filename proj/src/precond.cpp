#include "gfrob/precond.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gfrob/parallel.hpp"

namespace gfrob {

const char* to_string(XMetric m) {
    return m == XMetric::identity ? "identity" : "inv_covariance";
}

const char* to_string(YMetric m) {
    switch (m) {
        case YMetric::identity: return "identity";
        case YMetric::expected_hessian: return "expected_hessian";
        case YMetric::empirical_fisher: return "empirical_fisher";
    }
    return "?";
}

void Dataset::validate(const LossDescriptor& loss) const {
    if (inputs.rows() != targets.rows()) {
        throw DimensionError("dataset has " + std::to_string(inputs.rows()) + " inputs but " +
                             std::to_string(targets.rows()) + " targets");
    }
    if (targets.cols() != loss.out_dim) throw DimensionError("target width does not match loss output dimension");
    for (std::size_t i = 0; i < size(); ++i) check_target(loss, targets.row(i));
}

namespace {

void check_shapes(const Params& p, const Dataset& data) {
    if (p.weights.cols() != data.input_dim() || p.weights.rows() != data.output_dim() ||
        p.bias.size() != data.output_dim()) {
        throw DimensionError("parameters do not conform to the dataset");
    }
}

/// z = S x + b.
void forward(const Params& p, std::span<const double> x, std::span<double> z) {
    const std::size_t m = p.weights.rows();
    for (std::size_t r = 0; r < m; ++r) {
        const auto srow = p.weights.row(r);
        double acc = p.bias[r];
        for (std::size_t c = 0; c < x.size(); ++c) acc += srow[c] * x[c];
        z[r] = acc;
    }
}

/// Flat partial sums produced per block.
struct Partial {
    double scalar = 0.0;
    std::vector<double> values;
};

/// Runs body(lo, hi, values) over fixed sample blocks and merges the partials
/// in block order. body returns its scalar contribution.
template <class Body>
Partial blocked_sum(std::size_t samples, std::size_t width, Body&& body) {
    const std::size_t nb = parallel::block_count(samples, parallel::kReductionBlock);
    Partial init{0.0, std::vector<double>(width, 0.0)};
    auto parts = parallel::map_blocks(nb, init, [&](std::size_t b) {
        Partial acc{0.0, std::vector<double>(width, 0.0)};
        const std::size_t lo = b * parallel::kReductionBlock;
        const std::size_t hi = std::min(samples, lo + parallel::kReductionBlock);
        acc.scalar = body(lo, hi, std::span<double>(acc.values));
        return acc;
    });
    Partial total = init;
    for (const auto& part : parts) {
        total.scalar += part.scalar;
        for (std::size_t k = 0; k < width; ++k) total.values[k] += part.values[k];
    }
    return total;
}

}  // namespace

RiskGradient evaluate(const Params& p, const LossDescriptor& loss, const Dataset& data) {
    check_shapes(p, data);
    const std::size_t n = data.input_dim();
    const std::size_t m = data.output_dim();
    // values layout: A (n*m, row-major) followed by gbar (m).
    auto total = blocked_sum(data.size(), n * m + m, [&](std::size_t lo, std::size_t hi, std::span<double> acc) {
        std::vector<double> z(m), g(m);
        double risk = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto x = data.inputs.row(i);
            forward(p, x, z);
            risk += loss_value_grad(loss, z, data.targets.row(i), g);
            for (std::size_t r = 0; r < n; ++r) {
                const double xr = x[r];
                double* arow = acc.data() + r * m;
                for (std::size_t c = 0; c < m; ++c) arow[c] += xr * g[c];
            }
            for (std::size_t c = 0; c < m; ++c) acc[n * m + c] += g[c];
        }
        return risk;
    });
    const double inv_n = 1.0 / static_cast<double>(data.size());
    RiskGradient out{total.scalar * inv_n, RealMatrix(n, m), Vector<double>(m)};
    for (std::size_t k = 0; k < n * m; ++k) out.a.data()[k] = total.values[k] * inv_n;
    for (std::size_t c = 0; c < m; ++c) out.mean_grad[c] = total.values[n * m + c] * inv_n;
    return out;
}

double empirical_risk(const Params& p, const LossDescriptor& loss, const Dataset& data) {
    check_shapes(p, data);
    const std::size_t m = data.output_dim();
    auto total = blocked_sum(data.size(), 0, [&](std::size_t lo, std::size_t hi, std::span<double>) {
        std::vector<double> z(m), g(m);
        double risk = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            forward(p, data.inputs.row(i), z);
            risk += loss_value_grad(loss, z, data.targets.row(i), g);
        }
        return risk;
    });
    return total.scalar / static_cast<double>(data.size());
}

RealMatrix empirical_A(const Params& p, const LossDescriptor& loss, const Dataset& data) {
    return evaluate(p, loss, data).a;
}

Moments2 input_moments(const Dataset& data) {
    const std::size_t n = data.input_dim();
    const double inv_n = 1.0 / static_cast<double>(data.size());
    auto sums = blocked_sum(data.size(), n, [&](std::size_t lo, std::size_t hi, std::span<double> acc) {
        for (std::size_t i = lo; i < hi; ++i) {
            const auto x = data.inputs.row(i);
            for (std::size_t r = 0; r < n; ++r) acc[r] += x[r];
        }
        return 0.0;
    });
    Vector<double> mean(n);
    for (std::size_t r = 0; r < n; ++r) mean[r] = sums.values[r] * inv_n;
    auto cov = blocked_sum(data.size(), n * n, [&](std::size_t lo, std::size_t hi, std::span<double> acc) {
        std::vector<double> d(n);
        for (std::size_t i = lo; i < hi; ++i) {
            const auto x = data.inputs.row(i);
            for (std::size_t r = 0; r < n; ++r) d[r] = x[r] - mean[r];
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = r; c < n; ++c) acc[r * n + c] += d[r] * d[c];
        }
        return 0.0;
    });
    RealMatrix c(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t q = r; q < n; ++q) c(r, q) = c(q, r) = cov.values[r * n + q] * inv_n;
    return {std::move(mean), std::move(c)};
}

InnerProductSpace<double> build_x_metric(const Dataset& data, double shrinkage) {
    if (shrinkage < 0.0) throw DomainError("covariance shrinkage must be non-negative");
    if (data.size() < 2) throw DomainError("covariance metric needs at least two samples");
    auto mom = input_moments(data);
    const std::size_t n = data.input_dim();
    double mean_diag = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean_diag += mom.covariance(r, r);
    mean_diag /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) mom.covariance(r, r) += shrinkage * mean_diag;
    // R_X = C^-1; cholesky(C) reports a singular covariance.
    const auto chol = cholesky(mom.covariance);
    return InnerProductSpace<double>(chol.inverse());
}

InnerProductSpace<double> build_y_metric(const Params& p, const LossDescriptor& loss, const Dataset& data,
                                         YMetric mode, double damping) {
    if (damping < 0.0) throw DomainError("damping must be non-negative");
    const std::size_t m = data.output_dim();
    if (mode == YMetric::identity) return InnerProductSpace<double>::standard(m);
    check_shapes(p, data);
    auto total = blocked_sum(data.size(), m * m, [&](std::size_t lo, std::size_t hi, std::span<double> acc) {
        std::vector<double> z(m), g(m), e(m, 0.0), col(m);
        for (std::size_t i = lo; i < hi; ++i) {
            forward(p, data.inputs.row(i), z);
            const auto y = data.targets.row(i);
            if (mode == YMetric::empirical_fisher) {
                loss_value_grad(loss, z, y, g);
                for (std::size_t r = 0; r < m; ++r)
                    for (std::size_t c = 0; c < m; ++c) acc[r * m + c] += g[r] * g[c];
            } else {
                for (std::size_t c = 0; c < m; ++c) {
                    e[c] = 1.0;
                    loss_hess_apply(loss, z, y, e, col);
                    e[c] = 0.0;
                    for (std::size_t r = 0; r < m; ++r) acc[r * m + c] += col[r];
                }
            }
        }
        return 0.0;
    });
    const double inv_n = 1.0 / static_cast<double>(data.size());
    RealMatrix g(m, m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) g(r, c) = total.values[r * m + c] * inv_n;
    // Symmetric by construction up to the order of products; enforce exactly.
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = r + 1; c < m; ++c) g(r, c) = g(c, r) = 0.5 * (g(r, c) + g(c, r));
    for (std::size_t r = 0; r < m; ++r) g(r, r) += damping;
    return InnerProductSpace<double>(g);
}

Metrics build_metrics(const Params& p, const LossDescriptor& loss, const Dataset& data,
                      const PreconditionerSpec& spec) {
    auto x = spec.x_metric == XMetric::identity ? InnerProductSpace<double>::standard(data.input_dim())
                                                : build_x_metric(data, spec.shrinkage);
    auto y = build_y_metric(p, loss, data, spec.y_metric, spec.damping);
    return {std::move(x), std::move(y)};
}

Step grad_step(const RiskGradient& g, const Metrics& metrics) {
    if (g.a.rows() != metrics.x.dim() || g.a.cols() != metrics.y.dim()) {
        throw DimensionError("metrics do not conform to the gradient");
    }
    RealMatrix ds = metrics.y.solve(transpose(g.a) * metrics.x.gram());
    ds *= -1.0;
    auto db = metrics.y.solve(std::span<const double>(g.mean_grad));
    for (auto& v : db) v = -v;
    return {std::move(ds), std::move(db)};
}

Step grad_step(const Params& p, const LossDescriptor& loss, const Dataset& data, const PreconditionerSpec& spec) {
    return grad_step(evaluate(p, loss, data), build_metrics(p, loss, data, spec));
}

double metric_norm(const Step& s, const Metrics& metrics) {
    const MetrizedMap<double> map(metrics.x, metrics.y, s.weights);
    const double w = frob_inner(map, map);
    const double b = metrics.y.norm2(s.bias);
    return std::sqrt(std::max(0.0, w + b));
}

Step hessian_vector_product(const Params& p, const LossDescriptor& loss, const Dataset& data, const Step& dir) {
    check_shapes(p, data);
    const std::size_t n = data.input_dim();
    const std::size_t m = data.output_dim();
    const Params d{dir.weights, dir.bias};
    check_shapes(d, data);
    auto total = blocked_sum(data.size(), n * m + m, [&](std::size_t lo, std::size_t hi, std::span<double> acc) {
        std::vector<double> z(m), dz(m), w(m);
        for (std::size_t i = lo; i < hi; ++i) {
            const auto x = data.inputs.row(i);
            forward(p, x, z);
            forward(d, x, dz);
            loss_hess_apply(loss, z, data.targets.row(i), dz, w);
            for (std::size_t r = 0; r < m; ++r) {
                double* srow = acc.data() + r * n;
                for (std::size_t c = 0; c < n; ++c) srow[c] += w[r] * x[c];
                acc[n * m + r] += w[r];
            }
        }
        return 0.0;
    });
    const double inv_n = 1.0 / static_cast<double>(data.size());
    Step out{RealMatrix(m, n), Vector<double>(m)};
    for (std::size_t k = 0; k < n * m; ++k) out.weights.data()[k] = total.values[k] * inv_n;
    for (std::size_t r = 0; r < m; ++r) out.bias[r] = total.values[n * m + r] * inv_n;
    return out;
}

double largest_hessian_eigenvalue(const Params& p, const LossDescriptor& loss, const Dataset& data,
                                  int iterations) {
    const std::size_t n = data.input_dim();
    const std::size_t m = data.output_dim();
    Step v{RealMatrix(m, n, 1.0), Vector<double>(m, 1.0)};
    auto normalize = [](Step& s) {
        double sq = 0.0;
        for (double x : s.weights.data()) sq += x * x;
        for (double x : s.bias) sq += x * x;
        const double nrm = std::sqrt(sq);
        if (nrm == 0.0) return 0.0;
        s.weights *= 1.0 / nrm;
        for (auto& x : s.bias) x /= nrm;
        return nrm;
    };
    normalize(v);
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        v = hessian_vector_product(p, loss, data, v);
        lambda = normalize(v);
        if (lambda == 0.0) break;
    }
    return lambda;
}

}  // namespace gfrob
