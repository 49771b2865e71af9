#include "gfrob/train.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "gfrob/rng.hpp"

namespace gfrob {

const char* to_string(TaskKind k) {
    return k == TaskKind::least_squares ? "lsq" : "logistic";
}

LossDescriptor loss_for(TaskKind kind, std::size_t m) {
    if (kind == TaskKind::logistic) {
        if (m != 1) throw DimensionError("logistic tasks have a single output");
        return {LossKind::logistic, 1};
    }
    return {LossKind::squared_error, m};
}

namespace {

/// Orthonormalize the columns in place (modified Gram-Schmidt).
void orthonormalize_columns(RealMatrix& q) {
    const std::size_t n = q.rows();
    for (std::size_t j = 0; j < q.cols(); ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d += q(i, k) * q(i, j);
            for (std::size_t i = 0; i < n; ++i) q(i, j) -= d * q(i, k);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += q(i, j) * q(i, j);
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
    }
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

constexpr std::uint64_t kTaskTag = 0x7461736b;

}  // namespace

Task generate_task(const TaskSpec& spec) {
    if (spec.n == 0 || spec.m == 0 || spec.samples == 0) throw DimensionError("task dimensions must be positive");
    if (!(spec.condition >= 1.0)) throw DomainError("condition number must be >= 1");
    if (spec.noise < 0.0) throw DomainError("noise level must be non-negative");
    const LossDescriptor loss = loss_for(spec.kind, spec.m);
    const std::size_t n = spec.n, m = spec.m, count = spec.samples;

    RngStream rng(spec.seed, kTaskTag, 0);
    RealMatrix rot = rng.normal_matrix<double>(n, n);
    orthonormalize_columns(rot);
    std::vector<double> root(n, 1.0);
    for (std::size_t k = 0; k < n && n > 1; ++k) {
        const double lambda = std::pow(spec.condition, -static_cast<double>(k) / static_cast<double>(n - 1));
        root[k] = std::sqrt(lambda);
    }
    // Columns of mix = R diag(sqrt(lambda)).
    RealMatrix mix = rot;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) mix(i, k) *= root[k];

    RealMatrix inputs(count, n);
    std::vector<double> mean(n, 0.0);
    for (std::size_t s = 0; s < count; ++s) {
        const auto u = rng.normal_vector<double>(n);
        const auto x = mix * u;
        for (std::size_t i = 0; i < n; ++i) {
            inputs(s, i) = x[i];
            mean[i] += x[i];
        }
    }
    for (auto& v : mean) v /= static_cast<double>(count);
    for (std::size_t s = 0; s < count; ++s)
        for (std::size_t i = 0; i < n; ++i) inputs(s, i) -= mean[i];

    Params truth{rng.normal_matrix<double>(m, n), rng.normal_vector<double>(m)};
    RealMatrix targets(count, m);
    auto logit = [&](std::size_t s, std::size_t r) {
        double z = truth.bias[r];
        for (std::size_t i = 0; i < n; ++i) z += truth.weights(r, i) * inputs(s, i);
        return z;
    };

    if (spec.kind == TaskKind::logistic) {
        double sq = 0.0;
        for (std::size_t s = 0; s < count; ++s) sq += logit(s, 0) * logit(s, 0);
        const double sd = std::sqrt(sq / static_cast<double>(count));
        if (sd > 0.0) {
            const double scale = 2.0 / sd;
            truth.weights *= scale;
            for (auto& b : truth.bias) b *= scale;
        }
        for (std::size_t s = 0; s < count; ++s) targets(s, 0) = rng.uniform() < sigmoid(logit(s, 0)) ? 1.0 : 0.0;
    } else {
        for (std::size_t s = 0; s < count; ++s)
            for (std::size_t r = 0; r < m; ++r) {
                const double eps = spec.noise > 0.0 ? spec.noise * rng.normal() : 0.0;
                targets(s, r) = logit(s, r) + eps;
            }
    }
    return {Dataset{std::move(inputs), std::move(targets)}, std::move(truth), loss};
}

std::optional<std::size_t> RunRecord::iterations_to(double rel) const {
    if (rows.empty()) return std::nullopt;
    const double target = rel * rows.front().risk;
    for (const auto& r : rows) {
        if (r.risk <= target) return r.iter;
    }
    return std::nullopt;
}

double vanilla_step_size(const Dataset& data, const LossDescriptor& loss, const Params& at) {
    const double l = largest_hessian_eigenvalue(at, loss, data, 100);
    if (!(l > 0.0)) throw ConsistencyError("Hessian has no positive curvature; cannot pick 1/L");
    return 1.0 / l;
}

RunRecord run_gd(const Dataset& data, const LossDescriptor& loss, const RunConfig& config) {
    if (!(config.step_size > 0.0)) throw DomainError("step size must be positive");
    if (config.iterations < 1) throw DomainError("iteration count must be at least 1");
    if (config.refresh < 1) throw DomainError("metric refresh period must be at least 1");
    data.validate(loss);

    const auto start = std::chrono::steady_clock::now();
    RunRecord rec;
    Params params = config.initial.value_or(Params::zeros(data.input_dim(), data.output_dim()));

    auto x_metric = config.precond.x_metric == XMetric::identity
                        ? InnerProductSpace<double>::standard(data.input_dim())
                        : build_x_metric(data, config.precond.shrinkage);
    Metrics metrics{x_metric, InnerProductSpace<double>::standard(data.output_dim())};

    double risk0 = 0.0;
    for (std::size_t k = 0;; ++k) {
        const RiskGradient g = evaluate(params, loss, data);
        if (k == 0) risk0 = g.risk;
        if (!std::isfinite(g.risk) || (risk0 > 0.0 && g.risk > config.divergence_factor * risk0)) {
            rec.rows.push_back({k, g.risk, std::numeric_limits<double>::quiet_NaN(), config.step_size});
            rec.diverged = true;
            rec.message = "diverged at iteration " + std::to_string(k) + ": risk " + std::to_string(g.risk) +
                          " exceeds " + std::to_string(config.divergence_factor) + " x initial risk " +
                          std::to_string(risk0);
            break;
        }
        if (k % config.refresh == 0 && config.precond.y_metric != YMetric::identity) {
            metrics.y = build_y_metric(params, loss, data, config.precond.y_metric, config.precond.damping);
        }
        Step step = grad_step(g, metrics);
        if (config.freeze_bias) std::fill(step.bias.begin(), step.bias.end(), 0.0);
        rec.rows.push_back({k, g.risk, metric_norm(step, metrics), config.step_size});

        if (config.stop_relative > 0.0 && g.risk <= config.stop_relative * risk0) break;
        if (k == config.iterations) break;

        for (std::size_t i = 0; i < params.weights.size(); ++i)
            params.weights.data()[i] += config.step_size * step.weights.data()[i];
        for (std::size_t r = 0; r < params.bias.size(); ++r) params.bias[r] += config.step_size * step.bias[r];
    }
    rec.final_params = std::move(params);
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

}  // namespace gfrob
