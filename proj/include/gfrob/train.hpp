#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfrob/precond.hpp"

namespace gfrob {

enum class TaskKind { least_squares, logistic };

const char* to_string(TaskKind k);

/// Synthetic single-layer regression or classification problem.
struct TaskSpec {
    TaskKind kind = TaskKind::least_squares;
    std::size_t n = 10;      // input dimension
    std::size_t m = 1;       // output dimension (1 for logistic)
    std::size_t samples = 1000;
    double condition = 1.0;  // input covariance condition number kappa
    double noise = 0.0;      // sigma
    std::uint64_t seed = 0;
};

struct Task {
    Dataset data;
    Params truth;  // planted (S*, b*)
    LossDescriptor loss;
};

/// Gaussian inputs with covariance R diag(lambda) R^T, lambda geometrically
/// spaced in [1/kappa, 1] and R a random rotation; the empirical input mean is
/// subtracted. Least squares targets are S* x + b* + sigma * noise; logistic
/// targets are Bernoulli draws of sigmoid(S* x + b*), with the planted logit
/// scaled to standard deviation 2.
Task generate_task(const TaskSpec& spec);

/// The loss a task kind is trained with.
LossDescriptor loss_for(TaskKind kind, std::size_t m);

struct RunConfig {
    PreconditionerSpec precond;
    double step_size = 1.0;
    std::size_t iterations = 100;
    /// Rebuild R_Y every `refresh` iterations; R_X is built once.
    std::size_t refresh = 1;
    /// Keep the bias at its initial value.
    bool freeze_bias = false;
    /// Stop once risk <= stop_relative * initial risk (0 disables).
    double stop_relative = 0.0;
    /// Abort when risk exceeds this multiple of the initial risk.
    double divergence_factor = 1e6;
    std::optional<Params> initial;
};

struct RunRow {
    std::size_t iter = 0;
    double risk = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
};

struct RunRecord {
    std::vector<RunRow> rows;
    Params final_params;
    bool diverged = false;
    std::string message;
    double seconds = 0.0;

    double initial_risk() const { return rows.empty() ? 0.0 : rows.front().risk; }
    double final_risk() const { return rows.empty() ? 0.0 : rows.back().risk; }

    /// First logged iteration with risk <= rel * initial risk.
    std::optional<std::size_t> iterations_to(double rel) const;
};

/// Fixed-step preconditioned gradient descent. Row k logs the risk and the
/// metric gradient norm at iterate k, for k = 0..iterations (fewer on early stop).
RunRecord run_gd(const Dataset& data, const LossDescriptor& loss, const RunConfig& config);

/// 1 / L_hat with L_hat from 100 power iterations at the initial parameters.
double vanilla_step_size(const Dataset& data, const LossDescriptor& loss, const Params& at);

}  // namespace gfrob
