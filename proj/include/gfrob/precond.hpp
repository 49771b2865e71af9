#pragma once

#include "gfrob/frobenius.hpp"
#include "gfrob/loss.hpp"

namespace gfrob {

/// N samples: inputs is N x n (rows x_i), targets is N x m (rows y_i).
struct Dataset {
    RealMatrix inputs;
    RealMatrix targets;

    std::size_t size() const noexcept { return inputs.rows(); }
    std::size_t input_dim() const noexcept { return inputs.cols(); }
    std::size_t output_dim() const noexcept { return targets.cols(); }

    /// Row counts agree and every target is admissible for the loss.
    void validate(const LossDescriptor& loss) const;
};

/// Single-layer parameters theta = (S, b) with S: R^n -> R^m.
struct Params {
    RealMatrix weights;  // m x n
    Vector<double> bias; // m

    static Params zeros(std::size_t n, std::size_t m) { return {RealMatrix(m, n), Vector<double>(m, 0.0)}; }
};

/// A direction (dS, db) in parameter space.
struct Step {
    RealMatrix weights;
    Vector<double> bias;
};

/// Empirical risk and first-order data at theta.
struct RiskGradient {
    double risk = 0.0;
    /// A = (1/N) sum x_i l'(S x_i + b; y_i), n x m.
    RealMatrix a;
    /// (1/N) sum l'(S x_i + b; y_i)^T, length m.
    Vector<double> mean_grad;
};

/// Risk, A and the mean loss gradient in one blocked parallel pass.
RiskGradient evaluate(const Params& p, const LossDescriptor& loss, const Dataset& data);

double empirical_risk(const Params& p, const LossDescriptor& loss, const Dataset& data);

/// The n x m matrix representing A in L(Y, X).
RealMatrix empirical_A(const Params& p, const LossDescriptor& loss, const Dataset& data);

enum class XMetric { identity, inv_covariance };
enum class YMetric { identity, expected_hessian, empirical_fisher };

const char* to_string(XMetric m);
const char* to_string(YMetric m);

/// How to build the Riesz maps R_X and R_Y.
struct PreconditionerSpec {
    XMetric x_metric = XMetric::identity;
    /// Covariance shrinkage lambda: C + lambda * mean(diag C) * I.
    double shrinkage = 1e-3;
    YMetric y_metric = YMetric::identity;
    /// Added to the Hessian or Fisher estimate as delta * I.
    double damping = 1e-6;
};

/// The input and output inner-product spaces (R_X, R_Y).
struct Metrics {
    InnerProductSpace<double> x;
    InnerProductSpace<double> y;
};

struct Moments2 {
    Vector<double> mean;
    RealMatrix covariance;
};

/// Empirical mean and biased (1/N) covariance of the inputs.
Moments2 input_moments(const Dataset& data);

/// Mahalanobis metric R_X = (C + lambda mean(diag C) I)^-1.
InnerProductSpace<double> build_x_metric(const Dataset& data, double shrinkage);

/// R_Y from the expected Hessian or the empirical Fisher (mean of g g^T), plus delta I.
InnerProductSpace<double> build_y_metric(const Params& p, const LossDescriptor& loss, const Dataset& data,
                                         YMetric mode, double damping);

Metrics build_metrics(const Params& p, const LossDescriptor& loss, const Dataset& data,
                      const PreconditionerSpec& spec);

/// Steepest-descent direction dS = -R_Y^-1 A^T R_X, db = -R_Y^-1 gbar.
Step grad_step(const RiskGradient& g, const Metrics& metrics);

Step grad_step(const Params& p, const LossDescriptor& loss, const Dataset& data, const PreconditionerSpec& spec);

/// Frobenius-type norm of the step: sqrt(<dS,dS>_{X->Y} + <db,db>_Y).
double metric_norm(const Step& s, const Metrics& metrics);

/// Exact Hessian of the empirical risk applied to a direction. The model is
/// linear in theta, so this is (1/N) sum [l''(z_i) dz_i x_i^T, l''(z_i) dz_i].
Step hessian_vector_product(const Params& p, const LossDescriptor& loss, const Dataset& data, const Step& dir);

/// Largest Hessian eigenvalue by power iteration from a fixed start vector.
double largest_hessian_eigenvalue(const Params& p, const LossDescriptor& loss, const Dataset& data,
                                  int iterations = 100);

}  // namespace gfrob
