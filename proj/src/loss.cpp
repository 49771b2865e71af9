#include "gfrob/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gfrob {

const char* to_string(LossKind k) {
    switch (k) {
        case LossKind::squared_error: return "squared_error";
        case LossKind::logistic: return "logistic";
        case LossKind::softmax_cross_entropy: return "softmax_cross_entropy";
    }
    return "?";
}

namespace {

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

/// log(1 + exp(t)) without overflow.
double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

void softmax(std::span<const double> z, std::span<double> p) {
    const double zmax = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        p[k] = std::exp(z[k] - zmax);
        s += p[k];
    }
    for (auto& x : p) x /= s;
}

void check_lengths(const LossDescriptor& loss, std::span<const double> z, std::span<const double> y) {
    if (z.size() != loss.out_dim || y.size() != loss.out_dim) {
        throw DimensionError("loss: expected output and target of length " + std::to_string(loss.out_dim));
    }
}

}  // namespace

std::size_t target_class(std::span<const double> y) {
    std::size_t cls = y.size();
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (y[k] == 1.0 && cls == y.size()) {
            cls = k;
        } else if (y[k] != 0.0) {
            throw DomainError("softmax target is not one-hot");
        }
    }
    if (cls == y.size()) throw DomainError("softmax target has no active class");
    return cls;
}

Vector<double> one_hot(std::size_t cls, std::size_t m) {
    if (cls >= m) throw DomainError("class " + std::to_string(cls) + " out of range for " + std::to_string(m) + " outputs");
    Vector<double> y(m, 0.0);
    y[cls] = 1.0;
    return y;
}

void check_target(const LossDescriptor& loss, std::span<const double> y) {
    if (y.size() != loss.out_dim) throw DimensionError("target length does not match loss output dimension");
    switch (loss.kind) {
        case LossKind::squared_error:
            break;
        case LossKind::logistic:
            if (loss.out_dim != 1) throw DimensionError("logistic loss needs a single output");
            if (y[0] != 0.0 && y[0] != 1.0) throw DomainError("logistic target must be 0 or 1");
            break;
        case LossKind::softmax_cross_entropy:
            target_class(y);
            break;
    }
}

double loss_value_grad(const LossDescriptor& loss, std::span<const double> z, std::span<const double> y,
                       std::span<double> grad) {
    switch (loss.kind) {
        case LossKind::squared_error: {
            double v = 0.0;
            for (std::size_t k = 0; k < z.size(); ++k) {
                grad[k] = z[k] - y[k];
                v += grad[k] * grad[k];
            }
            return 0.5 * v;
        }
        case LossKind::logistic: {
            const double s = 2.0 * y[0] - 1.0;
            grad[0] = sigmoid(z[0]) - y[0];
            return softplus(-s * z[0]);
        }
        case LossKind::softmax_cross_entropy: {
            const std::size_t cls = target_class(y);
            softmax(z, grad);
            const double zmax = *std::max_element(z.begin(), z.end());
            double s = 0.0;
            for (double zk : z) s += std::exp(zk - zmax);
            grad[cls] -= 1.0;
            return zmax + std::log(s) - z[cls];
        }
    }
    return 0.0;
}

void loss_hess_apply(const LossDescriptor& loss, std::span<const double> z, std::span<const double> y,
                     std::span<const double> dz, std::span<double> out) {
    (void)y;
    switch (loss.kind) {
        case LossKind::squared_error:
            std::copy(dz.begin(), dz.end(), out.begin());
            return;
        case LossKind::logistic: {
            const double p = sigmoid(z[0]);
            out[0] = p * (1.0 - p) * dz[0];
            return;
        }
        case LossKind::softmax_cross_entropy: {
            softmax(z, out);
            double pd = 0.0;
            for (std::size_t k = 0; k < z.size(); ++k) pd += out[k] * dz[k];
            for (std::size_t k = 0; k < z.size(); ++k) out[k] = out[k] * (dz[k] - pd);
            return;
        }
    }
}

double loss_value(const LossDescriptor& loss, std::span<const double> z, std::span<const double> y) {
    check_lengths(loss, z, y);
    check_target(loss, y);
    Vector<double> g(z.size());
    return loss_value_grad(loss, z, y, g);
}

Vector<double> loss_grad(const LossDescriptor& loss, std::span<const double> z, std::span<const double> y) {
    check_lengths(loss, z, y);
    check_target(loss, y);
    Vector<double> g(z.size());
    loss_value_grad(loss, z, y, g);
    return g;
}

RealMatrix loss_hess(const LossDescriptor& loss, std::span<const double> z, std::span<const double> y) {
    check_lengths(loss, z, y);
    check_target(loss, y);
    const std::size_t m = z.size();
    switch (loss.kind) {
        case LossKind::squared_error:
            return RealMatrix::identity(m);
        case LossKind::logistic: {
            const double p = sigmoid(z[0]);
            return RealMatrix(1, 1, p * (1.0 - p));
        }
        case LossKind::softmax_cross_entropy: {
            Vector<double> p(m);
            softmax(z, p);
            RealMatrix h(m, m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) h(i, j) = (i == j ? p[i] : 0.0) - p[i] * p[j];
            return h;
        }
    }
    return RealMatrix::identity(m);
}

}  // namespace gfrob
