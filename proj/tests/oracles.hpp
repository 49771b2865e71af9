#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "gfrob/precond.hpp"
#include "support.hpp"

namespace testing {

using gfrob::Dataset;
using gfrob::LossDescriptor;
using gfrob::LossKind;
using gfrob::Params;
using gfrob::RealMatrix;

inline constexpr LossKind kLosses[] = {LossKind::squared_error, LossKind::logistic, LossKind::softmax_cross_entropy};

/// Loss values written out independently of the library.
inline double oracle_loss(LossKind kind, const std::vector<double>& z, std::span<const double> y) {
    switch (kind) {
        case LossKind::squared_error: {
            double s = 0.0;
            for (std::size_t k = 0; k < z.size(); ++k) s += 0.5 * (z[k] - y[k]) * (z[k] - y[k]);
            return s;
        }
        case LossKind::logistic:
            return std::log(1.0 + std::exp(-(2.0 * y[0] - 1.0) * z[0]));
        case LossKind::softmax_cross_entropy: {
            double lse = 0.0, zy = 0.0;
            for (std::size_t k = 0; k < z.size(); ++k) {
                lse += std::exp(z[k]);
                if (y[k] == 1.0) zy = z[k];
            }
            return std::log(lse) - zy;
        }
    }
    return 0.0;
}

inline double oracle_risk(LossKind kind, const Params& p, const Dataset& d) {
    double r = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        std::vector<double> z(p.bias);
        for (std::size_t a = 0; a < z.size(); ++a)
            for (std::size_t c = 0; c < d.input_dim(); ++c) z[a] += p.weights(a, c) * d.inputs(i, c);
        r += oracle_loss(kind, z, d.targets.row(i));
    }
    return r / static_cast<double>(d.size());
}

struct Instance {
    LossDescriptor loss;
    Dataset data;
    Params params;
};

inline Instance random_instance(Gen& gen, LossKind kind, std::size_t n_max = 6, std::size_t samples_max = 32) {
    const std::size_t n = gen.dim(1, n_max);
    const std::size_t m = kind == LossKind::logistic ? 1 : gen.dim(kind == LossKind::softmax_cross_entropy ? 2 : 1, 6);
    const std::size_t count = gen.dim(2, samples_max);
    Instance in{{kind, m}, {gen.matrix<double>(count, n), RealMatrix(count, m)}, {gen.matrix<double>(m, n), gen.vector<double>(m)}};
    in.params.weights *= 0.5;
    for (std::size_t i = 0; i < count; ++i) {
        if (kind == LossKind::squared_error) {
            for (std::size_t k = 0; k < m; ++k) in.data.targets(i, k) = gen.normal();
        } else if (kind == LossKind::logistic) {
            in.data.targets(i, 0) = gen.uniform() < 0.5 ? 0.0 : 1.0;
        } else {
            in.data.targets(i, gen.dim(0, m - 1)) = 1.0;
        }
    }
    return in;
}

}  // namespace testing
