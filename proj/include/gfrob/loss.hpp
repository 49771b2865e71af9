#pragma once

#include <span>
#include <string_view>

#include "gfrob/matrix.hpp"

namespace gfrob {

enum class LossKind { squared_error, logistic, softmax_cross_entropy };

const char* to_string(LossKind k);

/// Loss l(z; y) on model outputs z in R^m.
///
/// squared_error: 1/2 |z - y|^2, any real target of length m.
/// logistic: m = 1, y in {0, 1}, log(1 + exp(-(2y - 1) z)).
/// softmax_cross_entropy: y one-hot of length m, -log softmax(z)[class].
struct LossDescriptor {
    LossKind kind = LossKind::squared_error;
    std::size_t out_dim = 1;
};

/// Validates the target against the descriptor; throws DomainError or DimensionError.
void check_target(const LossDescriptor& loss, std::span<const double> y);

/// Class index of a one-hot target.
std::size_t target_class(std::span<const double> y);

/// One-hot row of length m.
Vector<double> one_hot(std::size_t cls, std::size_t m);

double loss_value(const LossDescriptor& loss, std::span<const double> z, std::span<const double> y);

/// l'(z; y) as a row (dual) vector of length m.
Vector<double> loss_grad(const LossDescriptor& loss, std::span<const double> z, std::span<const double> y);

/// l''(z; y), m x m symmetric positive semidefinite.
RealMatrix loss_hess(const LossDescriptor& loss, std::span<const double> z, std::span<const double> y);

/// Value and gradient in one pass; grad must have length m. No target validation.
double loss_value_grad(const LossDescriptor& loss, std::span<const double> z, std::span<const double> y,
                       std::span<double> grad);

/// l''(z; y) dz without forming the matrix. No target validation.
void loss_hess_apply(const LossDescriptor& loss, std::span<const double> z, std::span<const double> y,
                     std::span<const double> dz, std::span<double> out);

}  // namespace gfrob
