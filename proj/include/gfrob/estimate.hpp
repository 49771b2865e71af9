#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "gfrob/frobenius.hpp"
#include "gfrob/rng.hpp"

namespace gfrob {

/// Isometry-invariant sampling distributions on an inner-product space.
enum class LawKind { sphere, ball, gaussian };

const char* to_string(LawKind k);
LawKind parse_law(std::string_view name);

template <Scalar T>
struct SamplingLaw {
    LawKind kind;
    InnerProductSpace<T> space;
    std::uint64_t seed = 0;
};

/// Samples are drawn in batches of this size, one RNG substream per batch.
inline constexpr std::size_t kSampleBatch = 1024;

template <Scalar T>
struct EstimateReport {
    T estimate{};
    std::optional<T> exact;
    std::size_t sample_count = 0;
    /// Sample standard deviation of the per-draw terms divided by sqrt(count).
    double standard_error = 0.0;
    std::uint64_t seed = 0;
    LawKind law = LawKind::sphere;

    /// Relative floor on the standard error used by z_score.
    static constexpr double kRoundoffFloor = 1e-12;

    /// |estimate - exact| / max(standard_error, 1e-12 * max(|exact|, |estimate|));
    /// 0 when the difference vanishes.
    double z_score() const;
};

/// Monte-Carlo estimate of the matrix of R_V^-1 (as a conjugate linear map),
/// i.e. conj(G)^-1, with per-entry standard errors.
template <Scalar T>
struct RieszInverseEstimate {
    Matrix<T> estimate;
    RealMatrix standard_error;
    std::size_t sample_count = 0;
};

/// Draw `count` vectors from the law. Sphere: Q u / |u|_2 for standard normal u
/// and the space's orthonormal basis Q; ball: a sphere draw scaled by U^(1/d);
/// gaussian: Q u, which has covariance R_V^-1.
template <Scalar T>
std::vector<Vector<T>> sample(const SamplingLaw<T>& law, std::size_t count);

template <Scalar T>
RieszInverseEstimate<T> estimate_riesz_inverse(const SamplingLaw<T>& law, std::size_t count);

/// trace_V a as n * E[a(v,v)] (sphere) or n * E[a(v,v) / <v,v>] (ball, gaussian).
template <Scalar T>
EstimateReport<T> estimate_metric_trace(const SesquilinearForm<T>& form, const SamplingLaw<T>& law,
                                        std::size_t count);

/// Classical trace of a square matrix on the standard space. The gaussian law
/// is plain Hutchinson, E[v^T A conj(v)]; sphere and ball use the
/// metric-trace weights.
template <Scalar T>
EstimateReport<T> estimate_classical_trace(const Matrix<T>& a, LawKind kind, std::size_t count,
                                           std::uint64_t seed);

/// <S, T>_{V->W} as n * E[<S v, T v>_W], weighted by 1/<v,v>_V for ball and gaussian.
template <Scalar T>
EstimateReport<T> estimate_frob_inner(const MetrizedMap<T>& s, const MetrizedMap<T>& t,
                                      const SamplingLaw<T>& law, std::size_t count);

namespace detail {

/// Running mean and sum of squared deviations for a fixed number of
/// components. Complex components use |x - mean|^2.
template <Scalar T>
class Moments {
public:
    explicit Moments(std::size_t components = 1) : mean_(components), m2_(components) {}

    void add(std::span<const T> x);
    void merge(const Moments& o);

    std::size_t count() const noexcept { return count_; }
    std::span<const T> mean() const noexcept { return mean_; }
    /// Sample variance (n - 1 normalizer); 0 for fewer than two draws.
    double variance(std::size_t k) const noexcept {
        return count_ > 1 ? m2_[k] / static_cast<double>(count_ - 1) : 0.0;
    }

private:
    std::size_t count_ = 0;
    Vector<T> mean_;
    std::vector<double> m2_;
};

/// One draw from the law using the supplied stream.
template <Scalar T>
Vector<T> draw(const SamplingLaw<T>& law, RngStream& rng);

/// Substream tag for a law, so different laws with one seed are independent.
std::uint64_t law_tag(LawKind k);

/// Per-draw weight n (sphere) or n / <v,v> (ball, gaussian).
template <Scalar T>
double law_weight(const SamplingLaw<T>& law, std::span<const T> v);

}  // namespace detail

}  // namespace gfrob
