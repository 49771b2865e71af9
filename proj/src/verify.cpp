#include "gfrob/verify.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "gfrob/frobenius.hpp"

namespace gfrob {

template <Scalar T>
Matrix<T> random_hpd(std::size_t n, RngStream& rng) {
    const Matrix<T> b = rng.normal_matrix<T>(n, n);
    Matrix<T> g = b * conj_transpose(b);
    g *= T(1.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        g(i, i) = T(real_part(g(i, i)) + 0.1);
        for (std::size_t j = 0; j < i; ++j) g(j, i) = conj(g(i, j));
    }
    return g;
}

template <Scalar T>
Matrix<T> random_unitary(std::size_t n, RngStream& rng) {
    Matrix<T> q = rng.normal_matrix<T>(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        // Two passes of modified Gram-Schmidt keep the columns orthonormal to roundoff.
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                T d{};
                for (std::size_t i = 0; i < n; ++i) d += conj(q(i, k)) * q(i, j);
                for (std::size_t i = 0; i < n; ++i) q(i, j) -= d * q(i, k);
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += abs2(q(i, j));
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
    }
    return q;
}

namespace {

enum Property : std::size_t {
    kMatrixVsBasis,
    kAdjoint,
    kHermitianSymmetry,
    kIdentityReduction,
    kConjTrace,
    kLinearity,
    kTraceSumBases,
    kLeftRight,
    kPropertyCount
};

struct PropertySpec {
    const char* name;
    double base;  // threshold at tol = 1e-9
};

constexpr PropertySpec kProperties[kPropertyCount] = {
    {"frob_inner.matrix_vs_basis", 1e-9},
    {"frob_inner.adjoint_invariance", 1e-9},
    {"frob_inner.hermitian_symmetry", 1e-12},
    {"frob_inner.identity_reduction", 1e-12},
    {"trace.conjugate_swap", 1e-12},
    {"metric_trace.linearity", 1e-12},
    {"metric_trace.basis_sum_two_bases", 1e-9},
    {"metric_trace.left_vs_right", 1e-9},
};

template <Scalar T>
double rel(T a, T b, double scale) {
    const double r = std::abs(a - b) / std::max(scale, std::numeric_limits<double>::min());
    return std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
}

std::size_t draw_dim(RngStream& rng, std::size_t dim_max) {
    return 1 + static_cast<std::size_t>(rng.engine()() % dim_max);
}

template <Scalar T>
void run_field(const VerifyOptions& opts, std::vector<PropertyResult>& out) {
    const double scale_tol = opts.tol / 1e-9;
    const std::size_t first = out.size();
    for (std::size_t p = 0; p < kPropertyCount; ++p) {
        out.push_back({kProperties[p].name, field_of<T>, 0.0, kProperties[p].base * scale_tol, opts.trials});
    }
    auto record = [&](Property p, double r) {
        double& w = out[first + p].worst;
        if (!(r <= w)) w = r;
    };
    const std::uint64_t tag = is_complex_v<T> ? 0x5643 : 0x5652;

    for (std::size_t trial = 0; trial < opts.trials; ++trial) {
        RngStream rng(opts.seed, tag, trial);
        const std::size_t n = draw_dim(rng, opts.dim_max);
        const std::size_t m = draw_dim(rng, opts.dim_max);
        const InnerProductSpace<T> dom(random_hpd<T>(n, rng));
        const InnerProductSpace<T> cod(random_hpd<T>(m, rng));
        const MetrizedMap<T> s(dom, cod, rng.normal_matrix<T>(m, n));
        const MetrizedMap<T> t(dom, cod, rng.normal_matrix<T>(m, n));

        const T st = frob_inner(s, t);
        const double cs = std::sqrt(std::abs(frob_inner(s, s)) * std::abs(frob_inner(t, t)));
        record(kMatrixVsBasis, rel(st, frob_inner_basis(s, t, dom.orthonormal_basis()), cs));
        record(kAdjoint, rel(st, frob_inner(adjoint_map(s), adjoint_map(t)), cs));
        record(kHermitianSymmetry, rel(st, conj(frob_inner(t, s)), cs));

        const auto s0 = MetrizedMap<T>::standard(s.rep());
        const auto t0 = MetrizedMap<T>::standard(t.rep());
        record(kIdentityReduction, rel(frob_inner(s0, t0), frob_inner_entrywise(s.rep(), t.rep()),
                                       frobenius_norm(s.rep()) * frobenius_norm(t.rep())));

        const Matrix<T> a = rng.normal_matrix<T>(n, n);
        const Matrix<T> b = rng.normal_matrix<T>(n, n);
        const double ab = frobenius_norm(a) * frobenius_norm(b);
        record(kConjTrace, rel(trace(compose_conjlinear(a, b)), conj(trace(compose_conjlinear(b, a))), ab));

        const SesquilinearForm<T> fa(dom, a);
        const SesquilinearForm<T> fb(dom, b);
        const T alpha = rng.normal_scalar<T>();
        const T beta = rng.normal_scalar<T>();
        const double ginv = frobenius_norm(dom.inverse_gram());
        const T lhs = metric_trace(alpha * fa + beta * fb);
        const T rhs = alpha * metric_trace(fa) + beta * metric_trace(fb);
        record(kLinearity,
               rel(lhs, rhs, ginv * (std::abs(alpha) * frobenius_norm(a) + std::abs(beta) * frobenius_norm(b))));

        const Matrix<T>& q1 = dom.orthonormal_basis().columns;
        const Matrix<T> q2 = q1 * random_unitary<T>(n, rng);
        const T mt = metric_trace(fa);
        const double scale_a = ginv * frobenius_norm(a);
        record(kTraceSumBases, std::max(rel(mt, metric_trace_basis(fa, q1), scale_a),
                                        rel(mt, metric_trace_basis(fa, q2), scale_a)));
        record(kLeftRight, rel(mt, metric_trace_right(fa), scale_a));
    }
}

}  // namespace

std::vector<PropertyResult> run_identity_suite(const VerifyOptions& opts) {
    if (opts.trials == 0) throw DomainError("verify needs at least one trial");
    if (opts.dim_max == 0) throw DomainError("verify needs dim-max >= 1");
    if (!(opts.tol > 0.0)) throw DomainError("verify tolerance must be positive");
    std::vector<PropertyResult> out;
    if (opts.real) run_field<double>(opts, out);
    if (opts.complex) run_field<complex>(opts, out);
    return out;
}

std::string format_result(const PropertyResult& r) {
    return fmt::format("{} {} [{}] worst={:.3e} threshold={:.3e} trials={}", r.passed() ? "PASS" : "FAIL", r.name,
                       to_string(r.field), r.worst, r.threshold, r.trials);
}

template Matrix<double> random_hpd(std::size_t, RngStream&);
template Matrix<complex> random_hpd(std::size_t, RngStream&);
template Matrix<double> random_unitary(std::size_t, RngStream&);
template Matrix<complex> random_unitary(std::size_t, RngStream&);

}  // namespace gfrob
