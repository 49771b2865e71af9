#include "gfrob/parallel.hpp"
#include "gfrob/precond.hpp"
#include "gfrob/reference.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gfrob;
using testing::Gen;
using testing::rel_err;
using testing::kLosses;
using testing::oracle_risk;
using testing::random_instance;

namespace {

Metrics random_metrics(Gen& gen, std::size_t n, std::size_t m, double cond) {
    return {make_space(gen.hpd<double>(n, cond)), make_space(gen.hpd<double>(m, cond))};
}

Params shifted(const Params& p, const Step& s, double t) {
    Params q = p;
    for (std::size_t k = 0; k < q.weights.size(); ++k) q.weights.data()[k] += t * s.weights.data()[k];
    for (std::size_t k = 0; k < q.bias.size(); ++k) q.bias[k] += t * s.bias[k];
    return q;
}

/// Directional derivative of the risk: trace(A P_S) + gbar . p_b.
double directional(const RiskGradient& g, const Step& s) {
    return trace(g.a * s.weights) + dot<double>(g.mean_grad, s.bias);
}

}  // namespace

TEST_CASE("loss examples") {
    const LossDescriptor sq{LossKind::squared_error, 2};
    const Vector<double> z{0.3, -1.2};
    CHECK(loss_value(sq, z, z) == 0.0);
    CHECK(loss_grad(sq, z, z) == Vector<double>{0.0, 0.0});
    CHECK(loss_hess(sq, z, z) == RealMatrix::identity(2));

    const LossDescriptor lg{LossKind::logistic, 1};
    const Vector<double> zero{0.0}, one{1.0};
    CHECK(loss_value(lg, zero, one) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(loss_grad(lg, zero, one)[0] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(loss_hess(lg, zero, one)(0, 0) == doctest::Approx(0.25).epsilon(1e-15));

    const LossDescriptor sm{LossKind::softmax_cross_entropy, 3};
    const Vector<double> z3(3, 0.0);
    const auto y0 = one_hot(0, 3);
    CHECK(loss_value(sm, z3, y0) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
    const auto g = loss_grad(sm, z3, y0);
    CHECK(g[0] == doctest::Approx(1.0 / 3.0 - 1.0));
    CHECK(g[1] == doctest::Approx(1.0 / 3.0));
    CHECK(g[2] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("loss target validation") {
    const LossDescriptor lg{LossKind::logistic, 1};
    CHECK_THROWS_AS(loss_value(lg, Vector<double>{0.0}, Vector<double>{0.5}), DomainError);
    const LossDescriptor sm{LossKind::softmax_cross_entropy, 3};
    CHECK_THROWS_AS(loss_value(sm, Vector<double>(3), Vector<double>{0, 0, 0}), DomainError);
    CHECK_THROWS_AS(loss_value(sm, Vector<double>(3), Vector<double>{1, 1, 0}), DomainError);
    CHECK_THROWS_AS(one_hot(3, 3), DomainError);
    CHECK_THROWS_AS(loss_value(sm, Vector<double>(2), Vector<double>{1, 0, 0}), DimensionError);
}

TEST_CASE("losses stay finite for large logits") {
    const LossDescriptor lg{LossKind::logistic, 1};
    CHECK(std::isfinite(loss_value(lg, Vector<double>{-800.0}, Vector<double>{1.0})));
    CHECK(loss_value(lg, Vector<double>{-800.0}, Vector<double>{1.0}) == doctest::Approx(800.0));
    const LossDescriptor sm{LossKind::softmax_cross_entropy, 2};
    CHECK(std::isfinite(loss_value(sm, Vector<double>{900.0, -900.0}, Vector<double>{0.0, 1.0})));
}

TEST_CASE("loss hessians are symmetric positive semidefinite") {
    Gen gen(1);
    for (LossKind kind : kLosses) {
        const std::size_t m = kind == LossKind::logistic ? 1 : 4;
        const LossDescriptor loss{kind, m};
        for (int trial = 0; trial < 20; ++trial) {
            const auto z = gen.vector<double>(m);
            Vector<double> y = kind == LossKind::softmax_cross_entropy ? one_hot(1, m)
                               : kind == LossKind::logistic         ? Vector<double>{1.0}
                                                                     : gen.vector<double>(m);
            const auto h = loss_hess(loss, z, y);
            CHECK(hermitian_defect(h) <= 1e-15);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(testing::to_eigen(h));
            CHECK(es.eigenvalues().minCoeff() >= -1e-14);
        }
    }
}

TEST_CASE("empirical_A examples") {
    const LossDescriptor sq{LossKind::squared_error, 1};
    const Dataset one{RealMatrix{{1.0, 0.0}}, RealMatrix{{1.0}}};
    const auto p0 = Params::zeros(2, 1);
    CHECK(empirical_A(p0, sq, one) == RealMatrix{{-1.0}, {0.0}});

    Gen gen(2);
    const auto x = gen.matrix<double>(5, 3);
    const Params p{gen.matrix<double>(2, 3), gen.vector<double>(2)};
    RealMatrix y(5, 2);
    for (std::size_t i = 0; i < 5; ++i) {
        const auto z = p.weights * x.row(i);
        for (std::size_t k = 0; k < 2; ++k) y(i, k) = z[k] + p.bias[k];
    }
    const LossDescriptor sq2{LossKind::squared_error, 2};
    CHECK(max_abs(empirical_A(p, sq2, Dataset{x, y})) <= 1e-15);

    const Dataset two{RealMatrix{{1.0, 0.0}, {1.0, 0.0}}, RealMatrix{{1.0}, {1.0}}};
    CHECK(empirical_A(p0, sq, two) == empirical_A(p0, sq, one));
    CHECK_THROWS_AS(empirical_A(Params::zeros(3, 1), sq, one), DimensionError);
}

TEST_CASE("grad_step examples") {
    const LossDescriptor sq{LossKind::squared_error, 1};
    const Dataset one{RealMatrix{{1.0, 0.0}}, RealMatrix{{1.0}}};
    const auto s = grad_step(Params::zeros(2, 1), sq, one, PreconditionerSpec{});
    CHECK(s.weights == RealMatrix{{1.0, 0.0}});
    CHECK(s.bias == Vector<double>{1.0});

    // Interpolation point: zero step for any metric pair.
    Gen gen(3);
    const auto x = gen.matrix<double>(6, 2);
    const Params p{gen.matrix<double>(1, 2), gen.vector<double>(1)};
    RealMatrix y(6, 1);
    for (std::size_t i = 0; i < 6; ++i) y(i, 0) = (p.weights * x.row(i))[0] + p.bias[0];
    const auto g = evaluate(p, sq, Dataset{x, y});
    const auto st = grad_step(g, random_metrics(gen, 2, 1, 50.0));
    CHECK(max_abs(st.weights) <= 1e-14);
    CHECK(std::abs(st.bias[0]) <= 1e-14);
}

TEST_CASE("identity-metric step is the negative gradient") {
    Gen gen(4);
    for (LossKind kind : kLosses) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto in = random_instance(gen, kind);
            const auto step = grad_step(in.params, in.loss, in.data, PreconditionerSpec{});
            const double h = 1e-5;
            Step fd{RealMatrix(step.weights.rows(), step.weights.cols()), Vector<double>(step.bias.size())};
            for (std::size_t k = 0; k < fd.weights.size(); ++k) {
                Params plus = in.params, minus = in.params;
                plus.weights.data()[k] += h;
                minus.weights.data()[k] -= h;
                fd.weights.data()[k] =
                    (oracle_risk(kind, plus, in.data) - oracle_risk(kind, minus, in.data)) / (2 * h);
            }
            for (std::size_t k = 0; k < fd.bias.size(); ++k) {
                Params plus = in.params, minus = in.params;
                plus.bias[k] += h;
                minus.bias[k] -= h;
                fd.bias[k] = (oracle_risk(kind, plus, in.data) - oracle_risk(kind, minus, in.data)) / (2 * h);
            }
            double num = 0.0, den = 0.0;
            for (std::size_t k = 0; k < fd.weights.size(); ++k) {
                num += std::pow(fd.weights.data()[k] + step.weights.data()[k], 2);
                den += std::pow(fd.weights.data()[k], 2);
            }
            for (std::size_t k = 0; k < fd.bias.size(); ++k) {
                num += std::pow(fd.bias[k] + step.bias[k], 2);
                den += std::pow(fd.bias[k], 2);
            }
            INFO(to_string(kind));
            CHECK(std::sqrt(num) <= 1e-5 * std::sqrt(den));
            CHECK(rel_err(evaluate(in.params, in.loss, in.data).risk, oracle_risk(kind, in.params, in.data)) <= 1e-13);
        }
    }
}

TEST_CASE("steps satisfy the variational condition") {
    Gen gen(5);
    for (LossKind kind : kLosses) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto in = random_instance(gen, kind);
            const std::size_t n = in.data.input_dim(), m = in.data.output_dim();
            const auto metrics = random_metrics(gen, n, m, 100.0);
            const auto g = evaluate(in.params, in.loss, in.data);
            const auto step = grad_step(g, metrics);
            const auto rx_inv = metrics.x.inverse_gram();
            const auto& ry = metrics.y.gram();
            for (int k = 0; k < 20; ++k) {
                const auto h = gen.matrix<double>(m, n);
                const double residual = trace(g.a * h) + trace(rx_inv * transpose(step.weights) * ry * h);
                CHECK(std::abs(residual) <= 1e-9 * std::max(1.0, frobenius_norm(g.a) * frobenius_norm(h)));
                // Bias block: gbar . k + <db, k>_Y = 0.
                const auto kb = gen.vector<double>(m);
                const double rb = dot<double>(g.mean_grad, kb) + metrics.y.inner(step.bias, kb);
                CHECK(std::abs(rb) <= 1e-9 * std::max(1.0, euclidean_norm<double>(g.mean_grad) * euclidean_norm<double>(kb)));
            }
        }
    }
}

TEST_CASE("preconditioned steps descend") {
    Gen gen(6);
    for (LossKind kind : kLosses) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto in = random_instance(gen, kind);
            const auto metrics = random_metrics(gen, in.data.input_dim(), in.data.output_dim(), 100.0);
            const auto g = evaluate(in.params, in.loss, in.data);
            const auto step = grad_step(g, metrics);
            if (metric_norm(step, metrics) == 0.0) continue;
            CHECK(directional(g, step) < 0.0);
            CHECK(empirical_risk(shifted(in.params, step, 1e-3), in.loss, in.data) < g.risk);
        }
    }
}

TEST_CASE("the step is the steepest direction for its metric") {
    Gen gen(7);
    for (int trial = 0; trial < 10; ++trial) {
        const auto in = random_instance(gen, kLosses[trial % 3], 4, 16);
        const std::size_t n = in.data.input_dim(), m = in.data.output_dim();
        const auto metrics = random_metrics(gen, n, m, 30.0);
        const auto g = evaluate(in.params, in.loss, in.data);
        const auto step = grad_step(g, metrics);
        const double norm = metric_norm(step, metrics);
        const double best = directional(g, step);
        // For the steepest direction, the slope equals -|step|^2.
        CHECK(best == doctest::Approx(-norm * norm).epsilon(1e-10));
        for (int k = 0; k < 1000; ++k) {
            Step p{gen.matrix<double>(m, n), gen.vector<double>(m)};
            const double scale = norm / metric_norm(p, metrics);
            p.weights *= scale;
            for (auto& b : p.bias) b *= scale;
            CHECK(directional(g, p) >= best - 1e-12 * std::abs(best));
        }
    }
}

TEST_CASE("build_x_metric examples") {
    const double r = std::sqrt(2.0);
    const Dataset white{RealMatrix{{r, 0}, {-r, 0}, {0, r}, {0, -r}}, RealMatrix(4, 1)};
    CHECK(rel_err(build_x_metric(white, 0.0).gram(), RealMatrix::identity(2)) <= 1e-14);

    const Dataset line{RealMatrix{{1, 2}, {2, 4}, {3, 6}, {-1, -2}}, RealMatrix(4, 1)};
    CHECK_THROWS_AS(build_x_metric(line, 0.0), NotPositiveDefiniteError);
    CHECK_NOTHROW(build_x_metric(line, 1e-3));
    CHECK_THROWS_AS(build_x_metric(Dataset{RealMatrix{{1, 2}}, RealMatrix(1, 1)}, 0.0), DomainError);
    CHECK_THROWS_AS(build_x_metric(white, -1.0), DomainError);

    Gen gen(8);
    const std::size_t count = 10000;
    RealMatrix x(count, 2);
    for (std::size_t i = 0; i < count; ++i) {
        x(i, 0) = 10.0 * gen.normal();
        x(i, 1) = gen.normal();
    }
    const auto g = build_x_metric(Dataset{x, RealMatrix(count, 1)}, 0.0).gram();
    // Relative standard error of a sample variance is sqrt(2/N) ~ 0.014.
    CHECK(std::abs(g(0, 0) / 0.01 - 1.0) <= 0.06);
    CHECK(std::abs(g(1, 1) - 1.0) <= 0.06);
    CHECK(std::abs(g(0, 1)) <= 0.005);
}

TEST_CASE("input moments use the 1/N normalizer") {
    const Dataset d{RealMatrix{{1.0}, {3.0}}, RealMatrix(2, 1)};
    const auto mom = input_moments(d);
    CHECK(mom.mean[0] == 2.0);
    CHECK(mom.covariance(0, 0) == 1.0);
}

TEST_CASE("build_y_metric examples") {
    Gen gen(9);
    const auto x = gen.matrix<double>(10, 3);
    const LossDescriptor sq{LossKind::squared_error, 2};
    const Dataset dsq{x, gen.matrix<double>(10, 2)};
    const Params p2{gen.matrix<double>(2, 3), gen.vector<double>(2)};
    CHECK(build_y_metric(p2, sq, dsq, YMetric::expected_hessian, 0.0).gram() == RealMatrix::identity(2));

    const LossDescriptor lg{LossKind::logistic, 1};
    RealMatrix y(10, 1);
    for (std::size_t i = 0; i < 10; ++i) y(i, 0) = i % 2;
    const auto h = build_y_metric(Params::zeros(3, 1), lg, Dataset{x, y}, YMetric::expected_hessian, 1e-3);
    CHECK(h.gram()(0, 0) == doctest::Approx(0.25 + 1e-3).epsilon(1e-15));

    RealMatrix yi(10, 2);
    for (std::size_t i = 0; i < 10; ++i) {
        const auto z = p2.weights * x.row(i);
        for (std::size_t k = 0; k < 2; ++k) yi(i, k) = z[k] + p2.bias[k];
    }
    const auto f = build_y_metric(p2, sq, Dataset{x, yi}, YMetric::empirical_fisher, 1e-4);
    CHECK(rel_err(f.gram(), 1e-4 * RealMatrix::identity(2)) <= 1e-10);
    // Exactly zero gradients leave an undamped Fisher singular.
    CHECK_THROWS_AS(build_y_metric(Params::zeros(3, 2), sq, Dataset{x, RealMatrix(10, 2)}, YMetric::empirical_fisher, 0.0),
                    NotPositiveDefiniteError);
}

TEST_CASE("empirical fisher is the mean outer product of gradients") {
    Gen gen(10);
    const auto in = random_instance(gen, LossKind::softmax_cross_entropy);
    const std::size_t m = in.data.output_dim();
    RealMatrix want(m, m);
    for (std::size_t i = 0; i < in.data.size(); ++i) {
        auto z = in.params.weights * in.data.inputs.row(i);
        for (std::size_t k = 0; k < m; ++k) z[k] += in.params.bias[k];
        const auto gi = loss_grad(in.loss, z, in.data.targets.row(i));
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) want(r, c) += gi[r] * gi[c] / static_cast<double>(in.data.size());
    }
    for (std::size_t r = 0; r < m; ++r) want(r, r) += 0.5;
    CHECK(rel_err(build_y_metric(in.params, in.loss, in.data, YMetric::empirical_fisher, 0.5).gram(), want) <= 1e-13);
}

TEST_CASE("hessian-vector products match finite differences of the gradient") {
    Gen gen(11);
    for (LossKind kind : kLosses) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto in = random_instance(gen, kind);
            const std::size_t n = in.data.input_dim(), m = in.data.output_dim();
            const Step dir{gen.matrix<double>(m, n), gen.vector<double>(m)};
            const auto hv = hessian_vector_product(in.params, in.loss, in.data, dir);
            const double h = 1e-5;
            const auto gp = evaluate(shifted(in.params, dir, h), in.loss, in.data);
            const auto gm = evaluate(shifted(in.params, dir, -h), in.loss, in.data);
            double num = 0.0, den = 0.0;
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t c = 0; c < n; ++c) {
                    const double fd = (gp.a(c, r) - gm.a(c, r)) / (2 * h);
                    num += std::pow(fd - hv.weights(r, c), 2);
                    den += fd * fd;
                }
                const double fd = (gp.mean_grad[r] - gm.mean_grad[r]) / (2 * h);
                num += std::pow(fd - hv.bias[r], 2);
                den += fd * fd;
            }
            CHECK(std::sqrt(num) <= 1e-6 * std::sqrt(den) + 1e-12);
        }
    }
}

TEST_CASE("power iteration finds the largest hessian eigenvalue") {
    Gen gen(12);
    const std::size_t n = 4, m = 2, count = 50;
    RealMatrix x = gen.matrix<double>(count, n);
    for (std::size_t i = 0; i < count; ++i) x(i, 0) *= 5.0;
    const Dataset d{x, gen.matrix<double>(count, m)};
    const LossDescriptor sq{LossKind::squared_error, m};
    // For squared error the Hessian over (S, b) is the second moment of [x; 1], once per output.
    Eigen::MatrixXd mom = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (std::size_t i = 0; i < count; ++i) {
        Eigen::VectorXd xi(n + 1);
        for (std::size_t c = 0; c < n; ++c) xi(c) = x(i, c);
        xi(n) = 1.0;
        mom += xi * xi.transpose() / static_cast<double>(count);
    }
    const double want = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(mom).eigenvalues().maxCoeff();
    const double got = largest_hessian_eigenvalue(Params::zeros(n, m), sq, d, 100);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("parallel reductions match the serial reference and ignore the thread count") {
    Gen gen(13);
    for (LossKind kind : kLosses) {
        const auto in = random_instance(gen, kind, 8, 3000);
        parallel::set_thread_count(1);
        const auto a = evaluate(in.params, in.loss, in.data);
        const auto ma = input_moments(in.data);
        parallel::set_thread_count(4);
        const auto b = evaluate(in.params, in.loss, in.data);
        const auto mb = input_moments(in.data);
        parallel::set_thread_count(0);
        CHECK(a.risk == b.risk);
        CHECK(a.a == b.a);
        CHECK(a.mean_grad == b.mean_grad);
        CHECK(ma.covariance == mb.covariance);

        const auto ref = reference::evaluate(in.params, in.loss, in.data);
        CHECK(rel_err(a.risk, ref.risk) <= 1e-13);
        CHECK(rel_err(a.a, ref.a) <= 1e-12);
        const auto mref = reference::input_moments(in.data);
        CHECK(rel_err(ma.covariance, mref.covariance) <= 1e-12);
    }
}
