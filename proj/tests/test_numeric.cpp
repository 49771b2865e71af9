#include "gfrob/numeric.hpp"
#include "gfrob/rng.hpp"
#include "support.hpp"

using namespace gfrob;
using testing::Gen;
using testing::I;
using testing::rel_err;

TEST_CASE("matrix shapes and literals") {
    RealMatrix m{{1, 2, 3}, {4, 5, 6}};
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m(1, 2) == 6);
    CHECK_THROWS_AS(RealMatrix(0, 3), DimensionError);
    CHECK_THROWS_AS((RealMatrix{{1, 2}, {3}}), DimensionError);
    CHECK_THROWS_AS(RealMatrix(2, 2, std::vector<double>{1, 2, 3}), DimensionError);
    CHECK_THROWS_AS(m * m, DimensionError);
}

TEST_CASE("scalar conjugation") {
    const complex z{1.5, -2.0};
    CHECK(conj(conj(z)) == z);
    CHECK(conj(3.25) == 3.25);
}

TEST_CASE("trace examples") {
    CHECK(trace(RealMatrix{{1, 2}, {3, 4}}) == 5.0);
    for (std::size_t n : {1, 4, 17}) CHECK(trace(RealMatrix::identity(n)) == static_cast<double>(n));
    CHECK(trace(ComplexMatrix{{I, 0.0}, {0.0, -I}}) == complex(0.0, 0.0));
    CHECK_THROWS_AS(trace(RealMatrix(2, 3)), DimensionError);
}

TEST_CASE("conj_transpose examples") {
    CHECK(conj_transpose(RealMatrix{{1, 2}, {3, 4}}) == RealMatrix{{1, 3}, {2, 4}});
    CHECK(conj_transpose(ComplexMatrix{{I}}) == ComplexMatrix{{-I}});
    const auto t = conj_transpose(RealMatrix(2, 3));
    CHECK(t.rows() == 3);
    CHECK(t.cols() == 2);
}

TEST_CASE("cholesky examples") {
    const auto f = cholesky(RealMatrix::diagonal({4.0, 9.0}));
    CHECK(f.lower() == RealMatrix::diagonal({2.0, 3.0}));
    CHECK(cholesky(RealMatrix::identity(5)).lower() == RealMatrix::identity(5));
    const RealMatrix g{{2, 1}, {1, 2}};
    CHECK(rel_err(cholesky(g).reconstruct(), g) <= 1e-12);
}

TEST_CASE("cholesky rejects bad input") {
    CHECK_THROWS_AS(cholesky(RealMatrix{{1, 2}, {0, 1}}), NotHermitianError);
    CHECK_THROWS_AS(cholesky(RealMatrix(2, 3)), DimensionError);
    try {
        cholesky(RealMatrix{{1, 2}, {2, 1}});
        FAIL("expected NotPositiveDefiniteError");
    } catch (const NotPositiveDefiniteError& e) {
        CHECK(e.pivot() == 1);
    }
    // Complex Hermitian with non-real diagonal is not Hermitian.
    CHECK_THROWS_AS(cholesky(ComplexMatrix{{complex(1, 1)}}), NotHermitianError);
}

TEST_CASE("cholesky factor shape") {
    Gen gen(11);
    const auto g = gen.hpd<complex>(6, 1e3);
    const auto l = cholesky(g).lower();
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(l(i, i).imag() == 0.0);
        CHECK(l(i, i).real() > 0.0);
        for (std::size_t j = i + 1; j < 6; ++j) CHECK(l(i, j) == complex{});
    }
}

TEST_CASE("solve_hpd examples") {
    Gen gen(3);
    const auto b = gen.matrix<double>(4, 3);
    CHECK(solve_hpd(cholesky(RealMatrix::identity(4)), b) == b);
    const auto x = solve_hpd(cholesky(RealMatrix::diagonal({2.0, 4.0})), RealMatrix{{2}, {4}});
    CHECK(x(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(x(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(solve_hpd(cholesky(RealMatrix::identity(3)), b), DimensionError);
}

TEST_CASE_TEMPLATE("solve_hpd recovers a planted solution", T, double, complex) {
    Gen gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = gen.hpd<T>(5, 1e6);
        const auto x0 = gen.matrix<T>(5, 2);
        const auto x = solve_hpd(cholesky(g), g * x0);
        CHECK(rel_err(x, x0) <= 1e-8);
        CHECK(frobenius_norm(g * x - g * x0) <= 1e-8 * frobenius_norm(g * x0));
    }
}

TEST_CASE_TEMPLATE("cholesky reconstructs HPD matrices", T, double, complex) {
    Gen gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = gen.dim(1, 20);
        const auto g = gen.hpd<T>(n, 1e8);
        CHECK(rel_err(cholesky(g).reconstruct(), g) <= 1e-10);
    }
}

TEST_CASE_TEMPLATE("inverse from the factor", T, double, complex) {
    Gen gen(8);
    const auto g = gen.hpd<T>(7, 100.0);
    const auto inv = cholesky(g).inverse();
    const auto oracle = testing::from_eigen<T>(testing::to_eigen(g).inverse());
    CHECK(rel_err(inv, oracle) <= 1e-12);
    CHECK(hermitian_defect(inv) == 0.0);
}

TEST_CASE_TEMPLATE("trace is cyclic", T, double, complex) {
    Gen gen(13);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = gen.dim(1, 20), m = gen.dim(1, 20);
        const auto a = gen.matrix<T>(n, m);
        const auto b = gen.matrix<T>(m, n);
        const double scale = frobenius_norm(a) * frobenius_norm(b);
        CHECK(rel_err(trace(a * b), trace(b * a), scale) <= 1e-12);
    }
}

TEST_CASE_TEMPLATE("trace is similarity invariant", T, double, complex) {
    Gen gen(17);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = gen.dim(1, 12);
        const auto e = gen.matrix<T>(n, n);
        // Well-conditioned F: a unitary times an HPD matrix with condition <= 10.
        const auto f = testing::from_eigen<T>(gen.unitary<T>(n)) * gen.hpd<T>(n, 10.0);
        const auto finv = testing::from_eigen<T>(testing::to_eigen(f).inverse());
        CHECK(rel_err(trace(finv * e * f), trace(e), frobenius_norm(e)) <= 1e-10);
    }
}

TEST_CASE("compensated sums do not depend on partitioning") {
    Gen gen(19);
    std::vector<double> xs(10000);
    for (auto& x : xs) x = gen.normal() * std::pow(10.0, gen.uniform(-6, 6));
    CompensatedSum<double> whole;
    for (double x : xs) whole += x;
    for (std::size_t block : {7, 64, 1000}) {
        CompensatedSum<double> total;
        for (std::size_t lo = 0; lo < xs.size(); lo += block) {
            CompensatedSum<double> part;
            for (std::size_t i = lo; i < std::min(xs.size(), lo + block); ++i) part += xs[i];
            total += part.value();
        }
        CHECK(rel_err(total.value(), whole.value()) <= 1e-13);
    }
}

TEST_CASE("rng streams") {
    RngStream a(1, 0), b(1, 0), c(2, 0), d(1, 1);
    bool differs_seed = false, differs_sub = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        if (x != c.normal()) differs_seed = true;
        if (x != d.normal()) differs_sub = true;
    }
    CHECK(differs_seed);
    CHECK(differs_sub);

    RngStream big(1);
    CompensatedSum<double> s;
    const int count = 1000000;
    for (int i = 0; i < count; ++i) s += big.normal();
    CHECK(std::abs(s.value() / count) <= 4.0 / std::sqrt(count));
}

TEST_CASE("complex normal draws have unit second moment") {
    RngStream r(4);
    double m2 = 0.0;
    const int count = 200000;
    for (int i = 0; i < count; ++i) m2 += abs2(r.normal_scalar<complex>());
    // Var |z|^2 = 1 for a standard complex normal.
    CHECK(std::abs(m2 / count - 1.0) <= 4.0 / std::sqrt(count));
}
