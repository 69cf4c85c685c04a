#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "momentforge/linalg.hpp"

using namespace momentforge;

namespace {

SymMatrix random_sym(std::mt19937& rng, int n, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    SymMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a.at(i, j) = u(rng);
    return a;
}

double reconstruction_error(const SymMatrix& a, const EigenResult& e) {
    const int n = a.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += e.vectors[static_cast<size_t>(k) * n + i] * e.values[k] *
                     e.vectors[static_cast<size_t>(k) * n + j];
            worst = std::max(worst, std::abs(s - a.at(i, j)));
        }
    return worst;
}

}  // namespace

TEST_CASE("eigen: identity and 2x2 exchange") {
    EigenResult e = sym_eigen(SymMatrix::identity(3));
    for (double v : e.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    SymMatrix x(2);
    x.at(1, 0) = 1.0;
    EigenResult e2 = sym_eigen(x);
    CHECK(e2.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(e2.values[1] == doctest::Approx(1.0).epsilon(1e-12));

    // quadratic form of hessian(XY) at v = (1,-1)
    const std::vector<double> v = {1.0, -1.0};
    double q = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) q += v[i] * x.at(i, j) * v[j];
    CHECK(q == doctest::Approx(-2.0));
}

TEST_CASE("eigen: residual and orthogonality bounds") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 50);
        SymMatrix a = random_sym(rng, n, 10.0);
        EigenResult e = sym_eigen(a);
        const double scale = 1.0 + a.max_abs();
        CHECK(reconstruction_error(a, e) <= 1e-9 * scale);
        for (size_t k = 0; k + 1 < e.values.size(); ++k) CHECK(e.values[k] <= e.values[k + 1]);
        // V orthogonal
        for (int c1 = 0; c1 < n; ++c1)
            for (int c2 = 0; c2 <= c1; ++c2) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i)
                    dot += e.vectors[static_cast<size_t>(c1) * n + i] *
                           e.vectors[static_cast<size_t>(c2) * n + i];
                CHECK(std::abs(dot - (c1 == c2 ? 1.0 : 0.0)) <= 1e-10);
            }
    }
}

TEST_CASE("weyl inequality spot check") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 12);
        SymMatrix a = random_sym(rng, n, 5.0);
        SymMatrix b = random_sym(rng, n, 5.0);
        CHECK(min_eigenvalue(a + b) >= min_eigenvalue(a) + min_eigenvalue(b) - 1e-9);
    }
}

TEST_CASE("gram matrices are psd") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 12);
        std::vector<double> b(static_cast<size_t>(n) * n);
        for (double& v : b) v = u(rng);
        SymMatrix btb(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += b[static_cast<size_t>(k) * n + i] * b[static_cast<size_t>(k) * n + j];
                btb.at(i, j) = s;
            }
        CHECK(is_psd(btb, 1e-9));
    }
}

TEST_CASE("definiteness predicates") {
    CHECK(is_nd(-2.0 * SymMatrix::identity(2), 1e-9));
    CHECK(is_psd(SymMatrix(3), 0.0));
    CHECK_FALSE(is_nd(SymMatrix(3), 1e-9));
    SymMatrix d(2);
    d.at(0, 0) = 1.0;
    d.at(1, 1) = -1.0;
    CHECK_FALSE(is_psd(d, 1e-9));
    CHECK_FALSE(is_nd(d, 1e-9));
    CHECK_THROWS_AS(is_psd(d, -1.0), std::invalid_argument);
}

TEST_CASE("cholesky: identity, 2x2 hand solve, Hilbert residual") {
    SymMatrix id = SymMatrix::identity(4);
    std::vector<double> b = {1.0, -2.0, 3.0, 0.5};
    auto x = solve_spd(id, b);
    for (int i = 0; i < 4; ++i) CHECK(x[i] == b[i]);

    SymMatrix a(2);
    a.at(0, 0) = 4.0;
    a.at(1, 0) = 2.0;
    a.at(1, 1) = 3.0;
    auto x2 = solve_spd(a, std::vector<double>{1.0, 0.0});
    CHECK(x2[0] == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(x2[1] == doctest::Approx(-0.25).epsilon(1e-12));

    SymMatrix l = cholesky_spd(a);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double s = 0.0;
            for (int k = 0; k <= std::min(i, j); ++k) s += l.at(i, k) * l.at(j, k);
            worst = std::max(worst, std::abs(s - a.at(i, j)));
        }
    CHECK(worst <= 1e-10 * a.max_abs());

    // Hilbert(4): residual oracle
    SymMatrix h(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j) h.at(i, j) = 1.0 / (i + j + 1);
    std::vector<double> rhs = {1.0, 1.0, 1.0, 1.0};
    auto xh = solve_spd(h, rhs);
    for (int i = 0; i < 4; ++i) {
        double r = -rhs[i];
        for (int j = 0; j < 4; ++j) r += h.at(i, j) * xh[j];
        CHECK(std::abs(r) <= 1e-8);
    }

    SymMatrix neg(2);
    neg.at(0, 0) = -1.0;
    neg.at(1, 1) = 1.0;
    CHECK_THROWS_WITH_AS(cholesky_spd(neg), "cholesky_spd: not positive definite",
                         std::runtime_error);
}

TEST_CASE("lu solve with partial pivoting") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 20);
        std::vector<double> a(static_cast<size_t>(n) * n), x_true(n), b(n, 0.0);
        for (double& v : a) v = u(rng);
        for (double& v : x_true) v = u(rng);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) b[i] += a[static_cast<size_t>(i) * n + j] * x_true[j];
        auto x = lu_solve(a, b);
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(x[i] - x_true[i]) <= 1e-6 * (1.0 + std::abs(x_true[i])));
    }
    // needs pivoting: zero on the leading diagonal
    std::vector<double> a = {0.0, 1.0, 1.0, 0.0};
    auto x = lu_solve(a, {2.0, 3.0});
    CHECK(x[0] == doctest::Approx(3.0));
    CHECK(x[1] == doctest::Approx(2.0));
    CHECK_THROWS_AS(lu_solve(std::vector<double>{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0}),
                    std::runtime_error);
}

TEST_CASE("pivoted cholesky rank detection") {
    // rank-2 Gram of three vectors with the third = first + second
    std::vector<std::vector<double>> v = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    SymMatrix g(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j) g.at(i, j) = v[i][0] * v[j][0] + v[i][1] * v[j][1];
    PivotedCholesky pc = pivoted_cholesky(g, 1e-10);
    CHECK(pc.rank == 2);

    // full-rank identity keeps everything
    CHECK(pivoted_cholesky(SymMatrix::identity(5), 1e-10).rank == 5);

    // solve against the selected principal submatrix
    std::vector<double> rhs(pc.rank);
    for (int k = 0; k < pc.rank; ++k) rhs[k] = g.at(pc.pivots[k], 2);
    auto coef = pc.solve(rhs);
    for (int k = 0; k < pc.rank; ++k) {
        double s = 0.0;
        for (int t = 0; t < pc.rank; ++t) s += g.at(pc.pivots[k], pc.pivots[t]) * coef[t];
        CHECK(s == doctest::Approx(rhs[k]).epsilon(1e-10));
    }
}
