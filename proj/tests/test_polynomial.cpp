#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "momentforge/polynomial.hpp"
#include "test_support.hpp"

using namespace momentforge;

namespace {
const std::vector<std::string> kX = {"x"};
const std::vector<std::string> kXY = {"x", "y"};

Monomial mono(std::vector<int> e) { return Monomial(std::move(e)); }
}  // namespace

TEST_CASE("graded-lex monomial enumeration") {
    const auto ms = monomials_up_to(2, 2);
    REQUIRE(ms.size() == 6);
    CHECK(ms[0] == mono({0, 0}));
    CHECK(ms[1] == mono({1, 0}));
    CHECK(ms[2] == mono({0, 1}));
    CHECK(ms[3] == mono({2, 0}));
    CHECK(ms[4] == mono({1, 1}));
    CHECK(ms[5] == mono({0, 2}));
    CHECK(monomials_up_to(3, 4).size() == 35);  // binomial(3+4,4)
}

TEST_CASE("parse: onedim generator expands correctly") {
    Polynomial g = parse_poly("x*(1-x)*(x-2)^2", kX);
    CHECK(g.degree() == 4);
    // x(1-x)(x-2)^2 = -x^4 + 5x^3 - 8x^2 + 4x
    CHECK(g.coefficient(mono({4})) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(g.coefficient(mono({3})) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(g.coefficient(mono({2})) == doctest::Approx(-8.0).epsilon(1e-14));
    CHECK(g.coefficient(mono({1})) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(g.coefficient(mono({0})) == 0.0);
}

TEST_CASE("parse: zero polynomial and degree sentinel") {
    Polynomial z = parse_poly("0", kXY);
    CHECK(z.is_zero());
    CHECK(z.degree() == kZeroDegree);
    CHECK(parse_poly("x - x", kX).degree() == kZeroDegree);
}

TEST_CASE("parse: disk generator expansion") {
    Polynomial p = parse_poly("1 - (x-1)^2 - y^2", kXY);
    // hand expansion: -x^2 + 2x - y^2
    CHECK(p.coefficient(mono({2, 0})) == doctest::Approx(-1.0));
    CHECK(p.coefficient(mono({1, 0})) == doctest::Approx(2.0));
    CHECK(p.coefficient(mono({0, 2})) == doctest::Approx(-1.0));
    CHECK(p.coefficient(mono({0, 0})) == 0.0);
    CHECK(p.terms().size() == 3);
}

TEST_CASE("parse: numbers, powers, whitespace") {
    CHECK(parse_poly("2.5e-1", kX).coefficient(mono({0})) == doctest::Approx(0.25));
    CHECK(parse_poly(" ( x + 1 ) ^ 2 ", kX).coefficient(mono({1})) == doctest::Approx(2.0));
    CHECK(parse_poly("x^3", kX).degree() == 3);
    CHECK(parse_poly("-x", kX).coefficient(mono({1})) == doctest::Approx(-1.0));
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_AS(parse_poly("x + * y", kXY), ParseError);
    try {
        parse_poly("x + * y", kXY);
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(parse_poly("x + z", kXY), ParseError);
    // implicit multiplication is not allowed
    CHECK_THROWS_AS(parse_poly("2 x", kX), ParseError);
    CHECK_THROWS_AS(parse_poly("(x+1)(x-1)", kX), ParseError);
}

TEST_CASE("eval: paper points") {
    Polynomial g = parse_poly("x*(1-x)*(x-2)^2", kX);
    CHECK(g.eval(std::vector<double>{2.0}) == 0.0);
    CHECK(g.eval(std::vector<double>{0.0}) == 0.0);
    CHECK(g.eval(std::vector<double>{1.0}) == 0.0);
    CHECK(g.eval(std::vector<double>{0.5}) < 0.6);
    CHECK(g.eval(std::vector<double>{0.5}) > 0.0);
    CHECK(g.eval(std::vector<double>{1.5}) < 0.0);

    CHECK(Polynomial::constant(3, 1.0).eval(std::vector<double>{4.0, 5.0, 6.0}) == 1.0);

    Polynomial disk = parse_poly("1 - (x-1)^2 - y^2", kXY);
    CHECK(disk.eval(std::vector<double>{0.0, 0.0}) == 0.0);

    CHECK_THROWS_AS(g.eval(std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("gradient and hessian at the paper's points") {
    Polynomial g = parse_poly("x*(1-x)*(x-2)^2", kX);
    auto grad = g.gradient();
    REQUIRE(grad.size() == 1);
    CHECK(grad[0].eval(std::vector<double>{0.0}) == doctest::Approx(4.0));
    CHECK(grad[0].eval(std::vector<double>{2.0}) == doctest::Approx(0.0));
    auto hess = g.hessian();
    CHECK(hess[0][0].eval(std::vector<double>{2.0}) == doctest::Approx(-4.0));

    Polynomial xy = parse_poly("x*y", kXY);
    auto h = xy.hessian();
    CHECK(h[0][0].is_zero());
    CHECK(h[1][1].is_zero());
    CHECK(h[0][1].coefficient(mono({0, 0})) == doctest::Approx(1.0));
    CHECK(h[1][0].coefficient(mono({0, 0})) == doctest::Approx(1.0));

    for (const auto& d : Polynomial::constant(2, 7.0).gradient()) CHECK(d.is_zero());
}

TEST_CASE("arithmetic basics") {
    Polynomial x = Polynomial::variable(1, 0);
    CHECK((x * x).coefficient(mono({2})) == 1.0);
    Polynomial one = Polynomial::constant(1, 1.0);
    CHECK((one - x).pow(0).coefficient(mono({0})) == 1.0);
    CHECK((one - x).pow(0).degree() == 0);

    // u_0 * u_1 for n=1: x^2 (x-1)^2 = x^4 - 2x^3 + x^2
    Polynomial u = build_ux(1, {{0.0}, {1.0}});
    CHECK(u.coefficient(mono({4})) == doctest::Approx(1.0));
    CHECK(u.coefficient(mono({3})) == doctest::Approx(-2.0));
    CHECK(u.coefficient(mono({2})) == doctest::Approx(1.0));
    CHECK(u.coefficient(mono({1})) == 0.0);
    CHECK(u.coefficient(mono({0})) == 0.0);

    CHECK_THROWS_AS(Polynomial::variable(1, 0) + Polynomial::variable(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(x.pow(-1), std::invalid_argument);
}

TEST_CASE("exact cancellation leaves the zero polynomial") {
    Polynomial x = Polynomial::variable(1, 0);
    Polynomial one = Polynomial::constant(1, 1.0);
    Polynomial p = (x + one) * (x - one) - (x * x - one);
    CHECK(p.is_zero());
}

TEST_CASE("build_ux identities") {
    // empty product
    Polynomial u0 = build_ux(2, {});
    CHECK(u0.degree() == 0);
    CHECK(u0.coefficient(mono({0, 0})) == 1.0);

    // u at the origin in two variables is x^2 + y^2
    Polynomial u = build_ux(2, {{0.0, 0.0}});
    CHECK(u.coefficient(mono({2, 0})) == doctest::Approx(1.0));
    CHECK(u.coefficient(mono({0, 2})) == doctest::Approx(1.0));
    CHECK(u.terms().size() == 2);

    CHECK_THROWS_AS(build_ux(2, {{1.0}}), std::invalid_argument);

    // value 0, gradient 0, Hessian 2I at the center
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        auto c = mftest::random_point(rng, n, 2.0);
        Polynomial ux = build_ux(n, {c});
        CHECK(std::abs(ux.eval(c)) <= 1e-12);
        for (int i = 0; i < n; ++i) CHECK(std::abs(ux.derivative(i).eval(c)) <= 1e-12);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                const double hij = ux.derivative(i).derivative(j).eval(c);
                CHECK(std::abs(hij - (i == j ? 2.0 : 0.0)) <= 1e-12);
            }
    }
}

TEST_CASE("shifted concavity transform") {
    Polynomial x = Polynomial::variable(1, 0);
    Polynomial t = shifted_concavity_transform(x, 1);
    CHECK(t.coefficient(mono({1})) == doctest::Approx(1.0));
    CHECK(t.coefficient(mono({2})) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(shifted_concavity_transform(x, 0), std::invalid_argument);

    // At zeros of g: grad(g(1-g)^k) = grad g and
    // Hess(g(1-g)^k) = Hess g - 2k grad grad^T.
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        Polynomial g = mftest::random_poly(rng, n, 3, 1.5);
        auto x0 = mftest::random_point(rng, n, 1.0);
        g = g - Polynomial::constant(n, g.eval(x0));  // force an exact zero
        for (int k = 1; k <= 3; ++k) {
            Polynomial gk = shifted_concavity_transform(g, k);
            std::vector<double> grad(n), gradk(n);
            for (int i = 0; i < n; ++i) {
                grad[i] = g.derivative(i).eval(x0);
                gradk[i] = gk.derivative(i).eval(x0);
                CHECK(std::abs(grad[i] - gradk[i]) <= 1e-10);
            }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j) {
                    const double lhs = gk.derivative(i).derivative(j).eval(x0);
                    const double rhs =
                        g.derivative(i).derivative(j).eval(x0) - 2.0 * k * grad[i] * grad[j];
                    CHECK(std::abs(lhs - rhs) <= 1e-10);
                }
        }
    }
}

TEST_CASE("double zero test") {
    Polynomial xy = parse_poly("x*y", kXY);
    std::vector<double> origin = {0.0, 0.0};
    CHECK(double_zero_test(xy, origin, 1e-12));

    Polynomial x = Polynomial::variable(1, 0);
    CHECK_FALSE(double_zero_test(x, std::vector<double>{0.0}, 1e-9));
    CHECK_THROWS_AS(double_zero_test(x, std::vector<double>{0.0}, 0.0), std::invalid_argument);

    // product of two squared-distance factors has a double zero at each center
    Polynomial u = build_ux(2, {{0.5, -0.25}, {1.0, 1.0}});
    CHECK(double_zero_test(u, std::vector<double>{0.5, -0.25}, 1e-10));
    CHECK(double_zero_test(u, std::vector<double>{1.0, 1.0}, 1e-10));

    // multiplying by a bounded factor preserves double zeros
    std::mt19937 rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2;
        auto x0 = mftest::random_point(rng, n, 1.0);
        Polynomial p = build_ux(n, {x0}) * mftest::random_poly(rng, n, 2, 2.0);
        Polynomial q = mftest::random_poly(rng, n, 3, 2.0);
        REQUIRE(double_zero_test(p, x0, 1e-9));
        CHECK(double_zero_test(p * q, x0, 1e-7 * (1.0 + q.max_abs_coeff())));
    }
}

TEST_CASE("finite-difference agreement for gradient and hessian") {
    std::mt19937 rng(19);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        Polynomial p = mftest::random_poly(rng, n, 1 + static_cast<int>(rng() % 6), 10.0);
        auto x = mftest::random_point(rng, n, 1.0);
        auto grad = p.gradient();
        auto hess = p.hessian();
        for (int i = 0; i < n; ++i) {
            const double a = grad[i].eval(x);
            const double fd = mftest::fd_gradient(p, x, i);
            CHECK(std::abs(a - fd) <= 1e-5 * (1.0 + std::abs(a)));
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double a = hess[i][j].eval(x);
                const double fd = mftest::fd_hessian(p, x, i, j);
                CHECK(std::abs(a - fd) <= 2e-4 * (1.0 + std::abs(a)));
            }
    }
}

TEST_CASE("product evaluation is multiplicative") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        Polynomial p = mftest::random_poly(rng, n, 3, 10.0);
        Polynomial q = mftest::random_poly(rng, n, 3, 10.0);
        auto x = mftest::random_point(rng, n, 1.0);
        const double lhs = (p * q).eval(x);
        const double rhs = p.eval(x) * q.eval(x);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("to_string names variables") {
    Polynomial p = parse_poly("1 - (x-1)^2 - y^2", kXY);
    CHECK(p.to_string(&kXY) == "2*x - x^2 - y^2");
    CHECK(Polynomial(2).to_string() == "0");
}
