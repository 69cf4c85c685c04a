#ifndef MOMENTFORGE_TEST_SUPPORT_HPP
#define MOMENTFORGE_TEST_SUPPORT_HPP

#include <random>
#include <vector>

#include "momentforge/polynomial.hpp"

namespace mftest {

// Independent finite-difference oracles over Polynomial::eval only.
inline double fd_gradient(const momentforge::Polynomial& p, std::vector<double> x, int i) {
    const double h = 1e-4 * (1.0 + std::abs(x[i]));
    x[i] += h;
    const double fp = p.eval(x);
    x[i] -= 2.0 * h;
    const double fm = p.eval(x);
    return (fp - fm) / (2.0 * h);
}

inline double fd_hessian(const momentforge::Polynomial& p, std::vector<double> x, int i, int j) {
    const double hi = 1e-4 * (1.0 + std::abs(x[i]));
    const double hj = 1e-4 * (1.0 + std::abs(x[j]));
    if (i == j) {
        const double f0 = p.eval(x);
        x[i] += hi;
        const double fp = p.eval(x);
        x[i] -= 2.0 * hi;
        const double fm = p.eval(x);
        return (fp - 2.0 * f0 + fm) / (hi * hi);
    }
    std::vector<double> y = x;
    y[i] += hi;
    y[j] += hj;
    double s = p.eval(y);
    y[j] -= 2.0 * hj;
    s -= p.eval(y);
    y[i] -= 2.0 * hi;
    s += p.eval(y);
    y[j] += 2.0 * hj;
    s -= p.eval(y);
    return s / (4.0 * hi * hj);
}

inline momentforge::Polynomial random_poly(std::mt19937& rng, int n, int deg, double cmax,
                                           double density = 0.7) {
    using momentforge::Monomial;
    using momentforge::Polynomial;
    std::uniform_real_distribution<double> coeff(-cmax, cmax);
    std::uniform_real_distribution<double> keep(0.0, 1.0);
    Polynomial p(n);
    for (const auto& m : momentforge::monomials_up_to(n, deg)) {
        if (keep(rng) > density) continue;
        p = p + Polynomial::term(n, m, coeff(rng));
    }
    return p;
}

inline std::vector<double> random_point(std::mt19937& rng, int n, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<double> x(n);
    for (double& v : x) v = u(rng);
    return x;
}

}  // namespace mftest

#endif
