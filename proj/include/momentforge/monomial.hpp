#ifndef MOMENTFORGE_MONOMIAL_HPP
#define MOMENTFORGE_MONOMIAL_HPP

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace momentforge {

// Exponent tuple of a power product. The variable count is the tuple length.
struct Monomial {
    std::vector<int> exponents;

    Monomial() = default;
    explicit Monomial(std::vector<int> e) : exponents(std::move(e)) {}
    static Monomial one(int n) { return Monomial(std::vector<int>(n, 0)); }
    static Monomial variable(int n, int i) {
        Monomial m = one(n);
        m.exponents[i] = 1;
        return m;
    }

    int var_count() const { return static_cast<int>(exponents.size()); }
    int degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }
    bool is_one() const { return degree() == 0; }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r = a;
        for (size_t i = 0; i < r.exponents.size(); ++i) r.exponents[i] += b.exponents[i];
        return r;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exponents == b.exponents; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
};

// Graded lexicographic order with X1 > X2 > ... > Xn, so for n=2 the
// enumeration runs 1, x, y, x^2, xy, y^2, ...
struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        const int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.exponents > b.exponents;
    }
};

// All monomials in n variables of total degree <= d, in graded-lex order.
std::vector<Monomial> monomials_up_to(int n, int d);

// Renders "x0^2*x1" style when no names are given, names otherwise.
std::string to_string(const Monomial& m, const std::vector<std::string>* names = nullptr);

}  // namespace momentforge

#endif
