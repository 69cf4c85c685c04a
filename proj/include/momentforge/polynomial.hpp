#ifndef MOMENTFORGE_POLYNOMIAL_HPP
#define MOMENTFORGE_POLYNOMIAL_HPP

#include <climits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "momentforge/monomial.hpp"

namespace momentforge {

// Degree reported for the zero polynomial (the paper's deg 0 = -infinity).
inline constexpr int kZeroDegree = INT_MIN;

// Sparse multivariate polynomial over machine reals. Terms with zero
// coefficient are never stored; after arithmetic, coefficients below
// 1e-14 * (largest |coefficient|) are pruned as rounding residue.
class Polynomial {
public:
    using TermMap = std::map<Monomial, double, GradedLexLess>;

    explicit Polynomial(int n) : n_(n) {}
    static Polynomial zero(int n) { return Polynomial(n); }
    static Polynomial constant(int n, double c);
    static Polynomial variable(int n, int i);
    static Polynomial term(int n, Monomial m, double c);

    int var_count() const { return n_; }
    int degree() const;  // kZeroDegree for the zero polynomial
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }
    double coefficient(const Monomial& m) const;
    double max_abs_coeff() const;

    double eval(std::span<const double> x) const;

    Polynomial derivative(int i) const;
    std::vector<Polynomial> gradient() const;
    // Symmetric by construction: entry (i,j) is computed once and mirrored.
    std::vector<std::vector<Polynomial>> hessian() const;

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double s, const Polynomial& a);
    Polynomial pow(int k) const;  // k >= 0

    std::string to_string(const std::vector<std::string>* names = nullptr) const;

private:
    void add_term(const Monomial& m, double c);
    void prune();
    static void check_same_vars(const Polynomial& a, const Polynomial& b);

    int n_ = 0;
    TermMap terms_;
};

// Ordered list of constraint polynomials g = (g_1,...,g_m); g_0 := 1 is
// implicit and never stored.
struct PolySystem {
    int n = 0;
    std::vector<Polynomial> constraints;

    PolySystem() = default;
    PolySystem(int n_, std::vector<Polynomial> g) : n(n_), constraints(std::move(g)) {
        for (const auto& gi : constraints)
            if (gi.var_count() != n) throw std::invalid_argument("PolySystem: variable count mismatch");
    }
    int size() const { return static_cast<int>(constraints.size()); }
};

// Reported on malformed polynomial text; `offset` is the byte position.
struct ParseError : std::runtime_error {
    size_t offset;
    ParseError(const std::string& msg, size_t off)
        : std::runtime_error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := number | var | var '^' uint | '(' expr ')' ('^' uint)?
// Whitespace is insignificant; implicit multiplication is rejected.
// A leading sign on an expr is accepted as a convenience.
Polynomial parse_poly(const std::string& text, const std::vector<std::string>& vars);

// u = prod_i ((X_1 - x_i1)^2 + ... + (X_n - x_in)^2); the empty product is 1.
Polynomial build_ux(int n, const std::vector<std::vector<double>>& points);

// g * (1 - g)^k expanded, k >= 1.
Polynomial shifted_concavity_transform(const Polynomial& g, int k);

// p(center_1 + scale_1*T_1, ..., center_n + scale_n*T_n) expanded in T.
Polynomial affine_substitute(const Polynomial& p, std::span<const double> center,
                             std::span<const double> scale);

// True iff |p(x)| <= tol and ||grad p(x)||_inf <= tol (double zero at x).
bool double_zero_test(const Polynomial& p, std::span<const double> x, double tol);

}  // namespace momentforge

#endif
