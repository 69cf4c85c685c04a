#include "momentforge/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace momentforge {

std::vector<Monomial> monomials_up_to(int n, int d) {
    std::vector<Monomial> out;
    std::vector<int> cur(n, 0);
    // Per total degree, emit exponent tuples in descending lex order.
    auto emit = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == n - 1) {
            cur[pos] = remaining;
            out.emplace_back(cur);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            cur[pos] = e;
            self(self, pos + 1, remaining - e);
        }
    };
    for (int t = 0; t <= d; ++t) {
        if (n == 0) {
            if (t == 0) out.emplace_back(std::vector<int>{});
            continue;
        }
        emit(emit, 0, t);
    }
    return out;
}

std::string to_string(const Monomial& m, const std::vector<std::string>* names) {
    std::string s;
    for (int i = 0; i < m.var_count(); ++i) {
        if (m.exponents[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += names ? (*names)[i] : ("x" + std::to_string(i));
        if (m.exponents[i] > 1) s += "^" + std::to_string(m.exponents[i]);
    }
    return s.empty() ? "1" : s;
}

Polynomial Polynomial::constant(int n, double c) {
    Polynomial p(n);
    if (c != 0.0) p.terms_[Monomial::one(n)] = c;
    return p;
}

Polynomial Polynomial::variable(int n, int i) {
    if (i < 0 || i >= n) throw std::invalid_argument("variable index out of range");
    Polynomial p(n);
    p.terms_[Monomial::variable(n, i)] = 1.0;
    return p;
}

Polynomial Polynomial::term(int n, Monomial m, double c) {
    if (m.var_count() != n) throw std::invalid_argument("term: monomial arity mismatch");
    Polynomial p(n);
    if (c != 0.0) p.terms_[std::move(m)] = c;
    return p;
}

int Polynomial::degree() const {
    if (terms_.empty()) return kZeroDegree;
    // Graded order: the last stored term has maximal degree.
    return terms_.rbegin()->first.degree();
}

double Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

double Polynomial::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("eval: dimension mismatch");
    double acc = 0.0;
    for (const auto& [mono, c] : terms_) {
        double t = c;
        for (int i = 0; i < n_; ++i) {
            double b = x[i];
            for (int e = mono.exponents[i]; e > 0; --e) t *= b;
        }
        acc += t;
    }
    return acc;
}

Polynomial Polynomial::derivative(int i) const {
    if (i < 0 || i >= n_) throw std::invalid_argument("derivative index out of range");
    Polynomial r(n_);
    for (const auto& [mono, c] : terms_) {
        const int e = mono.exponents[i];
        if (e == 0) continue;
        Monomial m = mono;
        m.exponents[i] = e - 1;
        r.add_term(m, c * e);
    }
    r.prune();
    return r;
}

std::vector<Polynomial> Polynomial::gradient() const {
    std::vector<Polynomial> g;
    g.reserve(n_);
    for (int i = 0; i < n_; ++i) g.push_back(derivative(i));
    return g;
}

std::vector<std::vector<Polynomial>> Polynomial::hessian() const {
    std::vector<std::vector<Polynomial>> h(n_, std::vector<Polynomial>(n_, Polynomial(n_)));
    for (int i = 0; i < n_; ++i) {
        Polynomial di = derivative(i);
        for (int j = i; j < n_; ++j) {
            Polynomial dij = di.derivative(j);
            h[i][j] = dij;
            if (j != i) h[j][i] = dij;
        }
    }
    return h;
}

void Polynomial::add_term(const Monomial& m, double c) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

void Polynomial::prune() {
    double mx = max_abs_coeff();
    if (mx == 0.0) return;
    const double cut = 1e-14 * mx;
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < cut)
            it = terms_.erase(it);
        else
            ++it;
    }
}

void Polynomial::check_same_vars(const Polynomial& a, const Polynomial& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("polynomial arithmetic: dimension mismatch");
}

Polynomial Polynomial::operator-() const {
    Polynomial r(n_);
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial::check_same_vars(a, b);
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    r.prune();
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial::check_same_vars(a, b);
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    r.prune();
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial::check_same_vars(a, b);
    Polynomial r(a.n_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    r.prune();
    return r;
}

Polynomial operator*(double s, const Polynomial& a) {
    Polynomial r(a.var_count());
    if (s == 0.0) return r;
    for (const auto& [m, c] : a.terms_) r.terms_[m] = s * c;
    return r;
}

Polynomial Polynomial::pow(int k) const {
    if (k < 0) throw std::invalid_argument("pow: negative exponent");
    Polynomial r = Polynomial::constant(n_, 1.0);
    Polynomial base = *this;
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

std::string Polynomial::to_string(const std::vector<std::string>* names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        double v = c;
        if (first) {
            if (v < 0) {
                os << "-";
                v = -v;
            }
        } else {
            os << (v < 0 ? " - " : " + ");
            v = std::abs(v);
        }
        first = false;
        if (m.is_one()) {
            os << v;
        } else {
            if (v != 1.0) os << v << "*";
            os << momentforge::to_string(m, names);
        }
    }
    return os.str();
}

Polynomial build_ux(int n, const std::vector<std::vector<double>>& points) {
    Polynomial u = Polynomial::constant(n, 1.0);
    for (const auto& pt : points) {
        if (static_cast<int>(pt.size()) != n) throw std::invalid_argument("build_ux: point dimension mismatch");
        Polynomial s(n);
        for (int i = 0; i < n; ++i) {
            Polynomial d = Polynomial::variable(n, i) - Polynomial::constant(n, pt[i]);
            s = s + d * d;
        }
        u = u * s;
    }
    return u;
}

Polynomial shifted_concavity_transform(const Polynomial& g, int k) {
    if (k < 1) throw std::invalid_argument("shifted_concavity_transform: k must be >= 1");
    Polynomial one = Polynomial::constant(g.var_count(), 1.0);
    return g * (one - g).pow(k);
}

Polynomial affine_substitute(const Polynomial& p, std::span<const double> center,
                             std::span<const double> scale) {
    const int n = p.var_count();
    if (static_cast<int>(center.size()) != n || static_cast<int>(scale.size()) != n)
        throw std::invalid_argument("affine_substitute: dimension mismatch");
    Polynomial out(n);
    for (const auto& [mono, c] : p.terms()) {
        Polynomial term = Polynomial::constant(n, c);
        for (int i = 0; i < n; ++i) {
            if (mono.exponents[i] == 0) continue;
            Polynomial lin = Polynomial::constant(n, center[i]) +
                             scale[i] * Polynomial::variable(n, i);
            term = term * lin.pow(mono.exponents[i]);
        }
        out = out + term;
    }
    return out;
}

bool double_zero_test(const Polynomial& p, std::span<const double> x, double tol) {
    if (tol <= 0) throw std::invalid_argument("double_zero_test: tol must be positive");
    if (std::abs(p.eval(x)) > tol) return false;
    for (int i = 0; i < p.var_count(); ++i)
        if (std::abs(p.derivative(i).eval(x)) > tol) return false;
    return true;
}

}  // namespace momentforge
