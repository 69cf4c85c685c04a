#include "momentforge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace momentforge {

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

SymMatrix operator+(const SymMatrix& x, const SymMatrix& y) {
    if (x.dim_ != y.dim_) throw std::invalid_argument("SymMatrix +: dimension mismatch");
    SymMatrix r = x;
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += y.a_[i];
    return r;
}

SymMatrix operator-(const SymMatrix& x, const SymMatrix& y) {
    if (x.dim_ != y.dim_) throw std::invalid_argument("SymMatrix -: dimension mismatch");
    SymMatrix r = x;
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= y.a_[i];
    return r;
}

SymMatrix operator*(double s, const SymMatrix& x) {
    SymMatrix r = x;
    for (auto& v : r.a_) v *= s;
    return r;
}

EigenResult sym_eigen(const SymMatrix& m) {
    const int n = m.dim();
    EigenResult res;
    res.values.assign(n, 0.0);
    res.vectors.assign(static_cast<size_t>(n) * n, 0.0);
    if (n == 0) return res;

    // Work on a full dense copy; rotations touch the upper triangle.
    std::vector<double> a(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<size_t>(i) * n + j] = m.at(i, j);
    std::vector<double>& v = res.vectors;
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;  // row-major for now

    std::vector<double> b(n), d(n), z(n, 0.0);
    for (int i = 0; i < n; ++i) b[i] = d[i] = a[static_cast<size_t>(i) * n + i];

    auto A = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
    auto V = [&](int i, int j) -> double& { return v[static_cast<size_t>(i) * n + j]; };
    auto rotate = [](double& g, double& h, double s, double tau) {
        const double gg = g, hh = h;
        g = gg - s * (hh + gg * tau);
        h = hh + s * (gg - hh * tau);
    };

    const int max_sweeps = 100;
    bool converged = false;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        double sm = 0.0;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) sm += std::abs(A(p, q));
        if (sm == 0.0) {
            converged = true;
            break;
        }
        const double tresh = sweep < 4 ? 0.2 * sm / (n * n) : 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double g = 100.0 * std::abs(A(p, q));
                if (sweep > 4 && std::abs(d[p]) + g == std::abs(d[p]) &&
                    std::abs(d[q]) + g == std::abs(d[q])) {
                    A(p, q) = 0.0;
                } else if (std::abs(A(p, q)) > tresh) {
                    double h = d[q] - d[p];
                    double t;
                    if (std::abs(h) + g == std::abs(h)) {
                        t = A(p, q) / h;
                    } else {
                        const double theta = 0.5 * h / A(p, q);
                        t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                        if (theta < 0.0) t = -t;
                    }
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    const double tau = s / (1.0 + c);
                    h = t * A(p, q);
                    z[p] -= h;
                    z[q] += h;
                    d[p] -= h;
                    d[q] += h;
                    A(p, q) = 0.0;
                    for (int j = 0; j < p; ++j) rotate(A(j, p), A(j, q), s, tau);
                    for (int j = p + 1; j < q; ++j) rotate(A(p, j), A(j, q), s, tau);
                    for (int j = q + 1; j < n; ++j) rotate(A(p, j), A(q, j), s, tau);
                    for (int j = 0; j < n; ++j) rotate(V(j, p), V(j, q), s, tau);
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
        }
    }
    if (!converged) throw std::runtime_error("sym_eigen: Jacobi failed to converge in 100 sweeps");

    // Ascending eigenvalues; V(i,k) is already component i of eigenvector k.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });
    std::vector<double> sorted_vec(v.size());
    for (int k = 0; k < n; ++k) {
        res.values[k] = d[order[k]];
        for (int i = 0; i < n; ++i)
            sorted_vec[static_cast<size_t>(k) * n + i] = V(i, order[k]);  // column-major
    }
    res.vectors = std::move(sorted_vec);
    return res;
}

double min_eigenvalue(const SymMatrix& a) { return sym_eigen(a).values.front(); }
double max_eigenvalue(const SymMatrix& a) { return sym_eigen(a).values.back(); }

bool is_psd(const SymMatrix& a, double tol) {
    if (tol < 0) throw std::invalid_argument("is_psd: tol must be >= 0");
    if (a.dim() == 0) return true;
    return min_eigenvalue(a) >= -tol;
}

bool is_nd(const SymMatrix& a, double tol) {
    if (tol < 0) throw std::invalid_argument("is_nd: tol must be >= 0");
    if (a.dim() == 0) return true;
    return max_eigenvalue(a) <= -tol;
}

SymMatrix cholesky_spd(const SymMatrix& a) {
    const int n = a.dim();
    SymMatrix l(n);
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a.at(i, i)));
    const double pivot_floor = 1e-12 * std::max(1.0, max_diag);
    for (int j = 0; j < n; ++j) {
        double s = a.at(j, j);
        for (int k = 0; k < j; ++k) s -= l.at(j, k) * l.at(j, k);
        if (s <= pivot_floor) throw std::runtime_error("cholesky_spd: not positive definite");
        l.at(j, j) = std::sqrt(s);
        for (int i = j + 1; i < n; ++i) {
            double t = a.at(i, j);
            for (int k = 0; k < j; ++k) t -= l.at(i, k) * l.at(j, k);
            l.at(i, j) = t / l.at(j, j);
        }
    }
    return l;
}

std::vector<double> cholesky_solve(const SymMatrix& lower, std::span<const double> b) {
    const int n = lower.dim();
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("cholesky_solve: size mismatch");
    std::vector<double> x(b.begin(), b.end());
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) x[i] -= lower.at(i, k) * x[k];
        x[i] /= lower.at(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int k = i + 1; k < n; ++k) x[i] -= lower.at(k, i) * x[k];
        x[i] /= lower.at(i, i);
    }
    return x;
}

std::vector<double> solve_spd(const SymMatrix& a, std::span<const double> b) {
    return cholesky_solve(cholesky_spd(a), b);
}

std::vector<double> lu_solve(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    if (a.size() != static_cast<size_t>(n) * n) throw std::invalid_argument("lu_solve: size mismatch");
    auto A = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(A(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(A(i, k)) > best) {
                best = std::abs(A(i, k));
                piv = i;
            }
        }
        if (best == 0.0) throw std::runtime_error("lu_solve: singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = A(i, k) / A(k, k);
            A(i, k) = f;
            for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
            b[i] -= f * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[i] -= A(i, j) * b[j];
        b[i] /= A(i, i);
    }
    return b;
}

std::vector<double> PivotedCholesky::solve(std::span<const double> rhs) const {
    const int r = rank;
    if (static_cast<int>(rhs.size()) != r) throw std::invalid_argument("PivotedCholesky::solve: size mismatch");
    std::vector<double> x(rhs.begin(), rhs.end());
    auto L = [&](int i, int j) { return lower[static_cast<size_t>(i) * r + j]; };
    for (int i = 0; i < r; ++i) {
        for (int k = 0; k < i; ++k) x[i] -= L(i, k) * x[k];
        x[i] /= L(i, i);
    }
    for (int i = r - 1; i >= 0; --i) {
        for (int k = i + 1; k < r; ++k) x[i] -= L(k, i) * x[k];
        x[i] /= L(i, i);
    }
    return x;
}

PivotedCholesky pivoted_cholesky(const SymMatrix& g, double drop_tol) {
    const int n = g.dim();
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = g.at(i, i);
    // Columns of the growing factor, indexed over all n rows.
    std::vector<std::vector<double>> cols;
    PivotedCholesky out;
    std::vector<char> used(n, 0);
    double first_pivot = 0.0;
    for (int step = 0; step < n; ++step) {
        int piv = -1;
        double best = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!used[i] && diag[i] > best) {
                best = diag[i];
                piv = i;
            }
        }
        if (step == 0) first_pivot = best;
        if (piv < 0 || best < drop_tol * std::max(1.0, first_pivot)) break;
        used[piv] = 1;
        const double lkk = std::sqrt(best);
        std::vector<double> col(n, 0.0);
        for (int i = 0; i < n; ++i) {
            if (used[i] && i != piv) continue;
            double s = g.at(i, piv);
            for (const auto& c : cols) s -= c[i] * c[piv];
            col[i] = s / lkk;
        }
        col[piv] = lkk;
        for (int i = 0; i < n; ++i)
            if (!used[i]) diag[i] -= col[i] * col[i];
        cols.push_back(std::move(col));
        out.pivots.push_back(piv);
    }
    out.rank = static_cast<int>(out.pivots.size());
    out.lower.assign(static_cast<size_t>(out.rank) * out.rank, 0.0);
    for (int i = 0; i < out.rank; ++i)
        for (int k = 0; k <= i; ++k)
            out.lower[static_cast<size_t>(i) * out.rank + k] = cols[k][out.pivots[i]];
    return out;
}

}  // namespace momentforge
