#include "momentforge/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace momentforge {

void SdpProblem::validate() const {
    if (block_dims.empty() && num_free == 0) throw std::invalid_argument("SdpProblem: no variables");
    for (int d : block_dims)
        if (d <= 0) throw std::invalid_argument("SdpProblem: block dimension must be positive");
    if (constraints.empty()) throw std::invalid_argument("SdpProblem: constraint list is empty");
    if (static_cast<int>(free_cost.size()) != num_free && !free_cost.empty())
        throw std::invalid_argument("SdpProblem: free_cost size mismatch");
    auto check_entry = [&](const BlockEntry& e) {
        if (e.block < 0 || e.block >= static_cast<int>(block_dims.size()))
            throw std::invalid_argument("SdpProblem: block index out of range");
        const int d = block_dims[e.block];
        if (e.row < 0 || e.row >= d || e.col < 0 || e.col >= d)
            throw std::invalid_argument("SdpProblem: entry index out of range");
    };
    for (const auto& e : cost_entries) check_entry(e);
    for (const auto& c : constraints) {
        for (const auto& e : c.entries) check_entry(e);
        for (const auto& [idx, v] : c.free_terms) {
            (void)v;
            if (idx < 0 || idx >= num_free)
                throw std::invalid_argument("SdpProblem: free variable index out of range");
        }
    }
}

SymMatrix SdpProblem::constraint_matrix(int j, int block) const {
    SymMatrix m(block_dims.at(block));
    for (const auto& e : constraints.at(j).entries)
        if (e.block == block) m.at(e.row, e.col) += e.value;
    return m;
}

std::string to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::Optimal: return "Optimal";
        case SdpStatus::PrimalInfeasible: return "PrimalInfeasible";
        case SdpStatus::DualInfeasible: return "DualInfeasible";
        case SdpStatus::MaxIter: return "MaxIter";
        case SdpStatus::Numerical: return "Numerical";
    }
    return "?";
}

namespace {

using Block = std::vector<double>;  // dense row-major square
using Blocks = std::vector<Block>;

struct NormConstraint {
    std::vector<BlockEntry> entries;                 // unique positions, row >= col
    std::vector<std::pair<int, double>> free_terms;  // unique indices
    double rhs = 0.0;
};

NormConstraint normalize(const SdpConstraint& c) {
    std::map<std::tuple<int, int, int>, double> pos;
    for (const auto& e : c.entries) {
        int r = e.row, q = e.col;
        if (r < q) std::swap(r, q);
        pos[{e.block, r, q}] += e.value;
    }
    NormConstraint out;
    for (const auto& [k, v] : pos)
        if (v != 0.0) out.entries.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), v});
    std::map<int, double> ft;
    for (const auto& [i, v] : c.free_terms) ft[i] += v;
    for (const auto& [i, v] : ft)
        if (v != 0.0) out.free_terms.emplace_back(i, v);
    out.rhs = c.rhs;
    return out;
}

double constraint_dot(const NormConstraint& a, const NormConstraint& b) {
    // Frobenius inner product of the symmetric matrices plus the free parts.
    double s = 0.0;
    size_t i = 0, j = 0;
    auto key = [](const BlockEntry& e) { return std::tuple{e.block, e.row, e.col}; };
    while (i < a.entries.size() && j < b.entries.size()) {
        if (key(a.entries[i]) < key(b.entries[j]))
            ++i;
        else if (key(b.entries[j]) < key(a.entries[i]))
            ++j;
        else {
            const auto& e = a.entries[i];
            s += (e.row == e.col ? 1.0 : 2.0) * e.value * b.entries[j].value;
            ++i;
            ++j;
        }
    }
    size_t p = 0, q = 0;
    while (p < a.free_terms.size() && q < b.free_terms.size()) {
        if (a.free_terms[p].first < b.free_terms[q].first)
            ++p;
        else if (b.free_terms[q].first < a.free_terms[p].first)
            ++q;
        else
            s += a.free_terms[p++].second * b.free_terms[q++].second;
    }
    return s;
}

double block_dot_sparse(const NormConstraint& c, const Blocks& x, const std::vector<int>& dims) {
    double s = 0.0;
    for (const auto& e : c.entries) {
        const double v = x[e.block][static_cast<size_t>(e.row) * dims[e.block] + e.col];
        s += (e.row == e.col ? 1.0 : 2.0) * e.value * v;
    }
    return s;
}

void add_scaled_sparse(Blocks& x, const std::vector<int>& dims, const NormConstraint& c, double s) {
    for (const auto& e : c.entries) {
        x[e.block][static_cast<size_t>(e.row) * dims[e.block] + e.col] += s * e.value;
        if (e.row != e.col) x[e.block][static_cast<size_t>(e.col) * dims[e.block] + e.row] += s * e.value;
    }
}

Blocks zeros_like(const std::vector<int>& dims) {
    Blocks b;
    b.reserve(dims.size());
    for (int d : dims) b.emplace_back(static_cast<size_t>(d) * d, 0.0);
    return b;
}

void scaled_identity(Blocks& x, const std::vector<int>& dims, double tau) {
    for (size_t b = 0; b < x.size(); ++b) {
        std::fill(x[b].begin(), x[b].end(), 0.0);
        for (int i = 0; i < dims[b]; ++i) x[b][static_cast<size_t>(i) * dims[b] + i] = tau;
    }
}

double frob_dot(const Block& a, const Block& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_abs(const Blocks& x) {
    double m = 0.0;
    for (const auto& b : x)
        for (double v : b) m = std::max(m, std::abs(v));
    return m;
}

// C = A*B for dense n*n matrices.
void mat_mul(const Block& a, const Block& b, Block& c, int n) {
    std::fill(c.begin(), c.end(), 0.0);
    for (int i = 0; i < n; ++i) {
        const double* ai = a.data() + static_cast<size_t>(i) * n;
        double* ci = c.data() + static_cast<size_t>(i) * n;
        for (int k = 0; k < n; ++k) {
            const double aik = ai[k];
            if (aik == 0.0) continue;
            const double* bk = b.data() + static_cast<size_t>(k) * n;
            for (int j = 0; j < n; ++j) ci[j] += aik * bk[j];
        }
    }
}

SymMatrix to_sym(const Block& a, int n) {
    SymMatrix s(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) s.at(i, j) = 0.5 * (a[static_cast<size_t>(i) * n + j] + a[static_cast<size_t>(j) * n + i]);
    return s;
}

struct BlockEigen {
    std::vector<double> values;
    Block q;  // column-major: q[i + n*k] = component i of eigenvector k
};

BlockEigen eig_block(const Block& a, int n) {
    EigenResult e = sym_eigen(to_sym(a, n));
    return {std::move(e.values), std::move(e.vectors)};
}

// F(a) = (X a + a X)/2 for symmetric a given products already formed:
// returns sym(X * a).
void sym_product(const Block& x, const Block& a, Block& out, Block& tmp, int n) {
    mat_mul(x, a, tmp, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out[static_cast<size_t>(i) * n + j] =
                0.5 * (tmp[static_cast<size_t>(i) * n + j] + tmp[static_cast<size_t>(j) * n + i]);
}

// Solves (U Z + Z U)/2 = W for U, with Z = Q diag(lam) Q^T positive definite.
void lyapunov_solve(const BlockEigen& ze, const Block& w, Block& out, Block& t1, Block& t2, int n) {
    // t1 = Q^T W Q
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += ze.q[static_cast<size_t>(k) + static_cast<size_t>(n) * i] * w[static_cast<size_t>(k) * n + j];
            t2[static_cast<size_t>(i) * n + j] = s;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += t2[static_cast<size_t>(i) * n + k] * ze.q[static_cast<size_t>(k) + static_cast<size_t>(n) * j];
            t1[static_cast<size_t>(i) * n + j] = 2.0 * s / (ze.values[i] + ze.values[j]);
        }
    // out = Q t1 Q^T
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += ze.q[static_cast<size_t>(i) + static_cast<size_t>(n) * k] * t1[static_cast<size_t>(k) * n + j];
            t2[static_cast<size_t>(i) * n + j] = s;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += t2[static_cast<size_t>(i) * n + k] * ze.q[static_cast<size_t>(j) + static_cast<size_t>(n) * k];
            out[static_cast<size_t>(i) * n + j] = s;
        }
}

// Largest step alpha with S + alpha*D still PSD, via eigenvalues of the
// scaled direction; `se` is the eigendecomposition of S.
double max_step(const BlockEigen& se, const Block& d, int n) {
    Block w(static_cast<size_t>(n) * n);
    // w = Lam^{-1/2} Q^T D Q Lam^{-1/2}
    Block t(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += se.q[static_cast<size_t>(k) + static_cast<size_t>(n) * i] * d[static_cast<size_t>(k) * n + j];
            t[static_cast<size_t>(i) * n + j] = s;
        }
    for (int i = 0; i < n; ++i) {
        const double li = std::sqrt(std::max(se.values[i], 1e-300));
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += t[static_cast<size_t>(i) * n + k] * se.q[static_cast<size_t>(k) + static_cast<size_t>(n) * j];
            w[static_cast<size_t>(i) * n + j] = s / li;
        }
    }
    SymMatrix ws(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double li = std::sqrt(std::max(se.values[i], 1e-300));
            const double lj = std::sqrt(std::max(se.values[j], 1e-300));
            // complete the scaling on the right: w was only divided by li
            ws.at(i, j) = 0.5 * (w[static_cast<size_t>(i) * n + j] / lj + w[static_cast<size_t>(j) * n + i] / li);
        }
    const double lmin = min_eigenvalue(ws);
    if (lmin >= -1e-16) return std::numeric_limits<double>::infinity();
    return -1.0 / lmin;
}

struct Prepared {
    std::vector<int> dims;
    std::vector<NormConstraint> cons;   // retained constraints
    std::vector<int> retained_index;    // positions in the original list
    std::vector<int> free_map;          // original free idx -> compact idx or -1
    int num_free = 0;
    std::vector<double> free_cost;      // compact, minimization sense
    Blocks cost;                        // dense C, minimization sense
    bool unbounded_free = false;        // free var with cost but no constraint
    bool inconsistent = false;          // dependent rows with conflicting rhs
};

Prepared prepare(const SdpProblem& prob) {
    Prepared p;
    p.dims = prob.block_dims;
    const double sign = prob.maximize ? -1.0 : 1.0;

    std::vector<NormConstraint> all;
    all.reserve(prob.constraints.size());
    for (const auto& c : prob.constraints) all.push_back(normalize(c));

    // Free variables appearing in no constraint: irrelevant if costless,
    // otherwise the problem is unbounded in that coordinate.
    std::vector<char> used(prob.num_free, 0);
    for (const auto& c : all)
        for (const auto& [i, v] : c.free_terms) {
            (void)v;
            used[i] = 1;
        }
    p.free_map.assign(prob.num_free, -1);
    for (int i = 0; i < prob.num_free; ++i) {
        const double ci = i < static_cast<int>(prob.free_cost.size()) ? prob.free_cost[i] : 0.0;
        if (used[i]) {
            p.free_map[i] = p.num_free++;
            p.free_cost.push_back(sign * ci);
        } else if (ci != 0.0) {
            p.unbounded_free = true;
        }
    }
    for (auto& c : all)
        for (auto& [i, v] : c.free_terms) {
            (void)v;
            i = p.free_map[i];
        }

    // Rank check over the constraint Gram; dependent rows are dropped after
    // a consistency check of their right-hand sides.
    const int m = static_cast<int>(all.size());
    SymMatrix gram(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) gram.at(i, j) = constraint_dot(all[i], all[j]);
    PivotedCholesky pc = pivoted_cholesky(gram, 1e-10);
    std::vector<char> keep(m, 0);
    for (int idx : pc.pivots) keep[idx] = 1;
    double bmax = 0.0;
    for (const auto& c : all) bmax = std::max(bmax, std::abs(c.rhs));
    for (int j = 0; j < m; ++j) {
        if (keep[j]) continue;
        std::vector<double> rhs(pc.rank);
        for (int k = 0; k < pc.rank; ++k) rhs[k] = gram.at(pc.pivots[k], j);
        std::vector<double> coef = pc.rank > 0 ? pc.solve(rhs) : std::vector<double>{};
        double b_rep = 0.0;
        for (int k = 0; k < pc.rank; ++k) b_rep += coef[k] * all[pc.pivots[k]].rhs;
        if (std::abs(all[j].rhs - b_rep) > 1e-7 * (1.0 + bmax)) p.inconsistent = true;
    }
    for (int j = 0; j < m; ++j)
        if (keep[j]) {
            p.retained_index.push_back(j);
            p.cons.push_back(std::move(all[j]));
        }

    p.cost = zeros_like(p.dims);
    for (const auto& e : prob.cost_entries) {
        p.cost[e.block][static_cast<size_t>(e.row) * p.dims[e.block] + e.col] += sign * e.value;
        if (e.row != e.col)
            p.cost[e.block][static_cast<size_t>(e.col) * p.dims[e.block] + e.row] += sign * e.value;
    }
    return p;
}

// Clamps eigenvalue rounding noise from below; refuses genuinely
// indefinite spectra.
bool floor_spectrum(BlockEigen& e) {
    const double scale = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
    if (e.values.front() <= -1e-10 * (1.0 + scale)) return false;
    const double fl = 1e-14 * (1.0 + scale);
    for (double& v : e.values) v = std::max(v, fl);
    return true;
}

struct NewtonScratch {
    std::vector<Blocks> g;  // g[k] = Einv(F(A_k)) per block
    Blocks h;               // Einv(Rc - F(Rd))
};

// Fills g[k] for all constraints; the entries are independent, which is the
// data-parallel kernel of the solver. Each slot is computed by identical
// serial arithmetic, so results do not depend on the thread count.
void assemble_directions(const Prepared& p, const Blocks& x, const std::vector<BlockEigen>& ze,
                         NewtonScratch& s, bool parallel) {
    const int m = static_cast<int>(p.cons.size());
    const int nb = static_cast<int>(p.dims.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int k = 0; k < m; ++k) {
        Blocks a = zeros_like(p.dims);
        add_scaled_sparse(a, p.dims, p.cons[k], 1.0);
        for (int b = 0; b < nb; ++b) {
            const int n = p.dims[b];
            Block fa(static_cast<size_t>(n) * n), t1(fa.size()), t2(fa.size());
            bool touched = false;
            for (const auto& e : p.cons[k].entries)
                if (e.block == b) {
                    touched = true;
                    break;
                }
            if (!touched) {
                std::fill(s.g[k][b].begin(), s.g[k][b].end(), 0.0);
                continue;
            }
            sym_product(x[b], a[b], fa, t1, n);
            lyapunov_solve(ze[b], fa, s.g[k][b], t1, t2, n);
        }
    }
    (void)parallel;
}

}  // namespace

SdpSolution solve(const SdpProblem& prob, const SolverSettings& settings) {
    prob.validate();
    if (settings.gap_tol <= 0 || settings.feas_tol <= 0 || settings.max_iter <= 0 ||
        settings.step_frac <= 0 || settings.step_frac >= 1)
        throw std::invalid_argument("SolverSettings out of range");

    Prepared p = prepare(prob);
    const double sign = prob.maximize ? -1.0 : 1.0;
    SdpSolution sol;
    sol.y.assign(prob.constraints.size(), 0.0);
    sol.free_vars.assign(prob.num_free, 0.0);

    if (p.unbounded_free) {
        sol.status = SdpStatus::DualInfeasible;
        return sol;
    }
    if (p.inconsistent) {
        sol.status = SdpStatus::PrimalInfeasible;
        return sol;
    }

    const int m = static_cast<int>(p.cons.size());
    const int q = p.num_free;
    const int nb = static_cast<int>(p.dims.size());
    int total_dim = 0;
    for (int d : p.dims) total_dim += d;

    double bmax = 0.0, amax = 0.0;
    for (const auto& c : p.cons) {
        bmax = std::max(bmax, std::abs(c.rhs));
        for (const auto& e : c.entries) amax = std::max(amax, std::abs(e.value));
        for (const auto& [i, v] : c.free_terms) {
            (void)i;
            amax = std::max(amax, std::abs(v));
        }
    }
    const double tau = 1.0 + bmax + amax;
    const double blowup = 1e8 * tau;

    Blocks x = zeros_like(p.dims), z = zeros_like(p.dims);
    scaled_identity(x, p.dims, tau);
    scaled_identity(z, p.dims, tau);
    std::vector<double> y(m, 0.0), u(q, 0.0);

    double cmax = max_abs(p.cost);
    for (double v : p.free_cost) cmax = std::max(cmax, std::abs(v));

    NewtonScratch scratch;
    scratch.g.assign(m, zeros_like(p.dims));
    scratch.h = zeros_like(p.dims);

    auto finish = [&](SdpStatus st, int iters) {
        sol.status = st;
        sol.iterations = iters;
        for (int b = 0; b < nb; ++b) {
            sol.x_blocks.push_back(to_sym(x[b], p.dims[b]));
            sol.z_blocks.push_back(to_sym(z[b], p.dims[b]));
        }
        for (int i = 0; i < prob.num_free; ++i)
            if (p.free_map[i] >= 0) sol.free_vars[i] = u[p.free_map[i]];
        for (int k = 0; k < m; ++k) sol.y[p.retained_index[k]] = sign * y[k];
        double pobj = 0.0;
        for (int b = 0; b < nb; ++b) pobj += frob_dot(p.cost[b], x[b]);
        for (int i = 0; i < q; ++i) pobj += p.free_cost[i] * u[i];
        double dobj = 0.0;
        for (int k = 0; k < m; ++k) dobj += p.cons[k].rhs * y[k];
        sol.objective = sign * pobj;
        sol.dual_objective = sign * dobj;
        sol.gap = pobj - dobj;
        return sol;
    };

    const double sigma = 0.3;
    double best_merit = std::numeric_limits<double>::infinity();
    Blocks best_x = x, best_z = z;
    std::vector<double> best_y = y, best_u = u;
    // Restores the iterate with the best combined merit before reporting a
    // non-optimal exit; the last iterate can be mid-bounce on degenerate
    // problems.
    auto finish_best = [&](SdpStatus st, int iters) {
        if (st != SdpStatus::Optimal && std::isfinite(best_merit)) {
            x = best_x;
            z = best_z;
            y = best_y;
            u = best_u;
        }
        return finish(st, iters);
    };
    for (int iter = 0; iter < settings.max_iter; ++iter) {
        // Residuals.
        std::vector<double> rp(m);
        double pobj = 0.0, dobj = 0.0;
        for (int b = 0; b < nb; ++b) pobj += frob_dot(p.cost[b], x[b]);
        for (int i = 0; i < q; ++i) pobj += p.free_cost[i] * u[i];
        for (int k = 0; k < m; ++k) {
            double ax = block_dot_sparse(p.cons[k], x, p.dims);
            for (const auto& [i, v] : p.cons[k].free_terms) ax += v * u[i];
            rp[k] = p.cons[k].rhs - ax;
            dobj += p.cons[k].rhs * y[k];
        }
        Blocks rd = p.cost;
        for (int b = 0; b < nb; ++b)
            for (size_t i = 0; i < rd[b].size(); ++i) rd[b][i] -= z[b][i];
        for (int k = 0; k < m; ++k) add_scaled_sparse(rd, p.dims, p.cons[k], -y[k]);
        std::vector<double> rf(q, 0.0);
        for (int i = 0; i < q; ++i) rf[i] = p.free_cost[i];
        for (int k = 0; k < m; ++k)
            for (const auto& [i, v] : p.cons[k].free_terms) rf[i] -= v * y[k];

        double pinf = 0.0;
        for (double v : rp) pinf = std::max(pinf, std::abs(v));
        double dinf = max_abs(rd);
        for (double v : rf) dinf = std::max(dinf, std::abs(v));

        double mu = 0.0;
        for (int b = 0; b < nb; ++b) mu += frob_dot(x[b], z[b]);
        const double gap_rel = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

        if (!std::isfinite(pinf) || !std::isfinite(dinf) || !std::isfinite(mu))
            return finish(SdpStatus::Numerical, iter);

        if (pinf <= settings.feas_tol * (1.0 + bmax) && dinf <= settings.feas_tol * (1.0 + cmax) &&
            gap_rel <= settings.gap_tol)
            return finish(SdpStatus::Optimal, iter);

        const double merit = std::max({pinf / (settings.feas_tol * (1.0 + bmax)),
                                       dinf / (settings.feas_tol * (1.0 + cmax)),
                                       gap_rel / settings.gap_tol});
        if (merit < best_merit) {
            best_merit = merit;
            best_x = x;
            best_z = z;
            best_y = y;
            best_u = u;
        }

        double ynorm = 0.0;
        for (double v : y) ynorm = std::max(ynorm, std::abs(v));
        double unorm = 0.0;
        for (double v : u) unorm = std::max(unorm, std::abs(v));
        if (std::max(max_abs(x), unorm) > blowup) return finish(SdpStatus::DualInfeasible, iter);
        if (std::max(max_abs(z), ynorm) > blowup) return finish(SdpStatus::PrimalInfeasible, iter);

        // Approximate Farkas rays: a diverging dual objective with a small
        // normalized dual residual certifies primal infeasibility (and
        // symmetrically for the primal side).
        if (dobj > 1e3 * tau && (cmax + dinf) / dobj <= 1e-4 &&
            pinf > 10.0 * settings.feas_tol * (1.0 + bmax))
            return finish(SdpStatus::PrimalInfeasible, iter);
        if (-pobj > 1e3 * tau && (bmax + pinf) / -pobj <= 1e-4 &&
            dinf > 10.0 * settings.feas_tol * (1.0 + cmax))
            return finish(SdpStatus::DualInfeasible, iter);

        if (std::getenv("MOMENTFORGE_SDP_TRACE") != nullptr)
            std::fprintf(stderr, "it=%d gap=%.3e pinf=%.3e dinf=%.3e mu=%.3e\n", iter, gap_rel,
                         pinf, dinf, mu);

        mu /= std::max(1, total_dim);

        // Newton direction (XZ+ZX symmetrization).
        std::vector<BlockEigen> ze(nb), xe(nb);
        try {
            for (int b = 0; b < nb; ++b) {
                ze[b] = eig_block(z[b], p.dims[b]);
                xe[b] = eig_block(x[b], p.dims[b]);
                // Rounding can push eigenvalues of a nearly rank-deficient
                // iterate a hair below zero; clamp noise, fail on genuine loss.
                if (!floor_spectrum(ze[b]) || !floor_spectrum(xe[b]))
                    return finish_best(SdpStatus::Numerical, iter);
            }

            assemble_directions(p, x, ze, scratch, settings.parallel_kernels);

            // h = Einv(Rc - F(Rd)) with Rc = sigma*mu*I - (XZ+ZX)/2.
            for (int b = 0; b < nb; ++b) {
                const int n = p.dims[b];
                Block rc(static_cast<size_t>(n) * n), t1(rc.size()), t2(rc.size());
                sym_product(x[b], z[b], rc, t1, n);  // (XZ+ZX)/2
                for (auto& v : rc) v = -v;
                for (int i = 0; i < n; ++i) rc[static_cast<size_t>(i) * n + i] += sigma * mu;
                Block frd(rc.size());
                sym_product(x[b], rd[b], frd, t1, n);
                for (size_t i = 0; i < rc.size(); ++i) rc[i] -= frd[i];
                lyapunov_solve(ze[b], rc, scratch.h[b], t1, t2, n);
            }

            // KKT system over (dy, du).
            const int dim = m + q;
            std::vector<double> kkt(static_cast<size_t>(dim) * dim, 0.0), rhs(dim, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (settings.parallel_kernels)
#endif
            for (int j = 0; j < m; ++j) {
                for (int k = 0; k < m; ++k) {
                    double s = 0.0;
                    for (const auto& e : p.cons[j].entries) {
                        const double v = scratch.g[k][e.block][static_cast<size_t>(e.row) * p.dims[e.block] + e.col];
                        s += (e.row == e.col ? 1.0 : 2.0) * e.value * v;
                    }
                    kkt[static_cast<size_t>(j) * dim + k] = s;
                }
                for (const auto& [i, v] : p.cons[j].free_terms) {
                    kkt[static_cast<size_t>(j) * dim + m + i] = v;
                    kkt[static_cast<size_t>(m + i) * dim + j] = v;
                }
                double ah = 0.0;
                for (const auto& e : p.cons[j].entries) {
                    const double v = scratch.h[e.block][static_cast<size_t>(e.row) * p.dims[e.block] + e.col];
                    ah += (e.row == e.col ? 1.0 : 2.0) * e.value * v;
                }
                rhs[j] = rp[j] - ah;
            }
            for (int i = 0; i < q; ++i) rhs[m + i] = rf[i];

            std::vector<double> step = lu_solve(std::move(kkt), std::move(rhs));

            // dz = Rd - A*(dy); dx = h + sum dy_k g_k.
            Blocks dz = rd, dx = scratch.h;
            for (int k = 0; k < m; ++k) {
                add_scaled_sparse(dz, p.dims, p.cons[k], -step[k]);
                for (int b = 0; b < nb; ++b)
                    for (size_t i = 0; i < dx[b].size(); ++i) dx[b][i] += step[k] * scratch.g[k][b][i];
            }
            for (int b = 0; b < nb; ++b) {
                const int n = p.dims[b];
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < i; ++j) {
                        const double v = 0.5 * (dx[b][static_cast<size_t>(i) * n + j] + dx[b][static_cast<size_t>(j) * n + i]);
                        dx[b][static_cast<size_t>(i) * n + j] = dx[b][static_cast<size_t>(j) * n + i] = v;
                    }
            }

            double ap = 1.0, ad = 1.0;
            for (int b = 0; b < nb; ++b) {
                ap = std::min(ap, settings.step_frac * max_step(xe[b], dx[b], p.dims[b]));
                ad = std::min(ad, settings.step_frac * max_step(ze[b], dz[b], p.dims[b]));
            }

            if (std::max(ap, ad) < 1e-10) return finish_best(SdpStatus::Numerical, iter);

            for (int b = 0; b < nb; ++b)
                for (size_t i = 0; i < x[b].size(); ++i) {
                    x[b][i] += ap * dx[b][i];
                    z[b][i] += ad * dz[b][i];
                }
            for (int i = 0; i < q; ++i) u[i] += ap * step[m + i];
            for (int k = 0; k < m; ++k) y[k] += ad * step[k];
        } catch (const std::runtime_error&) {
            return finish_best(SdpStatus::Numerical, iter);
        }
    }
    return finish_best(SdpStatus::MaxIter, settings.max_iter);
}

MarginResult feasibility_margin(const SdpProblem& prob, const SolverSettings& settings) {
    SdpProblem margin;
    margin.block_dims = prob.block_dims;
    margin.num_free = 1;
    margin.free_cost = {1.0};
    margin.maximize = true;
    margin.constraints = prob.constraints;
    for (auto& c : margin.constraints) {
        double trace = 0.0;
        // trace of the constraint matrix: X = Xt + t*I shifts <A,X> by t*tr(A)
        std::map<std::tuple<int, int, int>, double> pos;
        for (const auto& e : c.entries) {
            int r = e.row, q = e.col;
            if (r < q) std::swap(r, q);
            pos[{e.block, r, q}] += e.value;
        }
        for (const auto& [k, v] : pos)
            if (std::get<1>(k) == std::get<2>(k)) trace += v;
        c.free_terms.clear();
        c.free_terms.emplace_back(0, trace);
    }

    SdpSolution s = solve(margin, settings);
    MarginResult r;
    r.status = s.status;
    r.iterations = s.iterations;
    if (s.status == SdpStatus::Optimal || s.status == SdpStatus::MaxIter) {
        r.t_star = s.free_vars.empty() ? 0.0 : s.free_vars[0];
        r.witness = s.x_blocks;
        for (size_t b = 0; b < r.witness.size(); ++b)
            for (int i = 0; i < r.witness[b].dim(); ++i) r.witness[b].at(i, i) += r.t_star;
    }
    return r;
}

}  // namespace momentforge
