#include "momentforge/hypotheses.hpp"

#include <algorithm>
#include <cmath>

#include "momentforge/relax.hpp"

namespace momentforge {

std::vector<double> gradient_at(const Polynomial& p, std::span<const double> x) {
    std::vector<double> g(p.var_count());
    for (int i = 0; i < p.var_count(); ++i) g[i] = p.derivative(i).eval(x);
    return g;
}

SymMatrix hessian_at(const Polynomial& p, std::span<const double> x) {
    const int n = p.var_count();
    SymMatrix h(n);
    for (int i = 0; i < n; ++i) {
        Polynomial di = p.derivative(i);
        for (int j = i; j < n; ++j) h.at(j, i) = di.derivative(j).eval(x);
    }
    return h;
}

std::string to_string(Concavity c) {
    switch (c) {
        case Concavity::StrictlyConcave: return "StrictlyConcave";
        case Concavity::StrictlyQuasiconcave: return "StrictlyQuasiconcave";
        case Concavity::Fails: return "Fails";
    }
    return "?";
}

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double t : v) s += t * t;
    return std::sqrt(s);
}

// Orthonormal basis of w^perp via the Householder reflection mapping e_1 to
// +-w; columns 2..n of the reflection span the complement.
std::vector<std::vector<double>> tangent_basis(std::span<const double> w_in) {
    const int n = static_cast<int>(w_in.size());
    std::vector<double> w(w_in.begin(), w_in.end());
    const double nw = norm2(w);
    for (double& t : w) t /= nw;
    const double sigma = w[0] >= 0 ? 1.0 : -1.0;
    std::vector<double> v = w;
    v[0] += sigma;
    double vv = 0.0;
    for (double t : v) vv += t * t;
    std::vector<std::vector<double>> basis;
    for (int j = 1; j < n; ++j) {
        std::vector<double> col(n, 0.0);
        col[j] = 1.0;
        const double scale = 2.0 * v[j] / vv;
        for (int i = 0; i < n; ++i) col[i] -= scale * v[i];
        basis.push_back(std::move(col));
    }
    return basis;
}

SymMatrix project_hessian(const SymMatrix& h, const std::vector<std::vector<double>>& basis) {
    const int n = h.dim();
    const int m = static_cast<int>(basis.size());
    SymMatrix out(m);
    for (int a = 0; a < m; ++a) {
        std::vector<double> hb(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) hb[i] += h.at(i, j) * basis[a][j];
        for (int b = 0; b <= a; ++b) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += basis[b][i] * hb[i];
            out.at(a, b) = s;
        }
    }
    return out;
}

}  // namespace

QuasiconcavityVerdict strict_quasiconcave_at(const Polynomial& gi, std::span<const double> x,
                                             double tol) {
    if (tol <= 0) throw std::invalid_argument("strict_quasiconcave_at: tol must be positive");
    if (gi.var_count() != static_cast<int>(x.size()))
        throw std::invalid_argument("strict_quasiconcave_at: dimension mismatch");
    QuasiconcavityVerdict out;
    out.point.assign(x.begin(), x.end());
    std::vector<double> grad = gradient_at(gi, x);
    out.gradient_norm = norm2(grad);
    SymMatrix h = hessian_at(gi, x);

    const bool concave = is_nd(h, tol);
    if (out.gradient_norm <= tol) {
        out.tangent_max_eig = h.dim() > 0 ? max_eigenvalue(h) : 0.0;
        out.verdict = concave ? Concavity::StrictlyConcave : Concavity::Fails;
        return out;
    }
    if (gi.var_count() == 1) {
        // Trivial tangent space: a nonvanishing derivative suffices.
        out.tangent_max_eig = -std::numeric_limits<double>::infinity();
        out.verdict = concave ? Concavity::StrictlyConcave : Concavity::StrictlyQuasiconcave;
    } else {
        SymMatrix proj = project_hessian(h, tangent_basis(grad));
        out.tangent_max_eig = max_eigenvalue(proj);
        if (concave)
            out.verdict = Concavity::StrictlyConcave;
        else if (out.tangent_max_eig <= -tol)
            out.verdict = Concavity::StrictlyQuasiconcave;
        else
            out.verdict = Concavity::Fails;
    }
    if (out.verdict != Concavity::Fails) out.lift_lambda = quasiconcave_lift_lambda(gi, x, 1 << 24, tol);
    return out;
}

std::optional<double> quasiconcave_lift_lambda(const Polynomial& gi, std::span<const double> x,
                                               double lambda_max, double tol) {
    if (lambda_max <= 0) throw std::invalid_argument("quasiconcave_lift_lambda: lambda_max must be positive");
    std::vector<double> grad = gradient_at(gi, x);
    SymMatrix h = hessian_at(gi, x);
    const int n = h.dim();
    for (double lambda = 0.0;; lambda = lambda == 0.0 ? 1.0 : 2.0 * lambda) {
        if (lambda > lambda_max) return std::nullopt;
        SymMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) m.at(i, j) = lambda * grad[i] * grad[j] - h.at(i, j);
        if (min_eigenvalue(m) > tol) return lambda;
    }
}

std::optional<int> concavity_exponent(const Polynomial& gi, std::span<const double> x, int k_max,
                                      double tol) {
    if (std::abs(gi.eval(x)) > tol)
        throw std::invalid_argument("concavity_exponent: g(x) must vanish within tol");
    const int n = gi.var_count();
    const double gx = std::abs(gi.eval(x));
    for (int k = 1; k <= k_max; ++k) {
        SymMatrix h = hessian_at(shifted_concavity_transform(gi, k), x);
        if (gx <= 1e-12) {
            // Exact zero: cross-validate against Hess g - 2k grad grad^T.
            std::vector<double> grad = gradient_at(gi, x);
            SymMatrix closed = hessian_at(gi, x);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j) closed.at(i, j) -= 2.0 * k * grad[i] * grad[j];
            double dev = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j) dev = std::max(dev, std::abs(closed.at(i, j) - h.at(i, j)));
            const double scale = std::pow(1.0 + gi.max_abs_coeff(), 2 * k + 2);
            if (dev > 1e-9 * scale)
                throw std::runtime_error("concavity_exponent: closed-form cross-check failed");
        }
        if (is_nd(h, tol)) return k;
    }
    return std::nullopt;
}

std::vector<std::vector<double>> direction_set(int n, int n_dirs) {
    if (n < 1 || n_dirs < 1) throw std::invalid_argument("direction_set: bad arguments");
    std::vector<std::vector<double>> dirs;
    if (n == 1) {
        dirs.push_back({1.0});
        if (n_dirs > 1) dirs.push_back({-1.0});
        return dirs;
    }
    for (int i = 0; i < n && static_cast<int>(dirs.size()) < n_dirs; ++i) {
        std::vector<double> d(n, 0.0);
        d[i] = 1.0;
        dirs.push_back(d);
        if (static_cast<int>(dirs.size()) < n_dirs) {
            d[i] = -1.0;
            dirs.push_back(d);
        }
    }
    int k = 0;
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    while (static_cast<int>(dirs.size()) < n_dirs) {
        std::vector<double> d(n);
        if (n == 2) {
            const double theta = 2.0 * M_PI * std::fmod((k + 1) / golden, 1.0);
            d = {std::cos(theta), std::sin(theta)};
        } else if (n == 3) {
            // Fibonacci sphere point k of n_dirs.
            const double z = 1.0 - 2.0 * (k + 0.5) / std::max(1, n_dirs - 2 * n);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double theta = 2.0 * M_PI * std::fmod((k + 1) / golden, 1.0);
            d = {r * std::cos(theta), r * std::sin(theta), z};
        } else {
            // Halton cube point pushed to the sphere.
            static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
            double nrm = 0.0;
            for (int i = 0; i < n; ++i) {
                double f = 1.0, r = 0.0;
                int idx = k + 1;
                while (idx > 0) {
                    f /= primes[i % 8];
                    r += f * (idx % primes[i % 8]);
                    idx /= primes[i % 8];
                }
                d[i] = 2.0 * r - 1.0;
                nrm += d[i] * d[i];
            }
            nrm = std::sqrt(nrm);
            if (nrm < 1e-6) {
                ++k;
                continue;
            }
            for (double& v : d) v /= nrm;
        }
        dirs.push_back(d);
        ++k;
    }
    return dirs;
}

BoundaryAtlas convex_boundary_sample(const PolySystem& g, int n_dirs, const OracleConfig& cfg) {
    if (n_dirs < 1) throw std::invalid_argument("convex_boundary_sample: n_dirs must be >= 1");
    cfg.validate();
    const int n = g.n;
    BoundaryAtlas atlas;
    std::vector<double> cell(n);
    for (int i = 0; i < n; ++i)
        cell[i] = (cfg.box[i].second - cfg.box[i].first) / (cfg.resolution - 1);
    double coarse_cell = 0.0;
    for (double h : cell) coarse_cell += h * h;
    coarse_cell = std::sqrt(coarse_cell);
    double final_cell = coarse_cell;
    for (int r = 0; r < cfg.refine_rounds; ++r) final_cell /= 10.0;
    const double dedup_radius = std::max(10.0 * final_cell, 1e-9);

    // A grid minimizer sits up to a cell inside the set; push it onto the
    // feasibility frontier along the minimizing ray so the active sets are
    // sharp at the stated tolerance.
    auto polish = [&](std::vector<double> pt, const std::vector<double>& dir) {
        std::vector<double> probe(n);
        double lo = 0.0, hi = 2.0 * coarse_cell;
        auto feasible_at = [&](double t) {
            for (int i = 0; i < n; ++i) probe[i] = pt[i] - t * dir[i];
            return set_membership(probe, g, cfg.feas_tol);
        };
        if (feasible_at(hi)) return pt;  // flat or box-limited along the ray
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (feasible_at(mid) ? lo : hi) = mid;
        }
        for (int i = 0; i < n; ++i) pt[i] -= lo * dir[i];
        return pt;
    };

    bool any_feasible = false;
    for (const auto& dir : direction_set(n, n_dirs)) {
        Polynomial ell(n);
        for (int i = 0; i < n; ++i)
            ell = ell + dir[i] * Polynomial::variable(n, i);
        GridMinResult r = grid_min(ell, g, cfg);
        if (!r.feasible_found) continue;
        any_feasible = true;
        for (auto& raw_pt : r.minimizers) {
            const std::vector<double> pt = polish(raw_pt, dir);
            bool dup = false;
            for (const auto& e : atlas.entries) {
                double d2 = 0.0;
                for (int i = 0; i < n; ++i) d2 += (pt[i] - e.point[i]) * (pt[i] - e.point[i]);
                if (std::sqrt(d2) < dedup_radius) {
                    dup = true;
                    break;
                }
            }
            if (dup) continue;
            BoundaryAtlas::Entry e;
            e.point = pt;
            e.direction = dir;
            for (int i = 0; i < g.size(); ++i) {
                const double scale = 1.0 + g.constraints[i].max_abs_coeff();
                if (std::abs(g.constraints[i].eval(pt)) <= 1e-6 * scale) e.active.push_back(i);
            }
            for (int i = 0; i < n; ++i) {
                if (pt[i] - cfg.box[i].first <= cell[i] + 1e-9 ||
                    cfg.box[i].second - pt[i] <= cell[i] + 1e-9)
                    e.box_active = true;
            }
            atlas.entries.push_back(std::move(e));
        }
    }
    atlas.feasible_found = any_feasible;
    return atlas;
}

namespace {

double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

}  // namespace

std::vector<bool> interior_near_convbd_probe(const PolySystem& g, const BoundaryAtlas& atlas,
                                             double radius, int samples, double feas_margin) {
    if (radius <= 0) throw std::invalid_argument("interior_near_convbd_probe: radius must be positive");
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    const int n = g.n;
    std::vector<bool> out;
    out.reserve(atlas.entries.size());
    for (const auto& e : atlas.entries) {
        bool found = false;
        int accepted = 0;
        for (int k = 1; accepted < samples && k <= 64 * samples && !found; ++k) {
            std::vector<double> x(n);
            double nrm = 0.0;
            for (int i = 0; i < n; ++i) {
                x[i] = 2.0 * halton(k, primes[i % 8]) - 1.0;
                nrm += x[i] * x[i];
            }
            if (nrm > 1.0) continue;  // stay inside the unit ball
            ++accepted;
            for (int i = 0; i < n; ++i) x[i] = e.point[i] + radius * x[i];
            bool strict = true;
            for (const auto& gi : g.constraints)
                if (gi.eval(x) <= feas_margin) {
                    strict = false;
                    break;
                }
            found = strict;
        }
        out.push_back(found);
    }
    return out;
}

ArchimedeanResult archimedean_search(const PolySystem& g, int n_max, int d_max,
                                     const SolverSettings& settings) {
    if (n_max < 1 || d_max < 1) throw std::invalid_argument("archimedean_search: bounds must be >= 1");
    ArchimedeanResult res;
    res.n_max_tried = n_max;
    res.d_max_tried = d_max;
    Polynomial sum_sq(g.n);
    for (int i = 0; i < g.n; ++i) {
        Polynomial xi = Polynomial::variable(g.n, i);
        sum_sq = sum_sq + xi * xi;
    }
    for (int d = 2; d <= d_max; d += 2) {
        for (int N = 1; N <= n_max; N *= 2) {
            Polynomial f = Polynomial::constant(g.n, static_cast<double>(N)) - sum_sq;
            MembershipResult m = sos_membership(f, g, d, settings);
            if (m.kind == MembershipKind::Member) {
                res.found = true;
                res.n_bound = N;
                res.degree = d;
                return res;
            }
        }
    }
    return res;
}

EpsilonUMargin epsilon_u_margin(const Polynomial& f, const PolySystem& g,
                                const std::vector<std::vector<double>>& minimizers,
                                double exclusion_radius, const OracleConfig& cfg) {
    if (minimizers.empty()) throw std::invalid_argument("epsilon_u_margin: minimizer list is empty");
    for (size_t i = 0; i < minimizers.size(); ++i)
        for (size_t j = i + 1; j < minimizers.size(); ++j) {
            double d2 = 0.0;
            for (size_t t = 0; t < minimizers[i].size(); ++t)
                d2 += (minimizers[i][t] - minimizers[j][t]) * (minimizers[i][t] - minimizers[j][t]);
            if (std::sqrt(d2) <= 1e-12)
                throw std::invalid_argument("epsilon_u_margin: minimizers must be pairwise distinct");
        }
    cfg.validate();
    const int n = g.n;

    GridMinResult base = grid_min(f, g, cfg);
    if (!base.feasible_found) throw std::runtime_error("epsilon_u_margin: no feasible point in the box");
    EpsilonUMargin out;
    out.oracle_min = base.value;

    Polynomial u = build_ux(n, minimizers);
    const double u_floor = 1e-12;

    std::vector<std::vector<double>> axes(n);
    for (int i = 0; i < n; ++i) {
        const auto [lo, hi] = cfg.box[i];
        axes[i].resize(cfg.resolution);
        for (int k = 0; k < cfg.resolution; ++k)
            axes[i][k] = lo + (k * (hi - lo)) / (cfg.resolution - 1);
    }
    double grid_part = std::numeric_limits<double>::infinity();
    std::vector<double> x(n);
    long long total = 1;
    for (const auto& a : axes) total *= static_cast<long long>(a.size());
    for (long long idx = 0; idx < total; ++idx) {
        long long rem = idx;
        for (int i = n - 1; i >= 0; --i) {
            x[i] = axes[i][rem % axes[i].size()];
            rem /= static_cast<long long>(axes[i].size());
        }
        if (!set_membership(x, g, cfg.feas_tol)) continue;
        bool excluded = false;
        for (const auto& m : minimizers) {
            double d2 = 0.0;
            for (int i = 0; i < n; ++i) d2 += (x[i] - m[i]) * (x[i] - m[i]);
            if (std::sqrt(d2) < exclusion_radius) {
                excluded = true;
                break;
            }
        }
        if (excluded) continue;
        const double ux = u.eval(x);
        if (ux <= u_floor)
            throw std::runtime_error("epsilon_u_margin: u vanishes at a retained grid point");
        grid_part = std::min(grid_part, (f.eval(x) - base.value) / ux);
    }
    out.grid_part = grid_part;

    double eps = grid_part;
    for (const auto& m : minimizers) {
        const double num = min_eigenvalue(hessian_at(f, m));
        const double den = max_eigenvalue(hessian_at(u, m));
        const double ratio = den > 0 ? num / den : 0.0;
        out.hessian_ratios.push_back(ratio);
        eps = std::min(eps, ratio);
    }
    out.epsilon = eps;
    return out;
}

double hessian_state(const Polynomial& p, std::span<const double> x, std::span<const double> v) {
    if (p.var_count() != static_cast<int>(x.size()) || x.size() != v.size())
        throw std::invalid_argument("hessian_state: dimension mismatch");
    SymMatrix h = hessian_at(p, x);
    double s = 0.0;
    for (int i = 0; i < h.dim(); ++i)
        for (int j = 0; j < h.dim(); ++j) s += v[i] * h.at(i, j) * v[j];
    return s;
}

}  // namespace momentforge
