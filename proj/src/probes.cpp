#include "momentforge/probes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace momentforge {

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double box_width(const OracleConfig& cfg) {
    double w = 0.0;
    for (const auto& [lo, hi] : cfg.box) w = std::max(w, hi - lo);
    return w;
}

// Distance from x to the nearest infeasible grid point (coarse scan).
double infeasibility_distance(const PolySystem& g, const OracleConfig& cfg,
                              std::span<const double> x) {
    const int n = g.n;
    std::vector<std::vector<double>> axes(n);
    for (int i = 0; i < n; ++i) {
        const auto [lo, hi] = cfg.box[i];
        for (int k = 0; k < cfg.resolution; ++k)
            axes[i].push_back(lo + (k * (hi - lo)) / (cfg.resolution - 1));
    }
    long long total = 1;
    for (const auto& a : axes) total *= static_cast<long long>(a.size());
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> p(n);
    for (long long idx = 0; idx < total; ++idx) {
        long long rem = idx;
        for (int i = n - 1; i >= 0; --i) {
            p[i] = axes[i][rem % axes[i].size()];
            rem /= static_cast<long long>(axes[i].size());
        }
        if (set_membership(p, g, cfg.feas_tol)) continue;
        double d2 = 0.0;
        for (int i = 0; i < n; ++i) d2 += (p[i] - x[i]) * (p[i] - x[i]);
        best = std::min(best, std::sqrt(d2));
    }
    return best;
}

HypothesisChecklist run_checklist(const PolySystem& g, const SolverSettings& settings,
                                  const OracleConfig& cfg, int n_dirs) {
    HypothesisChecklist hc;
    const double width = box_width(cfg);
    int arch_nmax = 4;
    while (arch_nmax < g.n * width * width && arch_nmax < (1 << 16)) arch_nmax *= 2;
    hc.archimedean = archimedean_search(g, arch_nmax, 4, settings);

    BoundaryAtlas atlas = convex_boundary_sample(g, n_dirs, cfg);
    std::vector<bool> interior =
        interior_near_convbd_probe(g, atlas, 0.05 * width, 64, cfg.feas_tol);
    for (size_t i = 0; i < atlas.entries.size(); ++i) {
        AtlasCheck ac;
        ac.entry = atlas.entries[i];
        ac.interior_near = interior[i];
        for (int ci : ac.entry.active) {
            QuasiconcavityVerdict v = strict_quasiconcave_at(g.constraints[ci], ac.entry.point);
            if (v.verdict == Concavity::Fails) hc.quasiconcavity_green = false;
            ac.verdicts.push_back(std::move(v));
        }
        if (!ac.entry.box_active && !ac.interior_near) hc.interior_green = false;
        hc.atlas.push_back(std::move(ac));
    }
    return hc;
}

std::vector<int> degree_schedule(int d_min, int d_max, bool even_only) {
    std::vector<int> ds;
    int d = d_min;
    if (even_only && d % 2 != 0) ++d;
    for (; d <= d_max; d += even_only ? 2 : 1) ds.push_back(d);
    return ds;
}

}  // namespace

ExactnessReport optimization_sweep(const Polynomial& f, const PolySystem& g, int d_min, int d_max,
                                   double tol, const SolverSettings& settings,
                                   const OracleConfig& oracle_cfg, const SweepOptions& opts) {
    if (d_min < std::max(f.degree(), 0) || d_max < d_min)
        throw std::invalid_argument("optimization_sweep: bad degree range");
    ExactnessReport rep;
    rep.kind = "optimization";
    rep.tol = tol;
    rep.instance = "min " + f.to_string() + " over " + std::to_string(g.size()) + " constraints";

    GridMinResult oracle = grid_min(f, g, oracle_cfg);
    if (!oracle.feasible_found) {
        rep.vacuous = true;
        return rep;
    }

    rep.hypotheses = run_checklist(g, settings, oracle_cfg, opts.n_dirs);
    rep.hypotheses.minimizers = oracle.minimizers;
    for (const auto& m : oracle.minimizers) {
        const SymMatrix hf = hessian_at(f, m);
        rep.hypotheses.minimizer_hessian_pd.push_back(hf.dim() > 0 && min_eigenvalue(hf) > 1e-7);
        rep.hypotheses.minimizer_infeasibility_dist.push_back(
            infeasibility_distance(g, oracle_cfg, m));
    }
    if (!oracle.minimizers.empty()) {
        double min_pair = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < oracle.minimizers.size(); ++i)
            for (size_t j = i + 1; j < oracle.minimizers.size(); ++j) {
                double d2 = 0.0;
                for (size_t t = 0; t < oracle.minimizers[i].size(); ++t)
                    d2 += (oracle.minimizers[i][t] - oracle.minimizers[j][t]) *
                          (oracle.minimizers[i][t] - oracle.minimizers[j][t]);
                min_pair = std::min(min_pair, std::sqrt(d2));
            }
        double excl = 0.1 * box_width(oracle_cfg);
        if (std::isfinite(min_pair)) excl = std::min(excl, 0.45 * min_pair);
        try {
            rep.hypotheses.epsilon_u =
                epsilon_u_margin(f, g, oracle.minimizers, excl, oracle_cfg).epsilon;
            rep.hypotheses.epsilon_u_valid = true;
        } catch (const std::exception&) {
            rep.hypotheses.epsilon_u_valid = false;
        }
    }

    const std::vector<int> ds = degree_schedule(d_min, d_max, opts.even_only);
    rep.rows.resize(ds.size());
    for (size_t i = 0; i < ds.size(); ++i) {
        const double t0 = now_ms();
        LasserreResult lr = lasserre_value(f, g, ds[i], settings, &oracle_cfg.box);
        SweepRow row;
        row.d = ds[i];
        row.value = lr.value;
        row.oracle = oracle.value;
        row.gap = oracle.value - lr.value;
        row.status = lr.status;
        row.millis = now_ms() - t0;
        rep.rows[i] = std::move(row);
    }
    for (const auto& row : rep.rows) {
        if (row.status == SdpStatus::Optimal && row.gap <= tol) {
            rep.first_exact_d = row.d;
            break;
        }
    }
    return rep;
}

ExactnessReport set_exactness_sweep(const PolySystem& g, int d_max, int n_dirs, double tol,
                                    const SolverSettings& settings, const OracleConfig& oracle_cfg,
                                    const SweepOptions& opts) {
    if (d_max < 2) throw std::invalid_argument("set_exactness_sweep: d_max must be >= 2");
    ExactnessReport rep;
    rep.kind = "set";
    rep.tol = tol;
    rep.instance = "support sweep over " + std::to_string(g.size()) + " constraints, " +
                   std::to_string(n_dirs) + " directions";
    rep.directions = direction_set(g.n, n_dirs);

    rep.hypotheses = run_checklist(g, settings, oracle_cfg, n_dirs);

    const std::vector<int> ds = degree_schedule(2, d_max, opts.even_only);
    rep.per_direction.assign(rep.directions.size(), {});
    bool any_feasible = false;
    for (size_t k = 0; k < rep.directions.size(); ++k) {
        Polynomial ell(g.n);
        for (int i = 0; i < g.n; ++i)
            ell = ell + rep.directions[k][i] * Polynomial::variable(g.n, i);
        GridMinResult oracle = grid_min(ell, g, oracle_cfg);
        if (!oracle.feasible_found) continue;
        any_feasible = true;
        for (int d : ds) {
            const double t0 = now_ms();
            LasserreResult lr = lasserre_value(ell, g, d, settings, &oracle_cfg.box);
            SweepRow row;
            row.d = d;
            row.value = lr.value;
            row.oracle = oracle.value;
            row.gap = oracle.value - lr.value;
            row.status = lr.status;
            row.millis = now_ms() - t0;
            rep.per_direction[k].push_back(std::move(row));
        }
    }
    if (!any_feasible) {
        rep.vacuous = true;
        return rep;
    }

    // Worst gap over directions per degree.
    for (size_t di = 0; di < ds.size(); ++di) {
        SweepRow worst;
        worst.d = ds[di];
        worst.gap = -std::numeric_limits<double>::infinity();
        bool all_ok = true;
        double millis = 0.0;
        for (const auto& dirRows : rep.per_direction) {
            if (dirRows.empty()) continue;
            const SweepRow& r = dirRows[di];
            millis += r.millis;
            if (r.status != SdpStatus::Optimal) all_ok = false;
            if (r.gap > worst.gap) {
                worst.value = r.value;
                worst.oracle = r.oracle;
                worst.gap = r.gap;
            }
        }
        worst.status = all_ok ? SdpStatus::Optimal : SdpStatus::Numerical;
        worst.millis = millis;
        rep.rows.push_back(worst);
    }
    for (const auto& row : rep.rows) {
        if (row.status == SdpStatus::Optimal && row.gap <= tol) {
            rep.first_exact_d = row.d;
            break;
        }
    }
    return rep;
}

SqueezeReport squeeze_check(const Polynomial& f, const PolySystem& g,
                            const std::vector<std::vector<double>>& minimizers,
                            double exclusion_radius, const OracleConfig& oracle_cfg) {
    SqueezeReport rep;
    for (const auto& m : minimizers) {
        if (std::abs(f.eval(m)) > 1e-7 * (1.0 + f.max_abs_coeff()))
            throw std::invalid_argument("squeeze_check: minimizer is not a zero of f");
    }
    GridMinResult oracle = grid_min(f, g, oracle_cfg);
    rep.oracle_min = oracle.feasible_found ? oracle.value : std::numeric_limits<double>::quiet_NaN();

    // (a) positivity off the minimizers plus PD Hessians there.
    EpsilonUMargin em = epsilon_u_margin(f, g, minimizers, exclusion_radius, oracle_cfg);
    rep.positive_off_minimizers = em.grid_part > 0.0;
    rep.hessians_pd = true;
    for (const auto& m : minimizers) {
        const SymMatrix hf = hessian_at(f, m);
        if (!(hf.dim() > 0 && min_eigenvalue(hf) > 1e-7 * (1.0 + hf.max_abs()))) rep.hessians_pd = false;
    }
    rep.side_a = rep.positive_off_minimizers && rep.hessians_pd;

    // (b) the margin itself.
    rep.epsilon_hat = em.epsilon;
    rep.side_b = em.epsilon > 1e-9;
    rep.agree = rep.side_a == rep.side_b;
    return rep;
}

CounterexampleReport counterexample_xy(const SolverSettings& settings) {
    const int n = 2;
    const Polynomial x = Polynomial::variable(n, 0);
    const Polynomial y = Polynomial::variable(n, 1);
    const Polynomial one = Polynomial::constant(n, 1.0);
    const Polynomial g = one - (x - one) * (x - one) - y * y;
    const Polynomial h = one - x * x - (y - one) * (y - one);
    const Polynomial f = x * y;
    PolySystem sys(n, {g, h});

    CounterexampleReport rep;
    const std::vector<double> origin = {0.0, 0.0};
    const std::vector<double> v = {1.0, -1.0};
    rep.hessian_state_value = hessian_state(f, origin, v);
    rep.double_zero = double_zero_test(f, origin, 1e-12);

    OracleConfig cfg = OracleConfig::cube(n, 2.0);
    GridMinResult oracle = grid_min(f, sys, cfg);
    rep.oracle_min = oracle.value;
    if (!oracle.minimizers.empty()) rep.oracle_minimizer = oracle.minimizers.front();

    for (int d : {2, 4, 6, 8}) {
        MembershipResult m = sos_membership(f, sys, d, settings);
        rep.memberships.push_back({d, m.kind, m.margin});
    }
    return rep;
}

}  // namespace momentforge
