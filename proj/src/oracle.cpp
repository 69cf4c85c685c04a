#include "momentforge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace momentforge {

void OracleConfig::validate() const {
    if (box.empty()) throw std::invalid_argument("OracleConfig: box is empty");
    for (const auto& [lo, hi] : box) {
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw std::invalid_argument("OracleConfig: box must be bounded with lo < hi");
    }
    if (resolution < 3) throw std::invalid_argument("OracleConfig: resolution must be >= 3");
    if (refine_rounds < 0) throw std::invalid_argument("OracleConfig: refine_rounds must be >= 0");
    if (feas_tol < 0) throw std::invalid_argument("OracleConfig: feas_tol must be >= 0");
}

bool set_membership(std::span<const double> x, const PolySystem& g, double feas_tol) {
    for (const auto& gi : g.constraints) {
        if (gi.var_count() != static_cast<int>(x.size()))
            throw std::invalid_argument("set_membership: dimension mismatch");
        if (gi.eval(x) < -feas_tol) return false;
    }
    return true;
}

std::vector<std::vector<double>> minimizer_cluster(const std::vector<std::vector<double>>& points,
                                                   double radius) {
    if (radius <= 0) throw std::invalid_argument("minimizer_cluster: radius must be positive");
    std::vector<std::vector<double>> reps;
    for (const auto& p : points) {
        bool fresh = true;
        for (const auto& r : reps) {
            double d2 = 0.0;
            for (size_t i = 0; i < p.size(); ++i) d2 += (p[i] - r[i]) * (p[i] - r[i]);
            if (std::sqrt(d2) < radius) {
                fresh = false;
                break;
            }
        }
        if (fresh) reps.push_back(p);
    }
    return reps;
}

namespace {

struct Best {
    bool found = false;
    double value = std::numeric_limits<double>::infinity();
    double max_value = -std::numeric_limits<double>::infinity();
    std::vector<double> point;

    // Exact comparisons; ties resolved by the lexicographically smaller point.
    bool improves(double v, const std::vector<double>& p) const {
        if (!found) return true;
        if (v < value) return true;
        if (v > value) return false;
        return std::lexicographical_compare(p.begin(), p.end(), point.begin(), point.end());
    }
    void take(double v, std::vector<double> p) {
        found = true;
        value = v;
        point = std::move(p);
    }
};

void decode(long long idx, const std::vector<std::vector<double>>& axes, std::vector<double>& x) {
    for (int i = static_cast<int>(axes.size()) - 1; i >= 0; --i) {
        const long long len = static_cast<long long>(axes[i].size());
        x[i] = axes[i][idx % len];
        idx /= len;
    }
}

long long grid_size(const std::vector<std::vector<double>>& axes) {
    long long total = 1;
    for (const auto& a : axes) {
        if (a.empty()) throw std::invalid_argument("grid scan: empty axis");
        total *= static_cast<long long>(a.size());
        if (total > 200'000'000LL) throw std::invalid_argument("grid scan: grid too large");
    }
    return total;
}

GridScanResult collect_window(const Polynomial& f, const std::vector<std::vector<double>>& axes,
                              long long total, const Best& best, double window,
                              const std::vector<char>& flag) {
    GridScanResult out;
    out.feasible_found = best.found;
    if (!best.found) {
        out.min_value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.min_value = best.value;
    out.max_value = best.max_value;
    out.argmin = best.point;
    (void)f;
    (void)window;
    std::vector<double> x(axes.size());
    for (long long idx = 0; idx < total; ++idx) {
        if (!flag[static_cast<size_t>(idx)]) continue;
        decode(idx, axes, x);
        out.window_points.push_back(x);
    }
    return out;
}

double cell_norm(const std::vector<double>& h) {
    double s = 0.0;
    for (double v : h) s += v * v;
    return std::sqrt(s);
}

}  // namespace

GridScanResult scan_grid_serial(const Polynomial& f, const PolySystem& g,
                                const std::vector<std::vector<double>>& axes, double feas_tol,
                                double window) {
    const int n = static_cast<int>(axes.size());
    if (f.var_count() != n || g.n != n) throw std::invalid_argument("grid scan: dimension mismatch");
    const long long total = grid_size(axes);

    Best best;
    std::vector<double> x(n);
    for (long long idx = 0; idx < total; ++idx) {
        decode(idx, axes, x);
        if (!set_membership(x, g, feas_tol)) continue;
        const double v = f.eval(x);
        best.max_value = std::max(best.max_value, v);
        if (best.improves(v, x)) best.take(v, x);
    }
    std::vector<char> flag(static_cast<size_t>(total), 0);
    if (best.found) {
        const double cutoff = best.value + window;
        for (long long idx = 0; idx < total; ++idx) {
            decode(idx, axes, x);
            if (!set_membership(x, g, feas_tol)) continue;
            if (f.eval(x) <= cutoff) flag[static_cast<size_t>(idx)] = 1;
        }
    }
    return collect_window(f, axes, total, best, window, flag);
}

// Same contract as the serial scan. The min reduction is an exact total
// order and the window is materialized as flags collected in grid index
// order, so the outcome does not depend on the thread count.
GridScanResult scan_grid_parallel(const Polynomial& f, const PolySystem& g,
                                  const std::vector<std::vector<double>>& axes, double feas_tol,
                                  double window) {
#ifndef _OPENMP
    return scan_grid_serial(f, g, axes, feas_tol, window);
#else
    const int n = static_cast<int>(axes.size());
    if (f.var_count() != n || g.n != n) throw std::invalid_argument("grid scan: dimension mismatch");
    const long long total = grid_size(axes);

    Best best;
#pragma omp parallel
    {
        Best local;
        std::vector<double> x(n);
#pragma omp for schedule(static) nowait
        for (long long idx = 0; idx < total; ++idx) {
            decode(idx, axes, x);
            if (!set_membership(x, g, feas_tol)) continue;
            const double v = f.eval(x);
            local.max_value = std::max(local.max_value, v);
            if (local.improves(v, x)) local.take(v, x);
        }
#pragma omp critical(momentforge_scan_merge)
        {
            best.max_value = std::max(best.max_value, local.max_value);
            if (local.found && best.improves(local.value, local.point))
                best.take(local.value, std::move(local.point));
        }
    }
    std::vector<char> flag(static_cast<size_t>(total), 0);
    if (best.found) {
        const double cutoff = best.value + window;
#pragma omp parallel
        {
            std::vector<double> x(n);
#pragma omp for schedule(static)
            for (long long idx = 0; idx < total; ++idx) {
                decode(idx, axes, x);
                if (!set_membership(x, g, feas_tol)) continue;
                if (f.eval(x) <= cutoff) flag[static_cast<size_t>(idx)] = 1;
            }
        }
    }
    return collect_window(f, axes, total, best, window, flag);
#endif
}

GridMinResult grid_min(const Polynomial& f, const PolySystem& g, const OracleConfig& cfg) {
    cfg.validate();
    const int n = static_cast<int>(cfg.box.size());
    if (f.var_count() != n || g.n != n) throw std::invalid_argument("grid_min: dimension mismatch");
    const double window = 1e-6;

    std::vector<std::vector<double>> axes(n);
    std::vector<double> h(n);
    for (int i = 0; i < n; ++i) {
        const auto [lo, hi] = cfg.box[i];
        axes[i].resize(cfg.resolution);
        for (int k = 0; k < cfg.resolution; ++k)
            axes[i][k] = lo + (k * (hi - lo)) / (cfg.resolution - 1);
        h[i] = (hi - lo) / (cfg.resolution - 1);
    }

    GridScanResult base = scan_grid_parallel(f, g, axes, cfg.feas_tol, window);
    GridMinResult out;
    if (!base.feasible_found) {
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.feasible_found = true;
    double best = base.min_value;

    // Early rounds must keep every grid point whose basin could still win:
    // a point within one cell of the true minimizer trails it by at most
    // L*cell, so the keep-window scales with a Lipschitz estimate from the
    // scanned range and shrinks with the cell. The reported minimizers are
    // filtered at the plain 1e-6 window in the end.
    double width = 0.0;
    for (const auto& [lo, hi] : cfg.box) width = std::max(width, hi - lo);
    const double range = base.max_value - base.min_value;
    const int degf = std::max(f.degree(), 0);
    auto keep_window = [&](double cell) {
        return std::max(window, 2.0 * (1.0 + degf) * range * cell / width);
    };

    std::vector<std::vector<double>> incumbents;
    {
        GridScanResult wide = scan_grid_parallel(f, g, axes, cfg.feas_tol, keep_window(cell_norm(h)));
        incumbents = std::move(wide.window_points);
    }

    // Refinement centers are chosen best-first so the current best basin is
    // always rescanned at the finer cell.
    auto order_by_value = [&](std::vector<std::vector<double>>& pts) {
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        std::stable_sort(pts.begin(), pts.end(),
                         [&](const std::vector<double>& a, const std::vector<double>& b) {
                             return f.eval(a) < f.eval(b);
                         });
    };

    for (int round = 0; round < cfg.refine_rounds; ++round) {
        const double prev_norm = cell_norm(h);
        for (double& v : h) v /= 10.0;
        order_by_value(incumbents);
        std::vector<std::vector<double>> reps = minimizer_cluster(incumbents, 2.0 * prev_norm);
        if (reps.size() > 256) reps.resize(256);

        const double w = keep_window(cell_norm(h));
        std::vector<std::vector<double>> fresh;
        for (const auto& rep : reps) {
            // Walk the local scan along shallow valleys at this cell size:
            // re-center on the argmin until it stops moving, then shrink.
            std::vector<double> center = rep;
            double local_best = std::numeric_limits<double>::infinity();
            for (int walk = 0; walk < 50; ++walk) {
                std::vector<std::vector<double>> local(n);
                for (int i = 0; i < n; ++i) {
                    for (int j = -10; j <= 10; ++j) {
                        double v = center[i] + j * h[i];
                        v = std::min(std::max(v, cfg.box[i].first), cfg.box[i].second);
                        local[i].push_back(v);
                    }
                }
                GridScanResult r = scan_grid_parallel(f, g, local, cfg.feas_tol, w);
                if (!r.feasible_found) break;
                for (auto& p : r.window_points) fresh.push_back(std::move(p));
                best = std::min(best, r.min_value);
                if (r.min_value >= local_best || r.argmin == center) break;
                local_best = r.min_value;
                center = r.argmin;
            }
        }
        for (auto& p : fresh) incumbents.push_back(std::move(p));
        // Re-filter against the (possibly improved) incumbent value.
        std::vector<std::vector<double>> kept;
        for (auto& p : incumbents)
            if (f.eval(p) <= best + w) kept.push_back(std::move(p));
        incumbents = std::move(kept);
    }
    {
        std::vector<std::vector<double>> kept;
        for (auto& p : incumbents)
            if (f.eval(p) <= best + window) kept.push_back(std::move(p));
        incumbents = std::move(kept);
    }

    out.value = best;
    // The 1e-6 window can hold many near-ties in a flat basin, so the final
    // cluster radius is basin-scale, not cell-scale; best-first ordering
    // makes each representative its basin's best point.
    order_by_value(incumbents);
    const double radius = std::max(10.0 * cell_norm(h), 0.01 * width);
    out.minimizers = minimizer_cluster(incumbents, radius);
    return out;
}

}  // namespace momentforge
