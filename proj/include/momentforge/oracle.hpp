#ifndef MOMENTFORGE_ORACLE_HPP
#define MOMENTFORGE_ORACLE_HPP

#include "momentforge/polynomial.hpp"

namespace momentforge {

// Deterministic dense-grid minimization over S(g). Results never claim
// anything outside the box.
struct OracleConfig {
    std::vector<std::pair<double, double>> box;  // per-variable interval
    int resolution = 201;                        // points per axis
    int refine_rounds = 4;                       // each shrinks the cell 10x
    double feas_tol = 1e-9;

    static OracleConfig cube(int n, double half_width) {
        OracleConfig c;
        c.box.assign(n, {-half_width, half_width});
        return c;
    }
    void validate() const;
};

struct GridMinResult {
    double value = 0.0;
    std::vector<std::vector<double>> minimizers;
    bool feasible_found = false;
};

GridMinResult grid_min(const Polynomial& f, const PolySystem& g, const OracleConfig& cfg);

// True iff g_i(x) >= -feas_tol for every constraint.
bool set_membership(std::span<const double> x, const PolySystem& g, double feas_tol);

// Greedy clustering in input order; representatives end up pairwise >= radius
// apart (Euclidean).
std::vector<std::vector<double>> minimizer_cluster(const std::vector<std::vector<double>>& points,
                                                   double radius);

// --- grid scan kernels -----------------------------------------------------
// The scan over the product grid is the oracle's data-parallel core. Both
// versions return identical results for any thread count: the reduction is
// an exact (value, lex-point) minimum and window collection preserves grid
// index order.
struct GridScanResult {
    bool feasible_found = false;
    double min_value = 0.0;
    double max_value = 0.0;                          // largest feasible value seen
    std::vector<double> argmin;                      // lex-smallest among value ties
    std::vector<std::vector<double>> window_points;  // feasible, f <= min + window
};

GridScanResult scan_grid_serial(const Polynomial& f, const PolySystem& g,
                                const std::vector<std::vector<double>>& axes, double feas_tol,
                                double window);
GridScanResult scan_grid_parallel(const Polynomial& f, const PolySystem& g,
                                  const std::vector<std::vector<double>>& axes, double feas_tol,
                                  double window);

}  // namespace momentforge

#endif
