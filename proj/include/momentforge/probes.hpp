#ifndef MOMENTFORGE_PROBES_HPP
#define MOMENTFORGE_PROBES_HPP

#include "momentforge/hypotheses.hpp"
#include "momentforge/relax.hpp"

namespace momentforge {

struct SweepRow {
    int d = 0;
    double value = 0.0;   // relaxation value
    double oracle = 0.0;  // oracle reference value
    double gap = 0.0;     // oracle - value
    SdpStatus status = SdpStatus::Numerical;
    double millis = 0.0;  // wall time of the solves behind this row
};

struct AtlasCheck {
    BoundaryAtlas::Entry entry;
    std::vector<QuasiconcavityVerdict> verdicts;  // one per active constraint
    bool interior_near = false;
};

struct HypothesisChecklist {
    ArchimedeanResult archimedean;
    std::vector<AtlasCheck> atlas;
    bool quasiconcavity_green = true;  // every active constraint passes at every atlas point
    bool interior_green = true;        // interior probe positive at every usable atlas point
    std::vector<std::vector<double>> minimizers;
    std::vector<bool> minimizer_hessian_pd;
    std::vector<double> minimizer_infeasibility_dist;  // grid distance to the complement of S(g)
    double epsilon_u = 0.0;
    bool epsilon_u_valid = false;
};

// Per-degree table of relaxation vs oracle values plus the hypothesis
// checklist of the exactness theorems. The checklist annotates the sweep,
// it never gates it.
struct ExactnessReport {
    std::string instance;
    std::string kind;  // "optimization" or "set"
    double tol = 1e-6;
    bool vacuous = false;  // oracle found no feasible point
    std::vector<SweepRow> rows;
    // Set sweeps only: per-direction values at each degree; rows above then
    // carry the worst gap over directions.
    std::vector<std::vector<double>> directions;
    std::vector<std::vector<SweepRow>> per_direction;
    std::optional<int> first_exact_d;
    HypothesisChecklist hypotheses;
};

struct SweepOptions {
    bool even_only = true;  // odd degrees add no squares for even-degree data
    int n_dirs = 16;        // set sweeps
};

ExactnessReport optimization_sweep(const Polynomial& f, const PolySystem& g, int d_min, int d_max,
                                   double tol, const SolverSettings& settings,
                                   const OracleConfig& oracle_cfg, const SweepOptions& opts = {});

ExactnessReport set_exactness_sweep(const PolySystem& g, int d_max, int n_dirs, double tol,
                                    const SolverSettings& settings, const OracleConfig& oracle_cfg,
                                    const SweepOptions& opts = {});

// Desk-scale check of the squeeze equivalence: (a) f positive off the
// minimizers with PD Hessians there, (b) epsilon_u_margin positive.
struct SqueezeReport {
    bool positive_off_minimizers = false;
    bool hessians_pd = false;
    double epsilon_hat = 0.0;
    bool side_a = false;
    bool side_b = false;
    bool agree = false;
    double oracle_min = 0.0;
};

SqueezeReport squeeze_check(const Polynomial& f, const PolySystem& g,
                            const std::vector<std::vector<double>>& minimizers,
                            double exclusion_radius, const OracleConfig& oracle_cfg);

// The fixed two-disks instance: g = 1-(X-1)^2-Y^2, h = 1-X^2-(Y-1)^2.
struct CounterexampleReport {
    double hessian_state_value = 0.0;  // v^T Hess(XY)(0,0) v for v = (1,-1)
    bool double_zero = false;          // XY has a double zero at the origin
    double oracle_min = 0.0;           // min of XY over S(g,h)
    std::vector<double> oracle_minimizer;
    struct MembershipRow {
        int d = 0;
        MembershipKind kind = MembershipKind::Inconclusive;
        double margin = 0.0;
    };
    std::vector<MembershipRow> memberships;  // d in {2,4,6,8}
};

CounterexampleReport counterexample_xy(const SolverSettings& settings = {});

}  // namespace momentforge

#endif
