#ifndef MOMENTFORGE_HYPOTHESES_HPP
#define MOMENTFORGE_HYPOTHESES_HPP

#include <optional>

#include "momentforge/linalg.hpp"
#include "momentforge/oracle.hpp"
#include "momentforge/polynomial.hpp"
#include "momentforge/sdp.hpp"

namespace momentforge {

// Gradient and Hessian of p evaluated at x.
std::vector<double> gradient_at(const Polynomial& p, std::span<const double> x);
SymMatrix hessian_at(const Polynomial& p, std::span<const double> x);

enum class Concavity { StrictlyConcave, StrictlyQuasiconcave, Fails };
std::string to_string(Concavity c);

struct QuasiconcavityVerdict {
    std::vector<double> point;
    double gradient_norm = 0.0;
    // Max eigenvalue of the Hessian projected onto the tangent space of the
    // gradient; for a vanishing gradient it is the max eigenvalue of the
    // full Hessian. -inf when the tangent space is trivial (n=1).
    double tangent_max_eig = 0.0;
    Concavity verdict = Concavity::Fails;
    std::optional<double> lift_lambda;
};

// Tangent-space test: if the gradient vanishes (within tol), the verdict
// falls back to strict concavity of the full Hessian; otherwise the Hessian
// is projected onto an orthonormal basis of grad^perp (Householder).
QuasiconcavityVerdict strict_quasiconcave_at(const Polynomial& gi, std::span<const double> x,
                                             double tol = 1e-7);

// Doubling search for lambda with lambda*grad*grad^T - Hess > tol*I over
// lambda in {0, 1, 2, 4, ..., lambda_max}.
std::optional<double> quasiconcave_lift_lambda(const Polynomial& gi, std::span<const double> x,
                                               double lambda_max, double tol = 1e-7);

// Smallest k (<= k_max) such that g*(1-g)^k is strictly concave at x;
// requires g(x) ~ 0 within tol.
std::optional<int> concavity_exponent(const Polynomial& gi, std::span<const double> x, int k_max,
                                      double tol = 1e-7);

struct BoundaryAtlas {
    struct Entry {
        std::vector<double> point;
        std::vector<int> active;        // indices i with g_i(point) ~ 0
        std::vector<double> direction;  // minimizing direction that produced it
        bool box_active = false;        // touches the oracle box; unusable
    };
    bool feasible_found = true;  // false marks an empty S(g) distinctly
    std::vector<Entry> entries;
};

// Deterministic direction scheme: coordinate +-axes first, then golden-angle
// (n=2) / Fibonacci-sphere (n=3) / Halton-sphere (n>3) fill, n_dirs total.
std::vector<std::vector<double>> direction_set(int n, int n_dirs);

BoundaryAtlas convex_boundary_sample(const PolySystem& g, int n_dirs, const OracleConfig& cfg);

// For each atlas point, samples `samples` low-discrepancy points in the ball
// of the given radius and reports whether any is strictly feasible
// (all g_i > feas_margin).
std::vector<bool> interior_near_convbd_probe(const PolySystem& g, const BoundaryAtlas& atlas,
                                             double radius, int samples, double feas_margin = 1e-9);

struct ArchimedeanResult {
    bool found = false;  // false = Inconclusive (the search is only a semi-decision)
    int n_bound = 0;     // N with N - sum X_i^2 in M_d(g)
    int degree = 0;
    int n_max_tried = 0;
    int d_max_tried = 0;
};

ArchimedeanResult archimedean_search(const PolySystem& g, int n_max, int d_max,
                                     const SolverSettings& settings = {});

struct EpsilonUMargin {
    double epsilon = 0.0;    // min of the grid part and the Hessian ratios
    double grid_part = 0.0;  // min over retained feasible grid points of (f-a)/u
    std::vector<double> hessian_ratios;
    double oracle_min = 0.0;  // a
};

// Margin for f >= a + eps*u on S(g): grid infimum of (f-a)/u outside the
// exclusion balls, combined with lambda_min(Hess f)/lambda_max(Hess u) at
// each minimizer to cover the excluded neighborhoods. Throws when u
// vanishes at a retained grid point (minimizer list incomplete).
EpsilonUMargin epsilon_u_margin(const Polynomial& f, const PolySystem& g,
                                const std::vector<std::vector<double>>& minimizers,
                                double exclusion_radius, const OracleConfig& cfg);

// The state functional p -> v^T (Hess p)(x) v.
double hessian_state(const Polynomial& p, std::span<const double> x, std::span<const double> v);

}  // namespace momentforge

#endif
