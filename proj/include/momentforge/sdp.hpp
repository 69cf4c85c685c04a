#ifndef MOMENTFORGE_SDP_HPP
#define MOMENTFORGE_SDP_HPP

#include <limits>
#include <string>
#include <vector>

#include "momentforge/linalg.hpp"

namespace momentforge {

// One symmetric coefficient entry; (row, col) with row >= col, the value
// applies to both (row, col) and (col, row).
struct BlockEntry {
    int block = 0;
    int row = 0;
    int col = 0;
    double value = 0.0;
};

// <A_j, X> + d_j . u = rhs over the PSD blocks X and free scalars u.
struct SdpConstraint {
    std::vector<BlockEntry> entries;
    std::vector<std::pair<int, double>> free_terms;
    double rhs = 0.0;
};

// Block-diagonal semidefinite program
//   optimize  <C, X> + c . u   s.t.  <A_j, X> + d_j . u = b_j,  X >= 0,
// with u a vector of free scalar variables (moments, margins).
struct SdpProblem {
    std::vector<int> block_dims;
    int num_free = 0;
    std::vector<BlockEntry> cost_entries;
    std::vector<double> free_cost;
    std::vector<SdpConstraint> constraints;
    bool maximize = false;

    void validate() const;  // throws std::invalid_argument on malformed data
    // Dense view of constraint j restricted to one block.
    SymMatrix constraint_matrix(int j, int block) const;
};

enum class SdpStatus { Optimal, PrimalInfeasible, DualInfeasible, MaxIter, Numerical };

std::string to_string(SdpStatus s);

struct SolverSettings {
    double gap_tol = 1e-8;
    double feas_tol = 1e-8;
    int max_iter = 200;
    double step_frac = 0.98;
    // Runs the per-constraint Newton assembly through OpenMP. The serial
    // path computes identical results and is kept for testing/benchmarks.
    bool parallel_kernels = true;
};

struct SdpSolution {
    SdpStatus status = SdpStatus::Numerical;
    std::vector<SymMatrix> x_blocks;
    std::vector<double> free_vars;
    std::vector<double> y;  // dual multipliers, one per input constraint
    std::vector<SymMatrix> z_blocks;
    double objective = std::numeric_limits<double>::quiet_NaN();
    double dual_objective = std::numeric_limits<double>::quiet_NaN();
    double gap = std::numeric_limits<double>::quiet_NaN();  // primal - dual, minimization sense
    int iterations = 0;
};

// Primal-dual path following with the XZ+ZX symmetrized Newton direction,
// fixed centering sigma = 0.3, and fraction-to-boundary steps. Infeasibility
// statuses are heuristic (iterate blowup); callers needing a decision should
// use feasibility_margin.
SdpSolution solve(const SdpProblem& prob, const SolverSettings& settings = {});

struct MarginResult {
    SdpStatus status = SdpStatus::Numerical;
    double t_star = std::numeric_limits<double>::quiet_NaN();
    std::vector<SymMatrix> witness;  // X = X_tilde + t_star * I per block
    int iterations = 0;
};

// Strict-feasibility probe: maximize t s.t. X - t*I >= 0 blockwise under the
// equality constraints of `prob` (its objective is ignored). t_star > 0 means
// strictly feasible; t_star < 0 with Optimal status means infeasible within
// tolerance.
MarginResult feasibility_margin(const SdpProblem& prob, const SolverSettings& settings = {});

}  // namespace momentforge

#endif
