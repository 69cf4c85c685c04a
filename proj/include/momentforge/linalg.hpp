#ifndef MOMENTFORGE_LINALG_HPP
#define MOMENTFORGE_LINALG_HPP

#include <span>
#include <stdexcept>
#include <vector>

namespace momentforge {

// Dense symmetric matrix, lower triangle stored row-major:
// entry (i,j) with i >= j lives at i*(i+1)/2 + j.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * (dim + 1) / 2, 0.0) {}
    static SymMatrix identity(int dim) {
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }
    double& at(int i, int j) { return a_[idx(i, j)]; }
    double at(int i, int j) const { return a_[idx(i, j)]; }
    std::span<const double> packed() const { return a_; }
    std::span<double> packed() { return a_; }

    double max_abs() const;

    friend SymMatrix operator+(const SymMatrix& x, const SymMatrix& y);
    friend SymMatrix operator-(const SymMatrix& x, const SymMatrix& y);
    friend SymMatrix operator*(double s, const SymMatrix& x);

private:
    size_t idx(int i, int j) const {
        if (i < j) std::swap(i, j);
        return static_cast<size_t>(i) * (i + 1) / 2 + j;
    }
    int dim_ = 0;
    std::vector<double> a_;
};

struct EigenResult {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column-major dim*dim; column k pairs with values[k]
};

// Cyclic Jacobi with threshold sweeps, capped at 100 sweeps. Throws
// std::runtime_error on non-convergence (signals ill-conditioning).
EigenResult sym_eigen(const SymMatrix& a);

double min_eigenvalue(const SymMatrix& a);
double max_eigenvalue(const SymMatrix& a);
bool is_psd(const SymMatrix& a, double tol);  // lambda_min >= -tol
bool is_nd(const SymMatrix& a, double tol);   // lambda_max <= -tol

// Lower Cholesky factor of a positive definite matrix; throws
// std::runtime_error("not positive definite") on a non-positive pivot
// (relative pivot tolerance 1e-12).
SymMatrix cholesky_spd(const SymMatrix& a);
std::vector<double> solve_spd(const SymMatrix& a, std::span<const double> b);
// Solves with a precomputed factor from cholesky_spd.
std::vector<double> cholesky_solve(const SymMatrix& lower, std::span<const double> b);

// Dense LU with partial pivoting for the (generally nonsymmetric) SDP
// Newton systems. `a` is n*n row-major and is consumed.
std::vector<double> lu_solve(std::vector<double> a, std::vector<double> b);

// Symmetric pivoted Cholesky used for rank detection; pivots below
// drop_tol * max(1, first pivot) end the factorization.
struct PivotedCholesky {
    std::vector<int> pivots;  // selected indices in elimination order
    std::vector<double> lower;  // rank x rank lower factor of G[pivots,pivots], row-major
    int rank = 0;

    // Solves G[pivots,pivots] x = rhs (rhs indexed like `pivots`).
    std::vector<double> solve(std::span<const double> rhs) const;
};
PivotedCholesky pivoted_cholesky(const SymMatrix& g, double drop_tol);

}  // namespace momentforge

#endif
