#ifndef MOMENTFORGE_RELAX_HPP
#define MOMENTFORGE_RELAX_HPP

#include <optional>

#include "momentforge/polynomial.hpp"
#include "momentforge/sdp.hpp"

namespace momentforge {

// Monomial bases of the moment matrix (g_0 = 1) and of each localizing
// matrix, truncated so that deg(p^2 g_i) <= d. Constraints with
// deg g_i > d do not participate; zero constraints are skipped (they
// contribute nothing to the truncated module).
struct MomentBasis {
    struct ConstraintBasis {
        int constraint_index = -1;  // -1 for g_0 = 1
        int half_degree = 0;        // floor((d - deg g_i) / 2)
        std::vector<Monomial> monomials;
    };
    int n = 0;
    int d = 0;
    std::vector<ConstraintBasis> bases;  // bases[0] is always g_0
    std::vector<Monomial> full;          // all |alpha| <= d in graded-lex order
};

MomentBasis moment_basis(int n, const PolySystem& g, int d);

// Pseudo-moment sequence y indexed by the graded-lex monomials of degree <= d.
struct MomentVector {
    int degree = 0;
    std::vector<Monomial> monomials;
    std::vector<double> values;

    double value(const Monomial& m) const;
    double apply(const Polynomial& p) const;  // L(p) = sum c_alpha y_alpha
    std::vector<double> point() const;        // (L(X_1),...,L(X_n))
};

// Moment-side SDP: one PSD block per participating constraint, one free
// scalar per monomial of degree <= d, equality rows tying block entries to
// the shared moments, plus y_0 = 1. Objective is L(f).
SdpProblem build_moment_sdp(const Polynomial& f, const PolySystem& g, int d);

struct LasserreResult {
    double value = 0.0;  // +inf when the relaxation is empty, -inf when unbounded
    MomentVector y;
    SdpStatus status = SdpStatus::Numerical;
    int iterations = 0;
};

// Optional conditioning hint: when a bounding box is supplied the relaxation
// is solved in box-normalized coordinates (an affine change of variables,
// under which las_d is invariant) and the moments are mapped back. Large
// boxes otherwise produce badly scaled moment matrices.
using Box = std::vector<std::pair<double, double>>;

LasserreResult lasserre_value(const Polynomial& f, const PolySystem& g, int d,
                              const SolverSettings& settings = {}, const Box* box = nullptr);

// Minimum of a degree <= 1 polynomial over the projection S_d(g).
double support_value(const Polynomial& ell, const PolySystem& g, int d,
                     const SolverSettings& settings = {}, const Box* box = nullptr);

// Gram matrices witnessing f in M_d(g), with the reconstruction residual
// recorded (never hidden).
struct SosCertificate {
    struct GramBlock {
        int constraint_index = -1;  // -1 for g_0
        std::vector<Monomial> basis;
        SymMatrix gram;
    };
    int n = 0;
    int degree = 0;
    std::vector<GramBlock> blocks;
    double residual = 0.0;
    std::vector<double> min_eigenvalues;
};

struct CertificateCheck {
    double residual = 0.0;  // coefficientwise max |f - sum v^T Q_i v g_i|
    std::vector<double> min_eigenvalues;
};

// Recomputes sum_i (v^T Q_i v) g_i symbolically against f. Throws
// std::invalid_argument when the certificate bases are inconsistent with g.
CertificateCheck verify_certificate(const SosCertificate& cert, const Polynomial& f,
                                    const PolySystem& g);

enum class MembershipKind { Member, NotMember, Inconclusive };
std::string to_string(MembershipKind k);

struct MembershipResult {
    MembershipKind kind = MembershipKind::Inconclusive;
    double margin = 0.0;  // t_star of the strict-feasibility probe
    SdpStatus solver_status = SdpStatus::Numerical;
    std::optional<SosCertificate> certificate;  // present exactly for Member
};

// Coefficient-matching Gram SDP decided through feasibility_margin. Member
// verdicts are backed by a verified certificate (residual <= 1e-6 and all
// Gram lambda_min >= -1e-8), which also admits members on the boundary of
// the cone; NotMember requires an Optimal margin <= -1e-7 or an
// inconsistent coefficient system.
MembershipResult sos_membership(const Polynomial& f, const PolySystem& g, int d,
                                const SolverSettings& settings = {});

// Gram SDP used by sos_membership, exposed for tests.
SdpProblem build_gram_sdp(const Polynomial& f, const PolySystem& g, int d);

}  // namespace momentforge

#endif
