#include "momentforge/relax.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace momentforge {

namespace {

std::map<Monomial, int, GradedLexLess> index_of(const std::vector<Monomial>& monos) {
    std::map<Monomial, int, GradedLexLess> idx;
    for (size_t i = 0; i < monos.size(); ++i) idx[monos[i]] = static_cast<int>(i);
    return idx;
}

}  // namespace

MomentBasis moment_basis(int n, const PolySystem& g, int d) {
    if (d < 0) throw std::invalid_argument("moment_basis: d must be >= 0");
    if (g.n != n) throw std::invalid_argument("moment_basis: variable count mismatch");
    MomentBasis mb;
    mb.n = n;
    mb.d = d;
    mb.full = monomials_up_to(n, d);
    MomentBasis::ConstraintBasis b0;
    b0.constraint_index = -1;
    b0.half_degree = d / 2;
    b0.monomials = monomials_up_to(n, d / 2);
    mb.bases.push_back(std::move(b0));
    for (int i = 0; i < g.size(); ++i) {
        const int dg = g.constraints[i].degree();
        if (dg == kZeroDegree || dg > d) continue;
        MomentBasis::ConstraintBasis bi;
        bi.constraint_index = i;
        bi.half_degree = (d - dg) / 2;
        bi.monomials = monomials_up_to(n, bi.half_degree);
        mb.bases.push_back(std::move(bi));
    }
    return mb;
}

double MomentVector::value(const Monomial& m) const {
    for (size_t i = 0; i < monomials.size(); ++i)
        if (monomials[i] == m) return values[i];
    throw std::invalid_argument("MomentVector: monomial out of range");
}

double MomentVector::apply(const Polynomial& p) const {
    double s = 0.0;
    for (const auto& [m, c] : p.terms()) s += c * value(m);
    return s;
}

std::vector<double> MomentVector::point() const {
    const int n = monomials.empty() ? 0 : monomials.front().var_count();
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = value(Monomial::variable(n, i));
    return x;
}

SdpProblem build_moment_sdp(const Polynomial& f, const PolySystem& g, int d) {
    if (f.var_count() != g.n) throw std::invalid_argument("build_moment_sdp: variable count mismatch");
    if (f.degree() > d) throw std::invalid_argument("build_moment_sdp: deg f exceeds relaxation degree");
    const MomentBasis mb = moment_basis(g.n, g, d);
    const auto midx = index_of(mb.full);

    SdpProblem prob;
    prob.num_free = static_cast<int>(mb.full.size());
    prob.free_cost.assign(prob.num_free, 0.0);
    for (const auto& [m, c] : f.terms()) prob.free_cost[midx.at(m)] = c;
    prob.maximize = false;

    for (size_t bi = 0; bi < mb.bases.size(); ++bi) {
        const auto& basis = mb.bases[bi].monomials;
        prob.block_dims.push_back(static_cast<int>(basis.size()));
        for (size_t r = 0; r < basis.size(); ++r) {
            for (size_t c = 0; c <= r; ++c) {
                SdpConstraint con;
                con.entries.push_back({static_cast<int>(bi), static_cast<int>(r), static_cast<int>(c),
                                       r == c ? 1.0 : 0.5});
                const Monomial prod = basis[r] * basis[c];
                if (mb.bases[bi].constraint_index < 0) {
                    con.free_terms.emplace_back(midx.at(prod), -1.0);
                } else {
                    const Polynomial& gi = g.constraints[mb.bases[bi].constraint_index];
                    for (const auto& [gamma, cg] : gi.terms())
                        con.free_terms.emplace_back(midx.at(prod * gamma), -cg);
                }
                con.rhs = 0.0;
                prob.constraints.push_back(std::move(con));
            }
        }
    }
    SdpConstraint unit;
    unit.free_terms.emplace_back(midx.at(Monomial::one(g.n)), 1.0);
    unit.rhs = 1.0;
    prob.constraints.push_back(std::move(unit));
    return prob;
}

LasserreResult lasserre_value(const Polynomial& f, const PolySystem& g, int d,
                              const SolverSettings& settings, const Box* box) {
    if (box != nullptr) {
        if (static_cast<int>(box->size()) != g.n)
            throw std::invalid_argument("lasserre_value: box dimension mismatch");
        std::vector<double> center(g.n), scale(g.n);
        for (int i = 0; i < g.n; ++i) {
            const auto [lo, hi] = (*box)[i];
            if (!(lo < hi)) throw std::invalid_argument("lasserre_value: degenerate box");
            center[i] = 0.5 * (lo + hi);
            scale[i] = 0.5 * (hi - lo);
        }
        std::vector<Polynomial> gs;
        gs.reserve(g.constraints.size());
        for (const auto& gi : g.constraints) gs.push_back(affine_substitute(gi, center, scale));
        LasserreResult scaled = lasserre_value(affine_substitute(f, center, scale),
                                               PolySystem(g.n, std::move(gs)), d, settings, nullptr);
        LasserreResult res;
        res.value = scaled.value;
        res.status = scaled.status;
        res.iterations = scaled.iterations;
        res.y.degree = d;
        res.y.monomials = monomials_up_to(g.n, d);
        if (!scaled.y.values.empty()) {
            for (const auto& m : res.y.monomials) {
                // y_alpha = L(prod (c_i + s_i T_i)^{alpha_i})
                Polynomial mono = affine_substitute(Polynomial::term(g.n, m, 1.0), center, scale);
                res.y.values.push_back(scaled.y.apply(mono));
            }
        }
        return res;
    }

    SdpProblem prob = build_moment_sdp(f, g, d);
    SdpSolution sol = solve(prob, settings);
    LasserreResult res;
    res.status = sol.status;
    res.iterations = sol.iterations;
    res.y.degree = d;
    res.y.monomials = monomials_up_to(g.n, d);
    res.y.values = sol.free_vars;
    switch (sol.status) {
        case SdpStatus::PrimalInfeasible:
            res.value = std::numeric_limits<double>::infinity();
            break;
        case SdpStatus::DualInfeasible:
            res.value = -std::numeric_limits<double>::infinity();
            break;
        default:
            res.value = sol.objective;
            break;
    }
    return res;
}

double support_value(const Polynomial& ell, const PolySystem& g, int d,
                     const SolverSettings& settings, const Box* box) {
    if (ell.degree() > 1) throw std::invalid_argument("support_value: polynomial must have degree <= 1");
    if (d < 1) throw std::invalid_argument("support_value: d must be >= 1");
    return lasserre_value(ell, g, d, settings, box).value;
}

SdpProblem build_gram_sdp(const Polynomial& f, const PolySystem& g, int d) {
    if (f.var_count() != g.n) throw std::invalid_argument("build_gram_sdp: variable count mismatch");
    if (f.degree() > d) throw std::invalid_argument("build_gram_sdp: deg f exceeds degree bound");
    const MomentBasis mb = moment_basis(g.n, g, d);

    SdpProblem prob;
    for (const auto& b : mb.bases) prob.block_dims.push_back(static_cast<int>(b.monomials.size()));

    // One row per monomial: sum_i <B_{i,alpha}, Q_i> = f_alpha.
    for (const auto& alpha : mb.full) {
        SdpConstraint con;
        for (size_t bi = 0; bi < mb.bases.size(); ++bi) {
            const auto& basis = mb.bases[bi].monomials;
            const Polynomial* gi = mb.bases[bi].constraint_index < 0
                                       ? nullptr
                                       : &g.constraints[mb.bases[bi].constraint_index];
            for (size_t r = 0; r < basis.size(); ++r) {
                for (size_t c = 0; c <= r; ++c) {
                    const Monomial prod = basis[r] * basis[c];
                    double v = 0.0;
                    if (gi == nullptr) {
                        if (prod == alpha) v = 1.0;
                    } else {
                        // v = coefficient of alpha in x^{beta_r + beta_c} * g_i
                        bool ok = true;
                        Monomial gamma = alpha;
                        for (int t = 0; t < mb.n; ++t) {
                            gamma.exponents[t] -= prod.exponents[t];
                            if (gamma.exponents[t] < 0) {
                                ok = false;
                                break;
                            }
                        }
                        if (ok) v = gi->coefficient(gamma);
                    }
                    if (v != 0.0)
                        con.entries.push_back(
                            {static_cast<int>(bi), static_cast<int>(r), static_cast<int>(c), v});
                }
            }
        }
        con.rhs = f.coefficient(alpha);
        prob.constraints.push_back(std::move(con));
    }
    return prob;
}

CertificateCheck verify_certificate(const SosCertificate& cert, const Polynomial& f,
                                    const PolySystem& g) {
    if (cert.n != g.n || f.var_count() != g.n)
        throw std::invalid_argument("verify_certificate: variable count mismatch");
    Polynomial sum(g.n);
    CertificateCheck out;
    for (const auto& blk : cert.blocks) {
        if (blk.constraint_index >= g.size())
            throw std::invalid_argument("verify_certificate: certificate references unknown constraint");
        const int dim = blk.gram.dim();
        if (dim != static_cast<int>(blk.basis.size()))
            throw std::invalid_argument("verify_certificate: basis/Gram size mismatch");
        for (const auto& m : blk.basis)
            if (m.var_count() != g.n)
                throw std::invalid_argument("verify_certificate: basis monomial arity mismatch");
        Polynomial sigma(g.n);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c <= r; ++c) {
                const double w = (r == c ? 1.0 : 2.0) * blk.gram.at(r, c);
                if (w != 0.0)
                    sigma = sigma + Polynomial::term(g.n, blk.basis[r] * blk.basis[c], w);
            }
        if (blk.constraint_index < 0)
            sum = sum + sigma;
        else
            sum = sum + sigma * g.constraints[blk.constraint_index];
        out.min_eigenvalues.push_back(dim > 0 ? min_eigenvalue(blk.gram) : 0.0);
    }
    Polynomial diff = f - sum;
    out.residual = diff.max_abs_coeff();
    return out;
}

MembershipResult sos_membership(const Polynomial& f, const PolySystem& g, int d,
                                const SolverSettings& settings) {
    const MomentBasis mb = moment_basis(g.n, g, d);
    SdpProblem prob = build_gram_sdp(f, g, d);
    MarginResult margin = feasibility_margin(prob, settings);

    MembershipResult res;
    res.solver_status = margin.status;
    res.margin = margin.t_star;

    if (margin.status == SdpStatus::PrimalInfeasible) {
        // No symmetric matrices match the coefficients at all.
        res.kind = MembershipKind::NotMember;
        res.margin = -std::numeric_limits<double>::infinity();
        return res;
    }
    if (margin.status != SdpStatus::Optimal) {
        res.kind = MembershipKind::Inconclusive;
        return res;
    }

    SosCertificate cert;
    cert.n = g.n;
    cert.degree = d;
    for (size_t bi = 0; bi < mb.bases.size(); ++bi) {
        SosCertificate::GramBlock blk;
        blk.constraint_index = mb.bases[bi].constraint_index;
        blk.basis = mb.bases[bi].monomials;
        blk.gram = margin.witness[bi];
        cert.blocks.push_back(std::move(blk));
    }
    CertificateCheck chk = verify_certificate(cert, f, g);
    cert.residual = chk.residual;
    cert.min_eigenvalues = chk.min_eigenvalues;

    const double lmin = chk.min_eigenvalues.empty()
                            ? 0.0
                            : *std::min_element(chk.min_eigenvalues.begin(), chk.min_eigenvalues.end());
    if (chk.residual <= 1e-6 && lmin >= -1e-8) {
        res.kind = MembershipKind::Member;
        res.certificate = std::move(cert);
    } else if (margin.t_star <= -1e-7) {
        res.kind = MembershipKind::NotMember;
    } else {
        res.kind = MembershipKind::Inconclusive;
    }
    return res;
}

std::string to_string(MembershipKind k) {
    switch (k) {
        case MembershipKind::Member: return "Member";
        case MembershipKind::NotMember: return "NotMember";
        case MembershipKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

}  // namespace momentforge
