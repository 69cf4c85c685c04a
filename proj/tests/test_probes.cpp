#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "momentforge/probes.hpp"

using namespace momentforge;

namespace {

const std::vector<std::string> kX = {"x"};
const std::vector<std::string> kXY = {"x", "y"};

PolySystem interval() { return PolySystem(1, {parse_poly("1 - x^2", kX)}); }

}  // namespace

TEST_CASE("optimization sweep: interior minimizer with PD Hessian is exact at d=2") {
    Polynomial f = parse_poly("(x - 0.3)^2", kX);
    ExactnessReport rep = optimization_sweep(f, interval(), 2, 6, 1e-6, SolverSettings{},
                                             OracleConfig::cube(1, 2.0));
    REQUIRE_FALSE(rep.vacuous);
    REQUIRE(rep.first_exact_d.has_value());
    CHECK(*rep.first_exact_d == 2);
    CHECK(rep.rows.front().oracle == doctest::Approx(0.0).epsilon(1e-9));
    // gap rows: nonnegative (within tolerance) and nonincreasing
    double prev_gap = std::numeric_limits<double>::infinity();
    for (const auto& row : rep.rows) {
        CHECK(row.gap >= -1e-6);
        CHECK(row.gap <= prev_gap + 1e-6);
        prev_gap = row.gap;
    }
    // exactness is stable at higher degrees
    for (const auto& row : rep.rows)
        if (row.d > *rep.first_exact_d && row.status == SdpStatus::Optimal)
            CHECK(row.gap <= rep.tol);
    // hypothesis checklist
    REQUIRE(rep.hypotheses.minimizers.size() == 1);
    CHECK(rep.hypotheses.minimizers[0][0] == doctest::Approx(0.3).epsilon(1e-5));
    CHECK(rep.hypotheses.minimizer_hessian_pd[0]);
    CHECK(rep.hypotheses.minimizer_infeasibility_dist[0] > 0.5);
    CHECK(rep.hypotheses.archimedean.found);
    CHECK(rep.hypotheses.archimedean.n_bound == 1);
    CHECK(rep.hypotheses.archimedean.degree == 2);
    CHECK(rep.hypotheses.epsilon_u_valid);
    CHECK(rep.hypotheses.epsilon_u > 0.0);
}

TEST_CASE("optimization sweep: constant objective is exact at once") {
    ExactnessReport rep = optimization_sweep(Polynomial::constant(1, 3.0), interval(), 2, 4, 1e-6,
                                             SolverSettings{}, OracleConfig::cube(1, 2.0));
    REQUIRE(rep.first_exact_d.has_value());
    CHECK(*rep.first_exact_d == 2);
    CHECK(rep.rows.front().gap == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("optimization sweep: two interior minimizers") {
    Polynomial f = parse_poly("(x^2 - 0.25)^2", kX);
    ExactnessReport rep = optimization_sweep(f, interval(), 4, 8, 1e-6, SolverSettings{},
                                             OracleConfig::cube(1, 2.0));
    REQUIRE(rep.first_exact_d.has_value());
    CHECK(*rep.first_exact_d <= 8);
    REQUIRE(rep.hypotheses.minimizers.size() == 2);
    CHECK(rep.hypotheses.minimizer_hessian_pd[0]);
    CHECK(rep.hypotheses.minimizer_hessian_pd[1]);
}

TEST_CASE("optimization sweep: vacuous instance") {
    PolySystem g(1, {parse_poly("0 - 1 - x^2", kX)});
    ExactnessReport rep = optimization_sweep(parse_poly("x", kX), g, 2, 4, 1e-6, SolverSettings{},
                                             OracleConfig::cube(1, 1.0));
    CHECK(rep.vacuous);
    CHECK(rep.rows.empty());
}

TEST_CASE("set sweep: the unit disk closes at d=2 with green hypotheses") {
    PolySystem g(2, {parse_poly("1 - x^2 - y^2", kXY)});
    SweepOptions opts;
    ExactnessReport rep =
        set_exactness_sweep(g, 4, 16, 1e-6, SolverSettings{}, OracleConfig::cube(2, 2.0), opts);
    REQUIRE_FALSE(rep.vacuous);
    REQUIRE(rep.first_exact_d.has_value());
    CHECK(*rep.first_exact_d == 2);
    CHECK(rep.hypotheses.quasiconcavity_green);
    CHECK(rep.hypotheses.interior_green);
    CHECK(rep.hypotheses.archimedean.found);
    CHECK(rep.directions.size() == 16);
}

TEST_CASE("set sweep: onedim never closes in the -x direction") {
    PolySystem g(1, {parse_poly("x*(1-x)*(x-2)^2", kX)});
    OracleConfig cfg;
    cfg.box = {{-1.0, 3.0}};
    cfg.feas_tol = 1e-12;
    ExactnessReport rep = set_exactness_sweep(g, 10, 2, 1e-6, SolverSettings{}, cfg);
    CHECK_FALSE(rep.first_exact_d.has_value());
    // direction -x (index 1): the support value stays beyond 2 at every degree
    REQUIRE(rep.per_direction.size() == 2);
    for (const auto& row : rep.per_direction[1]) {
        CHECK(row.oracle == -2.0);
        CHECK(row.value < -2.0);
        CHECK(row.gap > 1e-6);
    }
    // the failed hypothesis is interiority at the isolated point, not curvature
    CHECK(rep.hypotheses.quasiconcavity_green);
    CHECK_FALSE(rep.hypotheses.interior_green);
}

TEST_CASE("squeeze equivalence check") {
    PolySystem box(1, {parse_poly("4 - x^2", kX)});
    OracleConfig cfg = OracleConfig::cube(1, 2.0);
    {
        // f = u itself
        SqueezeReport r = squeeze_check(parse_poly("x^2", kX), box, {{0.0}}, 0.3, cfg);
        CHECK(r.side_a);
        CHECK(r.side_b);
        CHECK(r.agree);
        CHECK(r.epsilon_hat == doctest::Approx(1.0).epsilon(1e-6));
    }
    {
        // flat quartic: Hessian degenerate, margin collapses, sides agree
        SqueezeReport r = squeeze_check(parse_poly("x^4", kX), box, {{0.0}}, 0.3, cfg);
        CHECK_FALSE(r.side_a);
        CHECK_FALSE(r.side_b);
        CHECK(r.agree);
    }
    {
        SqueezeReport r = squeeze_check(parse_poly("(x^2 - 1)^2", kX), box, {{-1.0}, {1.0}}, 0.3, cfg);
        CHECK(r.side_a);
        CHECK(r.side_b);
        CHECK(r.agree);
    }
    CHECK_THROWS_AS(squeeze_check(parse_poly("x^2 + 1", kX), box, {{0.0}}, 0.3, cfg),
                    std::invalid_argument);
}

TEST_CASE("two-disks counterexample probe") {
    CounterexampleReport rep = counterexample_xy();
    CHECK(rep.hessian_state_value == -2.0);
    CHECK(rep.double_zero);
    CHECK(std::abs(rep.oracle_min) <= 1e-6);
    REQUIRE(rep.oracle_minimizer.size() == 2);
    // location accuracy is limited by the feasibility envelope at the corner
    CHECK(std::abs(rep.oracle_minimizer[0]) <= 1e-4);
    CHECK(std::abs(rep.oracle_minimizer[1]) <= 1e-4);
    REQUIRE(rep.memberships.size() == 4);
    for (const auto& m : rep.memberships) {
        CHECK(m.kind == MembershipKind::NotMember);
        CHECK(m.margin <= -1e-7);
    }
}
