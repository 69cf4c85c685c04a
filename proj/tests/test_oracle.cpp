#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "momentforge/oracle.hpp"

using namespace momentforge;

namespace {

const std::vector<std::string> kX = {"x"};
const std::vector<std::string> kXY = {"x", "y"};

PolySystem onedim() { return PolySystem(1, {parse_poly("x*(1-x)*(x-2)^2", kX)}); }

OracleConfig onedim_cfg() {
    OracleConfig cfg;
    cfg.box = {{-1.0, 3.0}};
    cfg.feas_tol = 1e-12;
    return cfg;
}

}  // namespace

TEST_CASE("grid_min: linear objective over the interval") {
    PolySystem g(1, {parse_poly("1 - x^2", kX)});
    GridMinResult r = grid_min(parse_poly("x", kX), g, OracleConfig::cube(1, 2.0));
    REQUIRE(r.feasible_found);
    CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-9));
    REQUIRE(r.minimizers.size() == 1);
    CHECK(r.minimizers[0][0] == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("grid_min: the isolated point of the onedim set is found exactly") {
    GridMinResult r = grid_min(parse_poly("2 - x", kX), onedim(), onedim_cfg());
    REQUIRE(r.feasible_found);
    CHECK(r.value == 0.0);  // the grid hits x = 2 exactly and g(2) evaluates to exactly 0
    REQUIRE(r.minimizers.size() == 1);
    CHECK(r.minimizers[0][0] == 2.0);
}

TEST_CASE("grid_min: two-disks corner") {
    PolySystem g(2, {parse_poly("1 - (x-1)^2 - y^2", kXY), parse_poly("1 - x^2 - (y-1)^2", kXY)});
    GridMinResult r = grid_min(parse_poly("x^2 + y^2", kXY), g, OracleConfig::cube(2, 2.0));
    REQUIRE(r.feasible_found);
    CHECK(std::abs(r.value) <= 1e-9);
    REQUIRE(r.minimizers.size() >= 1);
    CHECK(std::abs(r.minimizers[0][0]) <= 1e-6);
    CHECK(std::abs(r.minimizers[0][1]) <= 1e-6);
}

TEST_CASE("grid_min: empty feasible set") {
    PolySystem g(1, {parse_poly("0 - 1 - x^2", kX)});
    GridMinResult r = grid_min(parse_poly("x", kX), g, OracleConfig::cube(1, 1.0));
    CHECK_FALSE(r.feasible_found);
    CHECK(r.minimizers.empty());
}

TEST_CASE("set membership at the paper's points") {
    PolySystem g = onedim();
    CHECK(set_membership(std::vector<double>{2.0}, g, 1e-9));
    CHECK(set_membership(std::vector<double>{0.5}, g, 1e-9));
    CHECK_FALSE(set_membership(std::vector<double>{1.5}, g, 1e-9));  // g(1.5) < 0
    CHECK_FALSE(set_membership(std::vector<double>{2.5}, g, 1e-9));

    PolySystem disk(2, {parse_poly("1 - x^2 - y^2", kXY)});
    CHECK(set_membership(std::vector<double>{0.3, 0.4}, disk, 1e-9));
    CHECK_FALSE(set_membership(std::vector<double>{0.9, 0.9}, disk, 1e-9));
    CHECK_THROWS_AS(set_membership(std::vector<double>{1.0}, disk, 1e-9), std::invalid_argument);
}

TEST_CASE("minimizer clustering") {
    CHECK(minimizer_cluster({{0.0}, {1e-9}, {1.0}}, 0.1) ==
          std::vector<std::vector<double>>{{0.0}, {1.0}});
    CHECK(minimizer_cluster({}, 0.1).empty());
    CHECK_THROWS_AS(minimizer_cluster({{0.0}}, 0.0), std::invalid_argument);

    // (x^2-1)^2 has the two wells +-1
    PolySystem free1(1, {});
    GridMinResult r = grid_min(parse_poly("(x^2 - 1)^2", kX), free1, OracleConfig::cube(1, 2.0));
    REQUIRE(r.feasible_found);
    CHECK(std::abs(r.value) <= 1e-12);
    REQUIRE(r.minimizers.size() == 2);
    CHECK(r.minimizers[0][0] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(r.minimizers[1][0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("monotone refinement on fixed instances") {
    PolySystem g(1, {parse_poly("1 - x^2", kX)});
    Polynomial f = parse_poly("(x - 0.29)^2", kX);
    double prev = std::numeric_limits<double>::infinity();
    for (int rounds : {0, 1, 2, 4}) {
        OracleConfig cfg = OracleConfig::cube(1, 2.0);
        cfg.refine_rounds = rounds;
        GridMinResult r = grid_min(f, g, cfg);
        REQUIRE(r.feasible_found);
        CHECK(r.value <= prev + 1e-15);
        prev = r.value;
    }
    OracleConfig coarse = OracleConfig::cube(1, 2.0);
    coarse.resolution = 101;
    OracleConfig fine = OracleConfig::cube(1, 2.0);
    fine.resolution = 401;
    CHECK(grid_min(f, g, fine).value <= grid_min(f, g, coarse).value + 1e-15);
}

TEST_CASE("oracle config validation") {
    OracleConfig cfg;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // empty box
    cfg.box = {{1.0, -1.0}};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.box = {{-1.0, 1.0}};
    cfg.resolution = 2;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
