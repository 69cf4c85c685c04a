#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "momentforge/oracle.hpp"
#include "momentforge/parallel.hpp"
#include "momentforge/relax.hpp"

using namespace momentforge;

namespace {

const std::vector<std::string> kXY = {"x", "y"};

PolySystem lens() {
    return PolySystem(2, {parse_poly("1 - (x-1)^2 - y^2", kXY), parse_poly("1 - x^2 - (y-1)^2", kXY)});
}

std::vector<std::vector<double>> axes_2d(int res) {
    std::vector<std::vector<double>> axes(2);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < res; ++k) axes[i].push_back(-2.0 + (k * 4.0) / (res - 1));
    return axes;
}

bool scans_equal(const GridScanResult& a, const GridScanResult& b) {
    return a.feasible_found == b.feasible_found && a.min_value == b.min_value &&
           a.argmin == b.argmin && a.window_points == b.window_points;
}

}  // namespace

TEST_CASE("grid scan: serial and OpenMP kernels agree bitwise") {
    Polynomial f = parse_poly("x*y + (x^2 + y^2)^2", kXY);
    auto axes = axes_2d(257);
    GridScanResult s = scan_grid_serial(f, lens(), axes, 1e-9, 1e-6);
    GridScanResult p = scan_grid_parallel(f, lens(), axes, 1e-9, 1e-6);
    REQUIRE(s.feasible_found);
    CHECK(scans_equal(s, p));
}

#ifdef _OPENMP
TEST_CASE("grid scan result does not depend on the thread count") {
    Polynomial f = parse_poly("y - x", kXY);
    auto axes = axes_2d(193);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    GridScanResult one = scan_grid_parallel(f, lens(), axes, 1e-9, 1e-6);
    omp_set_num_threads(std::max(2, saved));
    GridScanResult many = scan_grid_parallel(f, lens(), axes, 1e-9, 1e-6);
    omp_set_num_threads(saved);
    CHECK(scans_equal(one, many));
}

TEST_CASE("relaxation solve does not depend on the thread count") {
    Polynomial f = parse_poly("x*y", kXY);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    LasserreResult one = lasserre_value(f, lens(), 4);
    omp_set_num_threads(std::max(2, saved));
    LasserreResult many = lasserre_value(f, lens(), 4);
    omp_set_num_threads(saved);
    CHECK(one.value == many.value);
    CHECK(one.iterations == many.iterations);
    CHECK(one.y.values == many.y.values);
}
#endif

TEST_CASE("serial kernel flag reproduces the OpenMP path") {
    Polynomial f = parse_poly("x + y", kXY);
    SolverSettings serial;
    serial.parallel_kernels = false;
    LasserreResult a = lasserre_value(f, lens(), 4, serial);
    LasserreResult b = lasserre_value(f, lens(), 4);
    CHECK(a.value == b.value);
    CHECK(a.iterations == b.iterations);
    CHECK(a.y.values == b.y.values);
}

TEST_CASE("thread cap helper") {
    CHECK(max_threads() >= 1);
    CHECK(apply_thread_cap_from_env() >= 1);
}
