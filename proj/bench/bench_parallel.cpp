// Compares the serial reference kernels against their OpenMP versions:
// the oracle grid scan and the SDP Newton assembly (exercised through a
// full relaxation solve). Results must agree bit-for-bit; the table shows
// the wall-time ratio.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>

#include "momentforge/oracle.hpp"
#include "momentforge/parallel.hpp"
#include "momentforge/relax.hpp"

using namespace momentforge;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s %10.2f ms %10.2f ms   x%-5.2f  %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap_from_env();
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    std::printf("threads: %d\n", max_threads());
    std::printf("%-28s %13s %13s   %-6s\n", "kernel", "serial", "openmp", "ratio");

    const int n = 2;
    const Polynomial x = Polynomial::variable(n, 0);
    const Polynomial y = Polynomial::variable(n, 1);
    const Polynomial one = Polynomial::constant(n, 1.0);
    const Polynomial g1 = one - (x - one) * (x - one) - y * y;
    const Polynomial g2 = one - x * x - (y - one) * (y - one);
    PolySystem lens(n, {g1, g2});

    {
        const int res = quick ? 301 : 1201;
        std::vector<std::vector<double>> axes(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < res; ++k) axes[i].push_back(-2.0 + (k * 4.0) / (res - 1));
        Polynomial f = x * y + 0.25 * (x * x * x * x + y * y);
        GridScanResult rs, rp;
        const double ts = time_ms([&] { rs = scan_grid_serial(f, lens, axes, 1e-9, 1e-6); }, quick ? 1 : 3);
        const double tp = time_ms([&] { rp = scan_grid_parallel(f, lens, axes, 1e-9, 1e-6); }, quick ? 1 : 3);
        const bool same = rs.min_value == rp.min_value && rs.argmin == rp.argmin &&
                          rs.window_points == rp.window_points;
        row("oracle grid scan", ts, tp, same);
    }

    {
        const int d = quick ? 6 : 8;
        Polynomial f = x * y;
        SolverSettings serial_s, parallel_s;
        serial_s.parallel_kernels = false;
        parallel_s.parallel_kernels = true;
        LasserreResult ls, lp;
        const double ts = time_ms([&] { ls = lasserre_value(f, lens, d, serial_s); }, 1);
        const double tp = time_ms([&] { lp = lasserre_value(f, lens, d, parallel_s); }, 1);
        const bool same = ls.value == lp.value && ls.iterations == lp.iterations &&
                          ls.y.values == lp.y.values;
        row("moment SDP solve", ts, tp, same);
    }

    {
        const int d = quick ? 4 : 8;
        Polynomial f = x * y;
        SolverSettings serial_s, parallel_s;
        serial_s.parallel_kernels = false;
        MembershipResult ms, mp;
        const double ts = time_ms([&] { ms = sos_membership(f, lens, d, serial_s); }, 1);
        const double tp = time_ms([&] { mp = sos_membership(f, lens, d, parallel_s); }, 1);
        const bool same = ms.kind == mp.kind && ms.margin == mp.margin;
        row("membership margin SDP", ts, tp, same);
    }
    return 0;
}
