// Serial reference vs OpenMP kernels on a disc-loaded square grid.
#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "hballs/kernels.hpp"

using namespace hballs;
using namespace hballs::kernels;

namespace {

struct Problem {
    int n;
    double h;
    std::vector<double> u, rhs_h2, mass, mass_next, odometer;
    std::vector<std::uint8_t> active;

    explicit Problem(int n_) : n(n_), h(2.0 / (n_ - 1)) {
        u.assign(n * n, 0.0);
        rhs_h2.assign(n * n, 0.0);
        mass.assign(n * n, 0.0);
        mass_next.assign(n * n, 0.0);
        odometer.assign(n * n, 0.0);
        active.assign(n * n, 0);
        double h2 = h * h;
        for (int j = 1; j < n - 1; ++j)
            for (int i = 1; i < n - 1; ++i) {
                double x = -1.0 + i * h, y = -1.0 + j * h;
                active[j * n + i] = 1;
                double r2 = x * x + y * y;
                // excess density 3 on a central disc, the rest sub-critical
                mass[j * n + i] = (r2 < 0.25 ? 3.0 : 0.2) * h2;
                rhs_h2[j * n + i] = (r2 < 0.25 ? 2.0 : -0.8) * h2;
            }
    }
};

void run_psor(benchmark::State& state, ExecMode mode) {
    Problem p(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        psor_halfsweep(p.u, p.rhs_h2, p.active, p.n, p.n, 0, 1.9, true, mode);
        psor_halfsweep(p.u, p.rhs_h2, p.active, p.n, p.n, 1, 1.9, true, mode);
        benchmark::DoNotOptimize(p.u.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(p.n) * p.n);
}

void run_residual(benchmark::State& state, ExecMode mode) {
    Problem p(static_cast<int>(state.range(0)));
    psor_halfsweep(p.u, p.rhs_h2, p.active, p.n, p.n, 0, 1.9, true, mode);
    for (auto _ : state) {
        double r = lcp_residual(p.u, p.rhs_h2, p.active, p.n, p.n, p.h * p.h, true, mode);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(p.n) * p.n);
}

void run_sandpile(benchmark::State& state, ExecMode mode) {
    Problem p(static_cast<int>(state.range(0)));
    Window win{1, 1, p.n - 1, p.n - 1};
    double cap = p.h * p.h;
    for (auto _ : state) {
        double ex = sandpile_step(p.mass, p.mass_next, p.odometer, p.active, p.n, p.n, win, cap,
                                  mode);
        std::swap(p.mass, p.mass_next);
        benchmark::DoNotOptimize(ex);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(p.n) * p.n);
}

void psor_serial(benchmark::State& s) { run_psor(s, ExecMode::Serial); }
void psor_parallel(benchmark::State& s) { run_psor(s, ExecMode::Parallel); }
void residual_serial(benchmark::State& s) { run_residual(s, ExecMode::Serial); }
void residual_parallel(benchmark::State& s) { run_residual(s, ExecMode::Parallel); }
void sandpile_serial(benchmark::State& s) { run_sandpile(s, ExecMode::Serial); }
void sandpile_parallel(benchmark::State& s) { run_sandpile(s, ExecMode::Parallel); }

BENCHMARK(psor_serial)->Arg(257)->Arg(513)->Arg(1025);
BENCHMARK(psor_parallel)->Arg(257)->Arg(513)->Arg(1025);
BENCHMARK(residual_serial)->Arg(513)->Arg(1025);
BENCHMARK(residual_parallel)->Arg(513)->Arg(1025);
BENCHMARK(sandpile_serial)->Arg(257)->Arg(513)->Arg(1025);
BENCHMARK(sandpile_parallel)->Arg(257)->Arg(513)->Arg(1025);

}  // namespace

BENCHMARK_MAIN();
