// Timing comparison of the parallel kernels against their serial reference
// implementations.  Run with OMP_NUM_THREADS set to taste.
#include <chrono>
#include <cstdio>
#include <functional>

#ifdef QOC_HAVE_OPENMP
#include <omp.h>
#endif

#include "qoc/grape.hpp"
#include "qoc/targets.hpp"
#include "qoc/transitions.hpp"

using namespace qoc;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    using clock = std::chrono::steady_clock;
    fn();  // warm up
    const auto t0 = clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %12.3f %12.3f %10.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main() {
    DeviceParams p;
    p.n_qubits = 2;
    p.ec = (VectorXd(2) << 140.2, 162.2).finished();
    p.ej = (VectorXd(2) << 10.9, 9.9).finished();
    p.em = (VectorXd(1) << 23.0).finished();
    p.ng0 = (VectorXd(2) << 0.24, 0.26).finished();

    OptimizationConfig cfg;
    cfg.params = p;
    cfg.target = standard_target("cnot", 2);
    cfg.n_slices = 400;  // long grid so per-slice work dominates
    cfg.dt = 1.1;
    cfg.rng_seed = 7;

    ControlSequence seq;
    seq.n_slices = cfg.n_slices;
    seq.dt = cfg.dt;
    seq.amplitudes = 0.05 * MatrixXd::Random(cfg.n_slices, 2);

#ifdef QOC_HAVE_OPENMP
    std::printf("threads: %d\n\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n\n");
#endif
    std::printf("%-28s %12s %12s %10s\n", "kernel", "serial ms", "parallel ms",
                "speedup");

    row("propagate (400 slices)",
        time_of([&] { propagate_reference(p, seq); }, 20),
        time_of([&] { propagate(p, seq); }, 20));

    row("gradient (400 slices)",
        time_of([&] { gradient_reference(cfg, seq); }, 10),
        time_of([&] { gradient(cfg, seq); }, 10));

    OptimizationConfig small = cfg;
    small.n_slices = 50;
    small.max_iters = 300;
    row("8 restarts x 300 iters",
        time_of([&] {
            for (int r = 0; r < 8; ++r) {
                OptimizationConfig one = small;
                one.rng_seed = small.rng_seed + r;
                optimize(one);
            }
        }, 1),
        time_of([&] { optimize_restarts(small, 8); }, 1));

    const ChargeRange range{-1, 2};
    VectorXd grid = VectorXd::LinSpaced(12, 0.0, 1.0);
    row("transition sweep 12x12",
        time_of([&] {  // the sweep parallelizes exactly this node loop
            for (int i = 0; i < 12; ++i)
                for (int j = 0; j < 12; ++j) {
                    VectorXd ng = p.ng0;
                    ng[0] = grid[i];
                    ng[1] = grid[j];
                    transition_table(p, ng, range);
                }
        }, 1),
        time_of([&] { transition_sweep(p, range, grid, grid); }, 1));

    return 0;
}
