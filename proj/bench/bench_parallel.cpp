// Serial reference vs OpenMP kernels on the heavy paths.
// Usage: bench_parallel [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "maxent/grid_oracle.hpp"
#include "maxent/optimizer.hpp"
#include "maxent/parallel.hpp"
#include "maxent/verify.hpp"

using namespace maxent;

namespace {

double best_of(int repeats, const std::function<double()>& fn, double& checksum) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto start = std::chrono::steady_clock::now();
        checksum = fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return best;
}

void compare(const char* name, int repeats, const std::function<double(Execution)>& fn) {
    double serial_sum = 0;
    double parallel_sum = 0;
    const double ts = best_of(repeats, [&] { return fn(Execution::serial); }, serial_sum);
    const double tp = best_of(repeats, [&] { return fn(Execution::parallel); }, parallel_sum);
    std::printf("%-32s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, ts, tp, ts / tp,
                serial_sum == parallel_sum ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    std::printf("workers: %d\n", worker_count());

    compare("multistart (4,4), 64 starts", repeats, [](Execution e) {
        OptimizerConfig cfg;
        cfg.execution = e;
        return multistart_maximize(4, 4, cfg).best_value;
    });
    compare("ulc suite (3,2), 1e5", repeats, [](Execution e) {
        SuiteOptions o;
        o.trials = 100000;
        o.n = 3;
        o.execution = e;
        return run_suite(Suite::ulc, o).worst;
    });
    compare("identity suite, 1e5", repeats, [](Execution e) {
        SuiteOptions o;
        o.trials = 100000;
        o.execution = e;
        return run_suite(Suite::identity, o).worst;
    });
    compare("grid exhaustive (3,2,16)", repeats, [](Execution e) {
        GridOracleOptions o;
        o.method = GridMethod::exhaustive;
        o.execution = e;
        return grid_oracle(3, 2, 16, o);
    });
    compare("grid branch-and-bound (2,5,24)", repeats, [](Execution e) {
        GridOracleOptions o;
        o.method = GridMethod::branch_and_bound;
        o.execution = e;
        return grid_oracle(2, 5, 24, o);
    });
}
