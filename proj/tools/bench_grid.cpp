// Compares the serial reference and OpenMP versions of the g' grid scan
// and of a small gain sweep, printing wall time and speedup.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "taunav/sampled.hpp"

namespace {

template <typename F>
double time_ms(F&& fn, int reps) {
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

}  // namespace

int main() {
    using namespace taunav;
    const double h = 0.05;
    const double R = 1.0;
    const double margin = 0.02;
    const int reps = 20;

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both paths run serially\n");
#endif

    volatile double sink = 0.0;
    const double serial_ms =
        time_ms([&] { sink = grid_max_abs_g_prime_serial(h, 1.0, R, margin); }, reps);
    const double parallel_ms =
        time_ms([&] { sink = grid_max_abs_g_prime(h, 1.0, R, margin); }, reps);
    std::printf("grid max|g'|        serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
                serial_ms, parallel_ms, serial_ms / parallel_ms);

    const double kcrit_ms = time_ms([&] { sink = estimate_k_crit(h, R, margin); }, 3);
    std::printf("k_crit estimate                          parallel %8.3f ms   (k_crit = %.4f)\n",
                kcrit_ms, estimate_k_crit(h, R, margin));
    (void)sink;
    return 0;
}
