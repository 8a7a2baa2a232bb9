// Times the OpenMP kernels against the serial reference implementations and
// checks that both produce identical results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "hyperroad/kernels.hpp"
#include "hyperroad/reference.hpp"
#include "hyperroad/rng.hpp"
#include "hyperroad/tensor.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace hyperroad;

namespace {

double now_ms() {
    return std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Tensor random_tensor(int rows, int cols, Rng& rng) {
    Tensor t(rows, cols);
    for (double& v : t.data) v = rng.uniform(-1.0, 1.0);
    return t;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data[i] - b.data[i]));
    return m;
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_ms();
        f();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP\n");
#endif
    Rng rng(7);
    std::printf("%-24s %10s %10s %8s %12s\n", "kernel", "omp ms", "serial ms", "speedup",
                "max |diff|");

    {
        const int n = 512;
        Tensor a = random_tensor(n, n, rng);
        Tensor b = random_tensor(n, n, rng);
        Tensor c1(n, n), c2(n, n);
        const double t1 = time_best_of(3, [&] { kernels::matmul(a, b, c1); });
        const double t2 = time_best_of(3, [&] { ref::matmul(a, b, c2); });
        std::printf("%-24s %10.2f %10.2f %7.2fx %12.3g\n", "matmul 512x512", t1, t2, t2 / t1,
                    max_abs_diff(c1, c2));
    }
    {
        const int n = 20000, d = 64;
        Tensor x = random_tensor(n, d, rng);
        std::vector<std::vector<int>> sets(n);
        for (int i = 0; i < n; ++i) {
            for (int t = 0; t < 6; ++t) {
                sets[static_cast<std::size_t>(i)].push_back(
                    static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n))));
            }
        }
        Tensor o1(n, d), o2(n, d);
        const double t1 = time_best_of(3, [&] { kernels::segment_mean(x, sets, o1); });
        const double t2 = time_best_of(3, [&] { ref::segment_mean(x, sets, o2); });
        std::printf("%-24s %10.2f %10.2f %7.2fx %12.3g\n", "segment_mean 20k x 64", t1, t2,
                    t2 / t1, max_abs_diff(o1, o2));
    }
    {
        const int n = 2000000;
        Tensor x = random_tensor(n, 1, rng);
        Tensor o1(n, 1), o2(n, 1);
        const double t1 = time_best_of(3, [&] { kernels::relu(x, o1); });
        const double t2 = time_best_of(3, [&] { ref::relu(x, o2); });
        std::printf("%-24s %10.2f %10.2f %7.2fx %12.3g\n", "relu 2M", t1, t2, t2 / t1,
                    max_abs_diff(o1, o2));
    }
    {
        const int n = 200000, d = 64;
        Tensor table = random_tensor(n, d, rng);
        std::vector<int> idx;
        for (int i = 0; i < n; ++i) {
            idx.push_back(static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n))));
        }
        Tensor o1(n, d), o2(n, d);
        const double t1 = time_best_of(3, [&] { kernels::gather_rows(table, idx, o1); });
        const double t2 = time_best_of(3, [&] { ref::gather_rows(table, idx, o2); });
        std::printf("%-24s %10.2f %10.2f %7.2fx %12.3g\n", "gather_rows 200k x 64", t1, t2,
                    t2 / t1, max_abs_diff(o1, o2));
    }
    {
        const int n = 500000, d = 64;
        Tensor a = random_tensor(n, d, rng);
        Tensor b = random_tensor(n, d, rng);
        Tensor o1(n, 1), o2(n, 1);
        const double t1 = time_best_of(3, [&] { kernels::rows_dot(a, b, o1); });
        const double t2 = time_best_of(3, [&] { ref::rows_dot(a, b, o2); });
        std::printf("%-24s %10.2f %10.2f %7.2fx %12.3g\n", "rows_dot 500k x 64", t1, t2, t2 / t1,
                    max_abs_diff(o1, o2));
    }
    return 0;
}
