// Throughput comparison of the OpenMP kernels against their serial
// reference implementations. Usage: semaxis_bench [rows] [dim] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "semaxis/kernels.hpp"
#include "semaxis/rng.hpp"

using namespace semaxis;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F> double time_best_of(int repeats, F&& body) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = Clock::now();
        body();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, double checksum_gap) {
    std::printf("%-22s %10.4f ms %10.4f ms %8.2fx   max|diff| %.3g\n", name, serial_s * 1e3,
                parallel_s * 1e3, serial_s / parallel_s, checksum_gap);
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t rows = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 50000;
    const std::size_t dim = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 300;
    const int repeats = argc > 3 ? std::atoi(argv[3]) : 5;

    std::mt19937_64 rng(42);
    std::vector<float> matrix(rows * dim);
    for (auto& v : matrix) v = static_cast<float>(uniform_real01(rng) - 0.5);
    std::vector<double> query(dim);
    for (auto& v : query) v = uniform_real01(rng) - 0.5;

#ifdef _OPENMP
    std::printf("rows=%zu dim=%zu repeats=%d threads=%d\n", rows, dim, repeats,
                omp_get_max_threads());
#else
    std::printf("rows=%zu dim=%zu repeats=%d (built without OpenMP)\n", rows, dim, repeats);
#endif
    std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    // row_norms
    std::vector<double> norms_serial, norms_parallel;
    const double t_norm_s = time_best_of(
        repeats, [&] { norms_serial = kernels::serial::row_norms(matrix.data(), rows, dim); });
    const double t_norm_p = time_best_of(
        repeats, [&] { norms_parallel = kernels::row_norms(matrix.data(), rows, dim); });
    double gap = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        gap = std::max(gap, std::abs(norms_serial[i] - norms_parallel[i]));
    report("row_norms", t_norm_s, t_norm_p, gap);

    // cosine_scan
    const double qnorm = kernels::l2_norm(std::span<const double>(query));
    std::vector<double> scores_serial(rows), scores_parallel(rows);
    const double t_scan_s = time_best_of(repeats, [&] {
        kernels::serial::cosine_scan(matrix.data(), rows, dim, query, qnorm, norms_serial,
                                     scores_serial.data());
    });
    const double t_scan_p = time_best_of(repeats, [&] {
        kernels::cosine_scan(matrix.data(), rows, dim, query, qnorm, norms_parallel,
                             scores_parallel.data());
    });
    gap = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        gap = std::max(gap, std::abs(scores_serial[i] - scores_parallel[i]));
    report("cosine_scan", t_scan_s, t_scan_p, gap);

    // pairwise_cosine_stats over a few hundred axis-sized vectors
    const std::size_t n_axes = 400;
    std::vector<std::vector<double>> axes(n_axes, std::vector<double>(dim));
    for (auto& axis : axes)
        for (auto& v : axis) v = uniform_real01(rng) - 0.5;
    kernels::PairwiseCosineStats ps, pp;
    const double t_pair_s =
        time_best_of(repeats, [&] { ps = kernels::serial::pairwise_cosine_stats(axes); });
    const double t_pair_p =
        time_best_of(repeats, [&] { pp = kernels::pairwise_cosine_stats(axes); });
    gap = std::max(std::abs(ps.mean_abs_cos - pp.mean_abs_cos), std::abs(ps.std_cos - pp.std_cos));
    report("pairwise_cosine_stats", t_pair_s, t_pair_p, gap);

    return 0;
}
