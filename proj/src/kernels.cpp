#include "semaxis/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace semaxis::kernels {

double dot(std::span<const float> a, std::span<const float> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
    return s;
}

double dot(std::span<const float> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double l2_norm(std::span<const float> v) {
    return std::sqrt(dot(v, v));
}

double l2_norm(std::span<const double> v) {
    return std::sqrt(dot(v, v));
}

namespace {

inline double row_cosine(const float* row, std::size_t dim, const double* query,
                         double inv_query_norm, double row_norm) {
    if (row_norm == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) s += static_cast<double>(row[j]) * query[j];
    return s / row_norm * inv_query_norm;
}

} // namespace

namespace serial {

void cosine_scan(const float* matrix, std::size_t rows, std::size_t dim,
                 std::span<const double> query, double query_norm,
                 std::span<const double> row_norms, double* out) {
    const double inv_q = 1.0 / query_norm;
    for (std::size_t i = 0; i < rows; ++i)
        out[i] = row_cosine(matrix + i * dim, dim, query.data(), inv_q, row_norms[i]);
}

std::vector<double> row_norms(const float* matrix, std::size_t rows, std::size_t dim) {
    std::vector<double> norms(rows);
    for (std::size_t i = 0; i < rows; ++i)
        norms[i] = l2_norm(std::span<const float>(matrix + i * dim, dim));
    return norms;
}

PairwiseCosineStats pairwise_cosine_stats(const std::vector<std::vector<double>>& vecs) {
    const std::size_t n = vecs.size();
    if (n < 2) throw std::invalid_argument("pairwise_cosine_stats: need at least 2 vectors");
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) norms[i] = l2_norm(std::span<const double>(vecs[i]));

    double sum = 0.0, sum_abs = 0.0, sum_sq = 0.0;
    std::uint64_t pairs = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double c = 0.0;
            if (norms[i] != 0.0 && norms[j] != 0.0)
                c = dot(std::span<const double>(vecs[i]), std::span<const double>(vecs[j])) /
                    (norms[i] * norms[j]);
            c = std::clamp(c, -1.0, 1.0);
            sum += c;
            sum_abs += std::abs(c);
            sum_sq += c * c;
            ++pairs;
        }
    }
    PairwiseCosineStats stats;
    stats.pairs = pairs;
    stats.mean_abs_cos = sum_abs / static_cast<double>(pairs);
    const double mean = sum / static_cast<double>(pairs);
    const double var = std::max(0.0, sum_sq / static_cast<double>(pairs) - mean * mean);
    stats.std_cos = std::sqrt(var);
    return stats;
}

} // namespace serial

void cosine_scan(const float* matrix, std::size_t rows, std::size_t dim,
                 std::span<const double> query, double query_norm,
                 std::span<const double> row_norms, double* out) {
    const double inv_q = 1.0 / query_norm;
    const double* q = query.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(rows); ++i)
        out[i] = row_cosine(matrix + static_cast<std::size_t>(i) * dim, dim, q, inv_q,
                            row_norms[static_cast<std::size_t>(i)]);
}

std::vector<double> row_norms(const float* matrix, std::size_t rows, std::size_t dim) {
    std::vector<double> norms(rows);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(rows); ++i)
        norms[static_cast<std::size_t>(i)] =
            l2_norm(std::span<const float>(matrix + static_cast<std::size_t>(i) * dim, dim));
    return norms;
}

PairwiseCosineStats pairwise_cosine_stats(const std::vector<std::vector<double>>& vecs) {
    const std::size_t n = vecs.size();
    if (n < 2) throw std::invalid_argument("pairwise_cosine_stats: need at least 2 vectors");
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) norms[i] = l2_norm(std::span<const double>(vecs[i]));

    double sum = 0.0, sum_abs = 0.0, sum_sq = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : sum, sum_abs, sum_sq)
#endif
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n) - 1; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        for (std::size_t j = i + 1; j < n; ++j) {
            double c = 0.0;
            if (norms[i] != 0.0 && norms[j] != 0.0)
                c = dot(std::span<const double>(vecs[i]), std::span<const double>(vecs[j])) /
                    (norms[i] * norms[j]);
            c = std::clamp(c, -1.0, 1.0);
            sum += c;
            sum_abs += std::abs(c);
            sum_sq += c * c;
        }
    }
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    PairwiseCosineStats stats;
    stats.pairs = pairs;
    stats.mean_abs_cos = sum_abs / static_cast<double>(pairs);
    const double mean = sum / static_cast<double>(pairs);
    const double var = std::max(0.0, sum_sq / static_cast<double>(pairs) - mean * mean);
    stats.std_cos = std::sqrt(var);
    return stats;
}

std::vector<std::uint32_t> top_k_indices(std::span<const double> scores, std::size_t k,
                                         std::span<const std::uint8_t> excluded) {
    std::vector<std::uint32_t> idx;
    idx.reserve(scores.size());
    for (std::uint32_t i = 0; i < scores.size(); ++i)
        if (excluded.empty() || !excluded[i]) idx.push_back(i);
    const std::size_t take = std::min(k, idx.size());
    auto better = [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(),
                      better);
    idx.resize(take);
    return idx;
}

} // namespace semaxis::kernels
