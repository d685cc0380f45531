#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Dense numeric kernels behind the embedding queries. Each kernel has an
// OpenMP-parallel implementation (the default entry points) and a plain
// serial counterpart under kernels::serial. The serial versions are the
// reference: tests assert the parallel results match them, and the bench
// tool compares their throughput. Builds without OpenMP degrade to serial
// everywhere.

namespace semaxis::kernels {

double dot(std::span<const float> a, std::span<const float> b);
double dot(std::span<const float> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const float> v);
double l2_norm(std::span<const double> v);

/// Cosine of `query` against every row of a |rows| x dim float matrix.
/// row_norms holds precomputed L2 norms per row; rows with zero norm get
/// score 0. query_norm must be nonzero.
void cosine_scan(const float* matrix, std::size_t rows, std::size_t dim,
                 std::span<const double> query, double query_norm,
                 std::span<const double> row_norms, double* out);

/// Row norms of a |rows| x dim float matrix.
std::vector<double> row_norms(const float* matrix, std::size_t rows, std::size_t dim);

struct PairwiseCosineStats {
    double mean_abs_cos = 0.0;
    double std_cos = 0.0; // population std of signed cosines
    std::uint64_t pairs = 0;
};

/// Statistics over all unordered pairs of vectors (at least 2 required).
PairwiseCosineStats pairwise_cosine_stats(const std::vector<std::vector<double>>& vecs);

/// Indices of the k highest scores, ordered by score descending with ties
/// broken by ascending index. Excluded indices (mask nonzero) are skipped.
std::vector<std::uint32_t> top_k_indices(std::span<const double> scores, std::size_t k,
                                         std::span<const std::uint8_t> excluded);

namespace serial {

void cosine_scan(const float* matrix, std::size_t rows, std::size_t dim,
                 std::span<const double> query, double query_norm,
                 std::span<const double> row_norms, double* out);

std::vector<double> row_norms(const float* matrix, std::size_t rows, std::size_t dim);

PairwiseCosineStats pairwise_cosine_stats(const std::vector<std::vector<double>>& vecs);

} // namespace serial

} // namespace semaxis::kernels
