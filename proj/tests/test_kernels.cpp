#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "semaxis/kernels.hpp"
#include "semaxis/rng.hpp"

using namespace semaxis;

namespace {

std::vector<float> random_matrix(std::size_t rows, std::size_t dim, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<float> m(rows * dim);
    for (auto& v : m) v = static_cast<float>(uniform_real01(rng) * 2.0 - 1.0);
    return m;
}

double brute_dot(const float* a, const float* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += static_cast<double>(a[i]) * b[i];
    return s;
}

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("dot and l2_norm match a plain loop") {
    const auto m = random_matrix(2, 64, 7);
    std::span<const float> a(m.data(), 64), b(m.data() + 64, 64);
    CHECK(kernels::dot(a, b) == doctest::Approx(brute_dot(m.data(), m.data() + 64, 64)).epsilon(1e-12));
    CHECK(kernels::l2_norm(a) == doctest::Approx(std::sqrt(brute_dot(m.data(), m.data(), 64))).epsilon(1e-12));
}

TEST_CASE("cosine_scan scores every row like the direct formula") {
    const std::size_t rows = 37, dim = 9;
    auto m = random_matrix(rows, dim, 11);
    // plant a zero row: it must score 0, not NaN
    for (std::size_t j = 0; j < dim; ++j) m[5 * dim + j] = 0.0f;

    std::vector<double> query(dim);
    std::mt19937_64 rng(3);
    for (auto& v : query) v = uniform_real01(rng) - 0.5;
    const double qnorm = kernels::l2_norm(std::span<const double>(query));

    const auto norms = kernels::row_norms(m.data(), rows, dim);
    std::vector<double> scores(rows);
    kernels::cosine_scan(m.data(), rows, dim, query, qnorm, norms, scores.data());

    for (std::size_t r = 0; r < rows; ++r) {
        double dot = 0.0;
        for (std::size_t j = 0; j < dim; ++j) dot += m[r * dim + j] * query[j];
        if (norms[r] == 0.0) {
            CHECK(scores[r] == 0.0);
        } else {
            CHECK(scores[r] == doctest::Approx(dot / (norms[r] * qnorm)).epsilon(1e-12));
        }
    }
}

TEST_CASE("parallel kernels reproduce the serial reference") {
    const std::size_t rows = 257, dim = 33;
    const auto m = random_matrix(rows, dim, 23);
    std::vector<double> query(dim);
    std::mt19937_64 rng(5);
    for (auto& v : query) v = uniform_real01(rng) - 0.5;
    const double qnorm = kernels::l2_norm(std::span<const double>(query));

    const auto ns = kernels::serial::row_norms(m.data(), rows, dim);
    const auto np = kernels::row_norms(m.data(), rows, dim);
    REQUIRE(ns.size() == np.size());
    for (std::size_t i = 0; i < rows; ++i) CHECK(ns[i] == np[i]); // per-row, bit-exact

    std::vector<double> ss(rows), sp(rows);
    kernels::serial::cosine_scan(m.data(), rows, dim, query, qnorm, ns, ss.data());
    kernels::cosine_scan(m.data(), rows, dim, query, qnorm, np, sp.data());
    for (std::size_t i = 0; i < rows; ++i) CHECK(ss[i] == sp[i]);

    std::vector<std::vector<double>> vecs(41, std::vector<double>(dim));
    for (auto& v : vecs)
        for (auto& x : v) x = uniform_real01(rng) - 0.5;
    const auto stats_s = kernels::serial::pairwise_cosine_stats(vecs);
    const auto stats_p = kernels::pairwise_cosine_stats(vecs);
    CHECK(stats_s.pairs == stats_p.pairs);
    // reduction order may differ across schedules
    CHECK(stats_p.mean_abs_cos == doctest::Approx(stats_s.mean_abs_cos).epsilon(1e-10));
    CHECK(stats_p.std_cos == doctest::Approx(stats_s.std_cos).epsilon(1e-10));
}

TEST_CASE("pairwise_cosine_stats against direct enumeration") {
    std::vector<std::vector<double>> vecs = {
        {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {-1.0, 0.5}};
    const auto stats = kernels::pairwise_cosine_stats(vecs);
    CHECK(stats.pairs == 6);

    double sum_abs = 0.0, sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < vecs.size(); ++i)
        for (std::size_t j = i + 1; j < vecs.size(); ++j) {
            std::span<const double> a(vecs[i]), b(vecs[j]);
            const double c = kernels::dot(a, b) / (kernels::l2_norm(a) * kernels::l2_norm(b));
            sum_abs += std::abs(c);
            sum += c;
            sum_sq += c * c;
        }
    const double mean = sum / 6.0;
    CHECK(stats.mean_abs_cos == doctest::Approx(sum_abs / 6.0).epsilon(1e-12));
    CHECK(stats.std_cos == doctest::Approx(std::sqrt(sum_sq / 6.0 - mean * mean)).epsilon(1e-12));
}

TEST_CASE("top_k_indices orders by score, then index, and honors the mask") {
    const std::vector<double> scores = {0.5, 0.9, 0.9, 0.1, 0.7};
    std::vector<std::uint8_t> mask(scores.size(), 0);

    auto top = kernels::top_k_indices(scores, 3, mask);
    REQUIRE(top.size() == 3);
    CHECK(top[0] == 1); // tie with 2 breaks by index
    CHECK(top[1] == 2);
    CHECK(top[2] == 4);

    mask[1] = 1;
    top = kernels::top_k_indices(scores, 3, mask);
    CHECK(top[0] == 2);
    CHECK(top[1] == 4);
    CHECK(top[2] == 0);

    top = kernels::top_k_indices(scores, 100, mask);
    CHECK(top.size() == 4); // k larger than available
}

} // TEST_SUITE
