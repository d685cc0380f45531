#pragma once

#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "semaxis/embedding.hpp"
#include "semaxis/rng.hpp"

namespace testutil {

inline std::string fixture(const std::string& name) {
    return std::string(SEMAXIS_FIXTURE_DIR) + "/" + name;
}

inline semaxis::EmbeddingModel make_model(std::vector<std::string> words,
                                          std::vector<float> matrix, std::size_t dim) {
    auto vocab = semaxis::Vocabulary::build(std::move(words));
    return semaxis::EmbeddingModel(std::move(vocab), std::move(matrix), dim);
}

/// Random model with rows drawn uniform in [-1, 1]; a row can be zeroed by
/// the caller afterwards via rebuilding.
inline semaxis::EmbeddingModel random_model(std::size_t n, std::size_t dim, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> words;
    words.reserve(n);
    for (std::size_t i = 0; i < n; ++i) words.push_back("w" + std::to_string(i));
    std::vector<float> matrix(n * dim);
    for (auto& v : matrix)
        v = static_cast<float>(semaxis::uniform_real01(rng) * 2.0 - 1.0);
    return make_model(std::move(words), std::move(matrix), dim);
}

inline std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/semaxis_test_") + name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

struct CommandResult {
    int exit_code = -1;
    std::string output; // stdout only
};

inline CommandResult run_command(const std::string& cmd) {
    CommandResult result;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) return result;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
    const int status = pclose(pipe);
    result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return result;
}

} // namespace testutil
