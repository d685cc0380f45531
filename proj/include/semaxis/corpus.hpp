#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "semaxis/common.hpp"

namespace semaxis {

struct PreprocessOptions {
    bool lowercase = true;       // ASCII lowercasing
    bool strip_numerals = false; // drop all-digit tokens
    std::unordered_set<std::string> stopwords;
};

/// One raw document -> token list. URLs are replaced by their host (kept
/// verbatim, dots intact) before punctuation stripping; punctuation
/// (Unicode category P*) is deleted in place; stopwords are dropped after.
/// Idempotent on its own output.
std::vector<std::string> preprocess(std::string_view text, const PreprocessOptions& opts);

std::unordered_set<std::string> load_stopwords(const std::string& path);

/// Uniform sample of target_size documents without replacement, original
/// order preserved. Deterministic for a given seed.
std::vector<std::string> undersample(const std::vector<std::string>& docs,
                                     std::size_t target_size, uint64_t seed);

struct CorpusStats {
    std::size_t documents = 0;
    uint64_t tokens = 0;
    std::unordered_map<std::string, uint64_t> freq;

    uint64_t count(std::string_view token) const;
};

CorpusStats count_tokens(const TokenizedCorpus& corpus);

/// TSV "token<TAB>count" helpers for passing counts between CLI stages.
void save_counts(const CorpusStats& stats, const std::string& path);
CorpusStats load_counts(const std::string& path);

} // namespace semaxis
