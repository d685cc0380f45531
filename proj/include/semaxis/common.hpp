#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace semaxis {

/// One document per entry, whitespace-tokenized.
using TokenizedCorpus = std::vector<std::vector<std::string>>;

enum class TernaryLabel { negative, neutral, positive };

std::string_view to_string(TernaryLabel label);
TernaryLabel ternary_label_from_string(std::string_view s);

/// Input/usage errors (bad arguments, malformed files). CLI maps these to exit 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Data/pipeline errors (degenerate corpus, OOV token, I/O failure). CLI maps these to exit 1.
class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_whitespace(std::string_view line);

/// Reads a whole UTF-8 text file as lines (without trailing newline chars).
std::vector<std::string> read_lines(const std::string& path);

TokenizedCorpus load_corpus(const std::string& path);

} // namespace semaxis
