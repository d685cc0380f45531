#include "semaxis/common.hpp"

#include <cctype>
#include <fstream>

namespace semaxis {

std::string_view to_string(TernaryLabel label) {
    switch (label) {
    case TernaryLabel::negative: return "negative";
    case TernaryLabel::neutral: return "neutral";
    case TernaryLabel::positive: return "positive";
    }
    return "neutral";
}

TernaryLabel ternary_label_from_string(std::string_view s) {
    if (s == "negative" || s == "neg" || s == "-1") return TernaryLabel::negative;
    if (s == "neutral" || s == "neu" || s == "0") return TernaryLabel::neutral;
    if (s == "positive" || s == "pos" || s == "1" || s == "+1") return TernaryLabel::positive;
    throw InputError("unknown ternary label: " + std::string(s));
}

std::vector<std::string> split_whitespace(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.emplace_back(line.substr(start, i - start));
    }
    return out;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

TokenizedCorpus load_corpus(const std::string& path) {
    TokenizedCorpus corpus;
    for (const auto& line : read_lines(path)) {
        auto tokens = split_whitespace(line);
        if (!tokens.empty()) corpus.push_back(std::move(tokens));
    }
    return corpus;
}

} // namespace semaxis
