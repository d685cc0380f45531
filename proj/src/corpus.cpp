#include "semaxis/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "semaxis/rng.hpp"

namespace semaxis {

namespace {

#include "unicode_punct.inc"

bool is_punct_cp(uint32_t cp) {
    const auto* begin = &kPunctRanges[0];
    const auto* end = begin + sizeof(kPunctRanges) / sizeof(kPunctRanges[0]);
    auto it = std::upper_bound(begin, end, cp,
                               [](uint32_t v, const uint32_t (&r)[2]) { return v < r[0]; });
    if (it == begin) return false;
    --it;
    return cp >= (*it)[0] && cp <= (*it)[1];
}

/// Decodes one UTF-8 codepoint at s[i]; invalid bytes decode as themselves
/// with length 1 so they pass through untouched.
std::pair<uint32_t, std::size_t> decode_utf8(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) return {b0, 1};
    auto cont = [&](std::size_t k) {
        return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    auto bits = [&](std::size_t k) { return static_cast<uint32_t>(s[i + k]) & 0x3Fu; };
    if ((b0 & 0xE0) == 0xC0 && cont(1)) return {((b0 & 0x1Fu) << 6) | bits(1), 2};
    if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2))
        return {((b0 & 0x0Fu) << 12) | (bits(1) << 6) | bits(2), 3};
    if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3))
        return {((b0 & 0x07u) << 18) | (bits(1) << 12) | (bits(2) << 6) | bits(3), 4};
    return {b0, 1};
}

std::string strip_punct(std::string_view token) {
    std::string out;
    out.reserve(token.size());
    std::size_t i = 0;
    while (i < token.size()) {
        auto [cp, len] = decode_utf8(token, i);
        if (!is_punct_cp(cp)) out.append(token.substr(i, len));
        i += len;
    }
    return out;
}

bool starts_with_icase(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
    return true;
}

/// scheme://authority/... -> host (userinfo and port dropped);
/// www.host[/...] -> www.host. Empty result means "not a URL".
std::string url_host(std::string_view token) {
    std::string_view rest;
    if (starts_with_icase(token, "http://"))
        rest = token.substr(7);
    else if (starts_with_icase(token, "https://"))
        rest = token.substr(8);
    else if (starts_with_icase(token, "www.") && token.size() > 4)
        rest = token;
    else
        return {};
    auto cut = rest.find_first_of("/?#");
    std::string_view authority = cut == std::string_view::npos ? rest : rest.substr(0, cut);
    if (auto at = authority.rfind('@'); at != std::string_view::npos)
        authority = authority.substr(at + 1);
    if (auto colon = authority.find(':'); colon != std::string_view::npos)
        authority = authority.substr(0, colon);
    return std::string(authority);
}

/// Dotted alnum/hyphen tokens (hostnames, already-extracted domains) keep
/// their dots; stripping them would make the pipeline non-idempotent.
bool is_hostname_like(std::string_view token) {
    bool has_dot = false;
    bool prev_dot = true; // leading dot disqualifies
    for (char c : token) {
        if (c == '.') {
            if (prev_dot) return false;
            has_dot = true;
            prev_dot = true;
        } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '-') {
            prev_dot = false;
        } else {
            return false;
        }
    }
    return has_dot && !prev_dot;
}

bool all_digits(std::string_view token) {
    for (char c : token)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return !token.empty();
}

} // namespace

std::vector<std::string> preprocess(std::string_view text, const PreprocessOptions& opts) {
    std::vector<std::string> out;
    for (auto& raw : split_whitespace(text)) {
        std::string token = std::move(raw);
        if (opts.lowercase)
            for (char& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

        if (std::string host = url_host(token); !host.empty())
            token = std::move(host);
        else if (!is_hostname_like(token))
            token = strip_punct(token);

        if (token.empty()) continue;
        if (opts.strip_numerals && all_digits(token)) continue;
        if (opts.stopwords.count(token)) continue;
        out.push_back(std::move(token));
    }
    return out;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::unordered_set<std::string> words;
    for (const auto& line : read_lines(path)) {
        auto tokens = split_whitespace(line);
        for (auto& t : tokens) words.insert(std::move(t));
    }
    return words;
}

std::vector<std::string> undersample(const std::vector<std::string>& docs,
                                     std::size_t target_size, uint64_t seed) {
    if (target_size > docs.size())
        throw InputError("undersample target " + std::to_string(target_size) +
                         " exceeds corpus size " + std::to_string(docs.size()));
    std::vector<std::size_t> idx(docs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < target_size; ++i) {
        const std::size_t j = i + uniform_below(rng, idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(target_size);
    std::sort(idx.begin(), idx.end());
    std::vector<std::string> out;
    out.reserve(target_size);
    for (auto i : idx) out.push_back(docs[i]);
    return out;
}

uint64_t CorpusStats::count(std::string_view token) const {
    auto it = freq.find(std::string(token));
    return it == freq.end() ? 0 : it->second;
}

CorpusStats count_tokens(const TokenizedCorpus& corpus) {
    CorpusStats stats;
    stats.documents = corpus.size();
    for (const auto& doc : corpus) {
        stats.tokens += doc.size();
        for (const auto& tok : doc) ++stats.freq[tok];
    }
    return stats;
}

void save_counts(const CorpusStats& stats, const std::string& path) {
    std::vector<std::pair<std::string, uint64_t>> rows(stats.freq.begin(), stats.freq.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PipelineError("cannot write counts: " + path);
    for (const auto& [tok, n] : rows) out << tok << '\t' << n << '\n';
    if (!out) throw PipelineError("write failed: " + path);
}

CorpusStats load_counts(const std::string& path) {
    CorpusStats stats;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw InputError("bad counts line " + std::to_string(lineno) + " in " + path);
        uint64_t n = 0;
        try {
            n = std::stoull(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw InputError("bad count value on line " + std::to_string(lineno) + " in " + path);
        }
        stats.freq[line.substr(0, tab)] += n;
        stats.tokens += n;
    }
    return stats;
}

} // namespace semaxis
