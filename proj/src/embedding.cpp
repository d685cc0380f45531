#include "semaxis/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "semaxis/kernels.hpp"

namespace semaxis {

Vocabulary Vocabulary::build(std::vector<std::string> words, std::vector<uint64_t> counts) {
    if (!counts.empty() && counts.size() != words.size())
        throw InputError("vocabulary counts length does not match words");
    Vocabulary v;
    v.index_.reserve(words.size());
    for (uint32_t i = 0; i < words.size(); ++i) {
        const std::string& w = words[i];
        if (w.empty()) throw InputError("empty token in vocabulary");
        for (char c : w)
            if (std::isspace(static_cast<unsigned char>(c)))
                throw InputError("whitespace in vocabulary token: '" + w + "'");
        if (!v.index_.emplace(w, i).second)
            throw InputError("duplicate vocabulary token: '" + w + "'");
    }
    v.words_ = std::move(words);
    v.counts_ = std::move(counts);
    return v;
}

std::optional<uint32_t> Vocabulary::find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

EmbeddingModel::EmbeddingModel(Vocabulary vocab, std::vector<float> matrix, std::size_t dim,
                               ModelMeta meta)
    : vocab_(std::move(vocab)), matrix_(std::move(matrix)), dim_(dim), meta_(std::move(meta)) {
    if (dim_ == 0) throw InputError("embedding dimension must be positive");
    if (matrix_.size() != vocab_.size() * dim_)
        throw InputError("embedding matrix size does not match vocab size * dim");
    norms_ = kernels::row_norms(matrix_.data(), vocab_.size(), dim_);
}

std::span<const float> EmbeddingModel::row(std::string_view token) const {
    auto idx = vocab_.find(token);
    if (!idx) throw PipelineError("token not in vocabulary: '" + std::string(token) + "'");
    return row(*idx);
}

std::vector<double> EmbeddingModel::row_d(uint32_t i) const {
    auto r = row(i);
    return std::vector<double>(r.begin(), r.end());
}

namespace {

template <typename U, typename V>
double checked_cosine(U u, V v) {
    if (u.size() != v.size()) throw InputError("cosine: dimension mismatch");
    const double nu = kernels::l2_norm(u);
    const double nv = kernels::l2_norm(v);
    if (nu == 0.0 || nv == 0.0) throw InputError("cosine: zero-norm vector");
    return std::clamp(kernels::dot(u, v) / (nu * nv), -1.0, 1.0);
}

} // namespace

double cosine(std::span<const float> u, std::span<const float> v) { return checked_cosine(u, v); }
double cosine(std::span<const double> u, std::span<const double> v) { return checked_cosine(u, v); }
double cosine(std::span<const float> u, std::span<const double> v) {
    if (u.size() != v.size()) throw InputError("cosine: dimension mismatch");
    const double nu = kernels::l2_norm(u);
    const double nv = kernels::l2_norm(v);
    if (nu == 0.0 || nv == 0.0) throw InputError("cosine: zero-norm vector");
    return std::clamp(kernels::dot(u, v) / (nu * nv), -1.0, 1.0);
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingModel& model, std::string_view query,
                                        std::size_t k,
                                        const std::unordered_set<std::string>& exclude) {
    auto idx = model.vocab().find(query);
    if (!idx) throw PipelineError("token not in vocabulary: '" + std::string(query) + "'");
    auto ex = exclude;
    ex.insert(std::string(query));
    return nearest_neighbors(model, model.row_d(*idx), k, ex);
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingModel& model,
                                        std::span<const double> query, std::size_t k,
                                        const std::unordered_set<std::string>& exclude) {
    if (query.size() != model.dim()) throw InputError("query dimension mismatch");
    const double qn = kernels::l2_norm(query);
    if (qn == 0.0) throw InputError("zero-norm query vector");

    const std::size_t n = model.size();
    std::vector<double> scores(n);
    kernels::cosine_scan(model.matrix().data(), n, model.dim(), query, qn, model.norms(),
                         scores.data());

    std::vector<std::uint8_t> mask(n, 0);
    for (const auto& w : exclude)
        if (auto i = model.vocab().find(w)) mask[*i] = 1;

    auto top = kernels::top_k_indices(scores, k, mask);
    std::vector<Neighbor> out;
    out.reserve(top.size());
    for (auto i : top) out.push_back({model.vocab().word(i), scores[i]});
    return out;
}

std::string analogy_query(const EmbeddingModel& model, std::string_view a, std::string_view b,
                          std::string_view c) {
    const auto& vocab = model.vocab();
    std::vector<double> target(model.dim(), 0.0);
    for (auto [tok, sign] : {std::pair<std::string_view, double>{a, -1.0}, {b, 1.0}, {c, 1.0}}) {
        auto idx = vocab.find(tok);
        if (!idx) throw PipelineError("token not in vocabulary: '" + std::string(tok) + "'");
        const double n = model.norm(*idx);
        if (n == 0.0) throw PipelineError("zero vector for token: '" + std::string(tok) + "'");
        auto r = model.row(*idx);
        for (std::size_t j = 0; j < model.dim(); ++j) target[j] += sign * r[j] / n;
    }
    std::unordered_set<std::string> ex{std::string(a), std::string(b), std::string(c)};
    auto nn = nearest_neighbors(model, target, 1, ex);
    if (nn.empty()) throw PipelineError("vocabulary too small for analogy query");
    return nn.front().word;
}

EmbeddingFormat format_from_path(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot != std::string::npos) {
        std::string ext = path.substr(dot + 1);
        if (ext == "txt" || ext == "text") return EmbeddingFormat::text;
    }
    return EmbeddingFormat::binary;
}

namespace {

std::pair<std::size_t, std::size_t> parse_header(const std::string& line, const std::string& path) {
    std::size_t count = 0, dim = 0;
    std::istringstream hs(line);
    if (!(hs >> count >> dim) || count == 0 || dim == 0)
        throw InputError("malformed embedding header in " + path);
    return {count, dim};
}

EmbeddingModel load_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open embeddings: " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty embeddings file: " + path);
    auto [count, dim] = parse_header(line, path);

    std::vector<std::string> words;
    words.reserve(count);
    std::vector<float> matrix;
    matrix.reserve(count * dim);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_whitespace(line);
        if (fields.size() != dim + 1)
            throw InputError("bad field count on line " + std::to_string(words.size() + 2) +
                             " of " + path);
        words.push_back(fields[0]);
        for (std::size_t j = 1; j <= dim; ++j) {
            float v = 0.0f;
            const char* b = fields[j].data();
            auto [p, ec] = std::from_chars(b, b + fields[j].size(), v);
            if (ec != std::errc() || p != b + fields[j].size())
                throw InputError("bad float '" + fields[j] + "' in " + path);
            matrix.push_back(v);
        }
    }
    if (words.size() != count)
        throw InputError("embedding count mismatch in " + path + ": header says " +
                         std::to_string(count) + ", found " + std::to_string(words.size()));
    ModelMeta meta;
    meta.source = path;
    return EmbeddingModel(Vocabulary::build(std::move(words)), std::move(matrix), dim, meta);
}

EmbeddingModel load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open embeddings: " + path);
    std::string header;
    if (!std::getline(in, header)) throw InputError("empty embeddings file: " + path);
    auto [count, dim] = parse_header(header, path);

    std::vector<std::string> words;
    words.reserve(count);
    std::vector<float> matrix(count * dim);
    for (std::size_t i = 0; i < count; ++i) {
        std::string token;
        int ch;
        while ((ch = in.get()) != EOF && (ch == '\n' || ch == '\r')) {
        }
        while (ch != EOF && ch != ' ') {
            token.push_back(static_cast<char>(ch));
            ch = in.get();
        }
        if (token.empty() || ch == EOF)
            throw InputError("truncated binary embeddings in " + path);
        in.read(reinterpret_cast<char*>(matrix.data() + i * dim),
                static_cast<std::streamsize>(dim * sizeof(float)));
        if (in.gcount() != static_cast<std::streamsize>(dim * sizeof(float)))
            throw InputError("truncated binary embeddings in " + path);
        words.push_back(std::move(token));
    }
    ModelMeta meta;
    meta.source = path;
    return EmbeddingModel(Vocabulary::build(std::move(words)), std::move(matrix), dim, meta);
}

void save_text(const EmbeddingModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PipelineError("cannot write embeddings: " + path);
    out << model.size() << ' ' << model.dim() << '\n';
    char buf[64];
    for (uint32_t i = 0; i < model.size(); ++i) {
        out << model.vocab().word(i);
        auto r = model.row(i);
        for (float v : r) {
            auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
            (void)ec;
            out << ' ';
            out.write(buf, p - buf);
        }
        out << '\n';
    }
    if (!out) throw PipelineError("write failed: " + path);
}

void save_binary(const EmbeddingModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PipelineError("cannot write embeddings: " + path);
    out << model.size() << ' ' << model.dim() << '\n';
    for (uint32_t i = 0; i < model.size(); ++i) {
        out << model.vocab().word(i) << ' ';
        auto r = model.row(i);
        out.write(reinterpret_cast<const char*>(r.data()),
                  static_cast<std::streamsize>(r.size() * sizeof(float)));
        out << '\n';
    }
    if (!out) throw PipelineError("write failed: " + path);
}

} // namespace

EmbeddingModel load_embeddings(const std::string& path, EmbeddingFormat format) {
    return format == EmbeddingFormat::text ? load_text(path) : load_binary(path);
}

void save_embeddings(const EmbeddingModel& model, const std::string& path,
                     EmbeddingFormat format) {
    if (format == EmbeddingFormat::text)
        save_text(model, path);
    else
        save_binary(model, path);
}

} // namespace semaxis
