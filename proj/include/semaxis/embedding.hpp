#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "semaxis/common.hpp"

namespace semaxis {

/// Ordered token set with a token -> position index and optional corpus
/// frequencies (absent for externally loaded models).
class Vocabulary {
public:
    Vocabulary() = default;

    /// Validates tokens (non-empty, no whitespace, no duplicates) and builds
    /// the index. counts must be empty or match words in length.
    static Vocabulary build(std::vector<std::string> words,
                            std::vector<uint64_t> counts = {});

    std::size_t size() const { return words_.size(); }
    const std::vector<std::string>& words() const { return words_; }
    const std::string& word(uint32_t i) const { return words_[i]; }

    std::optional<uint32_t> find(std::string_view token) const;
    bool contains(std::string_view token) const { return find(token).has_value(); }

    bool has_counts() const { return !counts_.empty(); }
    const std::vector<uint64_t>& counts() const { return counts_; }
    uint64_t count(uint32_t i) const { return counts_[i]; }

private:
    std::vector<std::string> words_;
    std::vector<uint64_t> counts_;
    std::unordered_map<std::string, uint32_t> index_;
};

struct ModelMeta {
    std::string source;     // identifies the generating run or file
    int epochs_trained = 0;
};

/// |V| x d row-major float32 matrix plus vocabulary. Immutable after
/// construction; safe to share across threads. The trainer mutates its own
/// workspace and snapshots into this type.
class EmbeddingModel {
public:
    EmbeddingModel() = default;
    EmbeddingModel(Vocabulary vocab, std::vector<float> matrix, std::size_t dim,
                   ModelMeta meta = {});

    const Vocabulary& vocab() const { return vocab_; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return vocab_.size(); }
    const std::vector<float>& matrix() const { return matrix_; }
    const ModelMeta& meta() const { return meta_; }

    std::span<const float> row(uint32_t i) const {
        return {matrix_.data() + static_cast<std::size_t>(i) * dim_, dim_};
    }
    std::span<const float> row(std::string_view token) const;

    /// Precomputed L2 norm per row.
    const std::vector<double>& norms() const { return norms_; }
    double norm(uint32_t i) const { return norms_[i]; }

    /// Row copied to double precision.
    std::vector<double> row_d(uint32_t i) const;

private:
    Vocabulary vocab_;
    std::vector<float> matrix_;
    std::size_t dim_ = 0;
    std::vector<double> norms_;
    ModelMeta meta_;
};

/// Cosine similarity clamped to [-1, 1]. Throws on dimension mismatch or a
/// zero-norm input.
double cosine(std::span<const float> u, std::span<const float> v);
double cosine(std::span<const double> u, std::span<const double> v);
double cosine(std::span<const float> u, std::span<const double> v);

struct Neighbor {
    std::string word;
    double score;
};

/// Top-k nearest rows by cosine; the query token itself and excluded tokens
/// are never returned. Ties break by ascending vocabulary index. Returns
/// min(k, available) entries.
std::vector<Neighbor> nearest_neighbors(const EmbeddingModel& model,
                                        std::string_view query, std::size_t k,
                                        const std::unordered_set<std::string>& exclude = {});
std::vector<Neighbor> nearest_neighbors(const EmbeddingModel& model,
                                        std::span<const double> query, std::size_t k,
                                        const std::unordered_set<std::string>& exclude = {});

/// a : b :: c : ? by the additive offset rule over unit-normalized vectors,
/// never answering with a, b, or c.
std::string analogy_query(const EmbeddingModel& model, std::string_view a,
                          std::string_view b, std::string_view c);

enum class EmbeddingFormat { text, binary };

/// word2vec text/binary readers and writers. Binary round-trips bit-exactly;
/// text is written with shortest exact float representations so it
/// round-trips exactly as well.
EmbeddingModel load_embeddings(const std::string& path, EmbeddingFormat format);
void save_embeddings(const EmbeddingModel& model, const std::string& path,
                     EmbeddingFormat format);

/// .txt/.text -> text, anything else -> binary.
EmbeddingFormat format_from_path(const std::string& path);

} // namespace semaxis
