#pragma once

#include <span>
#include <string>
#include <vector>

#include "semaxis/axis.hpp"
#include "semaxis/corpus.hpp"

namespace semaxis {

enum class ExpandMode {
    running_mean, // centroid of all collected terms
    pair_chain,   // centroid of the last two collected terms
};

ExpandMode expand_mode_from_string(std::string_view s);

struct TopicExpansion {
    std::vector<std::string> terms; // seed first; unique; size <= target_count
    bool exhausted = false;         // vocabulary ran out before target_count
};

/// Grows a topic term set from a seed: starts with {seed, nearest(seed)},
/// then repeatedly adds the word closest to the current centroid that is not
/// yet collected, until target_count terms (>= 2) or vocabulary exhaustion.
TopicExpansion expand_topic(const EmbeddingModel& model, const std::string& seed,
                            std::size_t target_count, ExpandMode mode = ExpandMode::running_mean);

/// Keeps terms (order preserved, duplicates dropped) whose frequency is at
/// least n in BOTH corpora; n = 0 keeps everything.
std::vector<std::string> filter_topic_terms(std::span<const std::string> terms,
                                            const CorpusStats& counts_a,
                                            const CorpusStats& counts_b, uint64_t n);

struct ProjectionRow {
    std::string term;
    double score_a = 0.0;
    double score_b = 0.0;
    double delta = 0.0; // score_a - score_b; > 0 means higher in corpus A
};

struct TopicProjection {
    std::string axis_name;
    std::string model_a;
    std::string model_b;
    std::vector<ProjectionRow> rows; // |delta| descending, ties by term
    double mean_a = 0.0;
    double mean_b = 0.0;
    double mean_delta = 0.0;
    std::vector<std::string> skipped; // OOV in either model

    std::string to_tsv() const;
    std::string to_json() const; // scatter-ready: term, x = score_a, y = delta
};

/// Projects shared topic terms on the same-named axis rebuilt inside each
/// model (same pole words, per-model vectors), then ranks by score
/// divergence. Throws if the poles are OOV in either model or no term is in
/// both vocabularies.
TopicProjection project_topic(const EmbeddingModel& model_a, const EmbeddingModel& model_b,
                              std::span<const std::string> terms,
                              std::span<const std::string> pos_poles,
                              std::span<const std::string> neg_poles,
                              const std::string& axis_name);

enum class RankMode {
    abs_diff,    // |score_a - score_b| descending
    signed_diff, // score_a - score_b descending
    score_a,     // projection in model A descending
};

RankMode rank_mode_from_string(std::string_view s);

struct AxisRankRow {
    std::string axis_name;
    double score_a = 0.0;
    double score_b = 0.0;
    double diff = 0.0; // score_a - score_b
};

struct AxisRanking {
    std::string word;
    std::vector<AxisRankRow> rows;         // top k per RankMode, ties by name
    std::vector<std::string> skipped_axes; // poles OOV in either model
    bool no_contrast = false;              // every usable axis has diff == 0

    std::string to_tsv() const;
    std::string to_json() const; // horizontal-bar-ready
};

/// Projects one word onto every catalog axis rebuilt inside both models and
/// returns the k axes ranked per mode. Axes whose poles are OOV in either
/// model are skipped and reported. Throws if the word is OOV in either model
/// or no axis is usable.
AxisRanking rank_axes(const EmbeddingModel& model_a, const EmbeddingModel& model_b,
                      const std::string& word, std::span<const AxisSpec> catalog, std::size_t k,
                      RankMode mode = RankMode::abs_diff);

} // namespace semaxis
