#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "semaxis/axis.hpp"
#include "semaxis/common.hpp"

namespace semaxis {

/// Per-word axis scores in [-1, 1], optionally with ternary labels covering
/// exactly the scored tokens.
struct ScoredLexicon {
    std::string axis_name;
    std::string model_id;
    std::map<std::string, double> entries;
    std::map<std::string, TernaryLabel> labels; // empty until normalized
    std::vector<std::string> oov;               // requested but not in vocab

    /// Entries ordered by score descending, ties by ascending token.
    std::vector<std::pair<std::string, double>> sorted_entries() const;

    std::string to_tsv() const;
    std::string to_json() const;
};

/// Cosine of the word vector against the axis vector.
double score_word(const EmbeddingModel& model, const SemanticAxis& axis,
                  std::string_view word);

/// One entry per requested in-vocab word; OOV requests are reported in
/// .oov, not silently dropped. Throws if nothing is scorable.
ScoredLexicon induce_lexicon(const EmbeddingModel& model, const SemanticAxis& axis,
                             std::span<const std::string> words);

/// Scores the entire vocabulary.
ScoredLexicon induce_lexicon_all(const EmbeddingModel& model, const SemanticAxis& axis);

struct LabelDistribution {
    double p_pos = 0.0;
    double p_neu = 0.0;
    double p_neg = 0.0;

    void validate() const; // each in [0,1], sum 1 within 1e-9
};

/// Class counts (positive, neutral, negative) for N entries by the
/// largest-remainder rule; remainder ties resolve positive, neutral,
/// negative in that order.
std::array<std::size_t, 3> class_mass_counts(std::size_t n, const LabelDistribution& dist);

/// Rank-based class-mass normalization: entries sorted by score descending
/// (ties by ascending token), the top block labeled positive and the bottom
/// block negative per class_mass_counts.
ScoredLexicon class_mass_normalize(ScoredLexicon lexicon, const LabelDistribution& dist);

} // namespace semaxis
