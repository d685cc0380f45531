#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semaxis/lexicon.hpp"

namespace semaxis {

/// Gold lexicon: continuous valence scores and/or ternary labels.
/// TSV body lines are "token<TAB>value"; an optional "#labels" or "#scores"
/// header selects the value type (inferred from the first row otherwise).
/// A "#thresholds <lo> <hi>" line additionally derives labels from scores:
/// value < lo negative, value > hi positive, else neutral.
struct GoldLexicon {
    std::map<std::string, double> scores;
    std::map<std::string, TernaryLabel> labels;

    static GoldLexicon load(const std::string& path);

    bool has_scores() const { return !scores.empty(); }
    bool has_labels() const { return !labels.empty(); }
};

/// Mann-Whitney AUC with average ranks, so tied scores count half.
/// Throws InputError if either class is empty.
double auc(std::span<const double> positives, std::span<const double> negatives);

/// Kendall tau-b, O(n log n). Throws InputError if sizes differ, n < 2, or
/// either side is fully tied.
double kendall_tau(std::span<const double> xs, std::span<const double> ys);

/// Macro F1 over {positive, neutral, negative}, computed on the key
/// intersection; a class absent from both gold and prediction is skipped.
/// Throws InputError on an empty intersection.
double ternary_f1(const std::map<std::string, TernaryLabel>& gold,
                  const std::map<std::string, TernaryLabel>& predicted);

struct EvalReport {
    std::string axis_name;
    std::optional<double> auc;  // needs gold labels with both polarities
    std::optional<double> f1;   // needs gold labels
    std::optional<double> tau;  // needs gold scores
    std::size_t n_auc = 0;
    std::size_t n_f1 = 0;
    std::size_t n_tau = 0;
    std::size_t overlap = 0;    // tokens in both gold and lexicon
    std::size_t gold_size = 0;
    std::size_t lexicon_size = 0;
    double coverage = 0.0;      // overlap / gold_size

    std::string to_tsv() const;
    std::string to_json() const;
};

/// Scores the lexicon against the gold standard over their intersection.
/// AUC ranks gold-positive against gold-negative tokens (neutral excluded);
/// F1 labels the covered entries by class-mass normalization with the gold
/// label distribution; tau compares continuous scores.
EvalReport evaluate(const ScoredLexicon& lexicon, const GoldLexicon& gold);

struct SweepRow {
    std::string pos_pole;
    std::string neg_pole;
    std::string mode; // "two_pole" or "expanded"
    double auc = 0.0;
    std::size_t n = 0; // covered gold tokens
};

struct SweepModeStats {
    std::string mode;
    double mean_auc = 0.0;
    double min_auc = 0.0;
    double max_auc = 0.0;
    SweepRow best;
    SweepRow worst;
    std::size_t rows = 0;
};

struct SweepReport {
    std::vector<SweepRow> rows;       // pair-major, two_pole before expanded
    std::vector<SweepModeStats> modes;

    const SweepModeStats* mode_stats(std::string_view mode) const;
    std::string to_tsv() const;
};

/// Evaluates every axis from the cross product of candidate pole words, in
/// two-pole mode and (when l > 0) expanded mode, by inducing a lexicon over
/// the gold tokens and computing AUC. Candidates must be in vocabulary.
SweepReport pole_sensitivity_sweep(const EmbeddingModel& model,
                                   std::span<const std::string> pos_candidates,
                                   std::span<const std::string> neg_candidates, std::size_t l,
                                   const GoldLexicon& gold);

} // namespace semaxis
