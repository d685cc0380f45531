#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "semaxis/embedding.hpp"

namespace semaxis {

/// Named antonym axis: the axis vector is the mean of the positive pole
/// vectors minus the mean of the negative pole vectors.
struct SemanticAxis {
    std::string name; // "<neg>-><pos>" for generated axes
    std::vector<std::string> pos_poles;
    std::vector<std::string> neg_poles;
    std::vector<double> vector;
    std::string model_id;
};

enum class DropReason {
    non_english,
    multi_word,
    synonym_duplicate,
    crowd_rejected,
    redundant_axis,
    oov,
};

std::string_view to_string(DropReason r);

struct AntonymPair {
    std::string pos;
    std::string neg;
    std::optional<bool> crowd_ok;            // absent = not crowd-checked
    std::optional<DropReason> dropped;       // nullopt = kept
    bool kept() const { return !dropped.has_value(); }
};

class SynonymTable {
public:
    void add(std::string_view a, std::string_view b);
    /// Symmetric; every token is a synonym of itself.
    bool are_synonyms(std::string_view a, std::string_view b) const;
    std::size_t size() const { return pairs_; }

private:
    std::unordered_map<std::string, std::unordered_set<std::string>> map_;
    std::size_t pairs_ = 0;
};

struct AntonymInput {
    std::vector<AntonymPair> pairs; // input order, duplicates collapsed
    SynonymTable synonyms;
};

/// Antonym TSV (pos<TAB>neg[<TAB>crowd_ok]) plus synonym TSV. '#' lines are
/// comments; duplicate rows collapse to one pair.
AntonymInput ingest_antonyms(const std::string& edges_path, const std::string& synonyms_path);

struct FilterOptions {
    double sim_threshold = 0.4;
    /// Compare whole provisional axis vectors (default) or only the
    /// non-shared pole words when deduplicating near-parallel axes.
    bool redundancy_on_pole_words = false;
    bool normalize_poles = false; // unit-normalize vectors before averaging
};

/// The catalog filtering pipeline, applied in order: non-English, multi-word,
/// synonym dedup (first of a group wins), crowd rejection, greedy redundancy
/// dedup at |cos| > threshold, OOV. Every drop carries its reason. Idempotent
/// on its own kept output.
std::vector<AntonymPair> filter_pairs(std::vector<AntonymPair> pairs,
                                      const SynonymTable& synonyms,
                                      const EmbeddingModel& model,
                                      const std::unordered_set<std::string>& english_lexicon,
                                      const FilterOptions& opts = {});

/// pole_word plus its l nearest neighbors (size l+1 when the vocabulary is
/// large enough).
std::vector<std::string> expand_poles(const EmbeddingModel& model,
                                      const std::string& pole_word, std::size_t l);

/// Mean-difference axis construction from raw (or, optionally,
/// unit-normalized) vectors. Throws on OOV tokens, overlapping or empty pole
/// sets, and a zero resultant vector.
SemanticAxis build_axis(const EmbeddingModel& model,
                        std::span<const std::string> pos_poles,
                        std::span<const std::string> neg_poles,
                        std::string name, bool normalize_poles = false);

/// Expands both poles by l neighbors, removes tokens that land in both
/// expansions, then builds the axis.
SemanticAxis build_expanded_axis(const EmbeddingModel& model, const std::string& pos_word,
                                 const std::string& neg_word, std::size_t l,
                                 std::string name = {}, bool normalize_poles = false);

struct AxisCatalog {
    std::vector<SemanticAxis> axes;

    const SemanticAxis* find(std::string_view name) const;
    /// Throws on a duplicate axis name.
    void add(SemanticAxis axis);
};

struct DiversityStats {
    double mean_abs_cos = 0.0;
    double std_cos = 0.0;
    uint64_t pairs = 0;
};

/// Pairwise statistics over all axis vectors; requires >= 2 axes.
DiversityStats catalog_diversity(const AxisCatalog& catalog);

/// Kept pairs -> axes named "<neg>-><pos>". expansion_l = 0 builds two-pole
/// axes; otherwise poles are expanded per build_expanded_axis.
AxisCatalog build_catalog(const EmbeddingModel& model,
                          std::span<const AntonymPair> kept_pairs,
                          std::size_t expansion_l = 0, bool normalize_poles = false);

/// Model-free axis description: what the catalog file stores per line.
struct AxisSpec {
    std::string name;
    std::vector<std::string> pos_poles;
    std::vector<std::string> neg_poles;
};

/// JSON-lines: {"name", "pos_poles", "neg_poles", "model_id"} per line.
/// Vectors are rebuilt from the model on load, never serialized.
void save_catalog(const AxisCatalog& catalog, const std::string& path);
std::vector<AxisSpec> load_catalog_specs(const std::string& path);
AxisCatalog load_catalog(const std::string& path, const EmbeddingModel& model,
                         bool normalize_poles = false);

/// Pole-word view of a catalog, for rebuilding axes inside other models.
std::vector<AxisSpec> catalog_specs(const AxisCatalog& catalog);

/// "neg:pos" -> two-pole axis (or expanded when l > 0).
SemanticAxis parse_inline_axis(const EmbeddingModel& model, std::string_view spec,
                               std::size_t l = 0, bool normalize_poles = false);

struct PoleWords {
    std::vector<std::string> positive;
    std::vector<std::string> negative;
};

/// The standard English sentiment pole words (10 per side).
const PoleWords& standard_sentiment_poles();
/// The Twitter-domain sentiment pole words (10 per side).
const PoleWords& twitter_sentiment_poles();

} // namespace semaxis
