#include "semaxis/comparative.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "format.hpp"
#include "semaxis/kernels.hpp"
#include "semaxis/lexicon.hpp"

#include <nlohmann/json.hpp>

namespace semaxis {

ExpandMode expand_mode_from_string(std::string_view s) {
    if (s == "running_mean" || s == "running-mean") return ExpandMode::running_mean;
    if (s == "pair_chain" || s == "pair-chain") return ExpandMode::pair_chain;
    throw InputError("unknown expand mode: '" + std::string(s) + "'");
}

TopicExpansion expand_topic(const EmbeddingModel& model, const std::string& seed,
                            std::size_t target_count, ExpandMode mode) {
    if (target_count < 2) throw InputError("expand_topic target_count must be >= 2");
    auto seed_idx = model.vocab().find(seed);
    if (!seed_idx) throw PipelineError("seed token not in vocabulary: '" + seed + "'");

    TopicExpansion expansion;
    expansion.terms.push_back(seed);
    std::unordered_set<std::string> collected{seed};

    std::vector<double> centroid = model.row_d(*seed_idx);
    std::size_t centroid_terms = 1;

    while (expansion.terms.size() < target_count) {
        std::vector<double> query;
        if (expansion.terms.size() == 1) {
            query = centroid; // plain nearest neighbor of the seed
        } else if (mode == ExpandMode::running_mean) {
            query = centroid;
            for (double& v : query) v /= static_cast<double>(centroid_terms);
        } else {
            // mean of the last two collected terms
            auto a = model.row_d(*model.vocab().find(expansion.terms[expansion.terms.size() - 2]));
            auto b = model.row_d(*model.vocab().find(expansion.terms.back()));
            query.resize(model.dim());
            for (std::size_t j = 0; j < query.size(); ++j) query[j] = (a[j] + b[j]) / 2.0;
        }

        std::vector<Neighbor> next;
        try {
            next = nearest_neighbors(model, query, 1,
                                     {collected.begin(), collected.end()});
        } catch (const InputError&) {
            break; // zero-norm query, nothing sensible to add
        }
        if (next.empty()) {
            expansion.exhausted = true;
            break;
        }
        const std::string& word = next.front().word;
        auto idx = model.vocab().find(word);
        expansion.terms.push_back(word);
        collected.insert(word);
        if (mode == ExpandMode::running_mean) {
            auto r = model.row(*idx);
            for (std::size_t j = 0; j < centroid.size(); ++j) centroid[j] += r[j];
            ++centroid_terms;
        }
    }
    if (expansion.terms.size() < target_count && !expansion.exhausted)
        expansion.exhausted = true;
    return expansion;
}

std::vector<std::string> filter_topic_terms(std::span<const std::string> terms,
                                            const CorpusStats& counts_a,
                                            const CorpusStats& counts_b, uint64_t n) {
    std::vector<std::string> kept;
    std::unordered_set<std::string> seen;
    for (const auto& t : terms) {
        if (!seen.insert(t).second) continue;
        if (counts_a.count(t) >= n && counts_b.count(t) >= n) kept.push_back(t);
    }
    return kept;
}

TopicProjection project_topic(const EmbeddingModel& model_a, const EmbeddingModel& model_b,
                              std::span<const std::string> terms,
                              std::span<const std::string> pos_poles,
                              std::span<const std::string> neg_poles,
                              const std::string& axis_name) {
    const SemanticAxis axis_a = build_axis(model_a, pos_poles, neg_poles, axis_name);
    const SemanticAxis axis_b = build_axis(model_b, pos_poles, neg_poles, axis_name);

    TopicProjection projection;
    projection.axis_name = axis_name;
    projection.model_a = model_a.meta().source;
    projection.model_b = model_b.meta().source;

    std::unordered_set<std::string> seen;
    double sum_a = 0.0, sum_b = 0.0;
    for (const auto& term : terms) {
        if (!seen.insert(term).second) continue;
        auto ia = model_a.vocab().find(term);
        auto ib = model_b.vocab().find(term);
        if (!ia || !ib || model_a.norm(*ia) == 0.0 || model_b.norm(*ib) == 0.0) {
            projection.skipped.push_back(term);
            continue;
        }
        ProjectionRow row;
        row.term = term;
        row.score_a = score_word(model_a, axis_a, term);
        row.score_b = score_word(model_b, axis_b, term);
        row.delta = row.score_a - row.score_b;
        sum_a += row.score_a;
        sum_b += row.score_b;
        projection.rows.push_back(std::move(row));
    }
    if (projection.rows.empty())
        throw PipelineError("no topic term is present in both vocabularies");

    std::sort(projection.rows.begin(), projection.rows.end(),
              [](const ProjectionRow& a, const ProjectionRow& b) {
                  if (std::abs(a.delta) != std::abs(b.delta))
                      return std::abs(a.delta) > std::abs(b.delta);
                  return a.term < b.term;
              });
    const auto n = static_cast<double>(projection.rows.size());
    projection.mean_a = sum_a / n;
    projection.mean_b = sum_b / n;
    projection.mean_delta = projection.mean_a - projection.mean_b;
    return projection;
}

std::string TopicProjection::to_tsv() const {
    std::ostringstream out;
    out << "term\tscore_a\tscore_b\tdelta\n";
    for (const auto& r : rows)
        out << r.term << '\t' << detail::fmt_fixed(r.score_a, 6) << '\t'
            << detail::fmt_fixed(r.score_b, 6) << '\t' << detail::fmt_fixed(r.delta, 6) << '\n';
    return out.str();
}

std::string TopicProjection::to_json() const {
    nlohmann::json j;
    j["axis"] = axis_name;
    j["model_a"] = model_a;
    j["model_b"] = model_b;
    j["mean_a"] = mean_a;
    j["mean_b"] = mean_b;
    j["mean_delta"] = mean_delta;
    j["skipped"] = skipped;
    auto& pts = j["points"] = nlohmann::json::array();
    for (const auto& r : rows)
        pts.push_back({{"term", r.term},
                       {"x", r.score_a},
                       {"y", r.delta},
                       {"score_b", r.score_b}});
    return j.dump(2);
}

RankMode rank_mode_from_string(std::string_view s) {
    if (s == "abs_diff" || s == "abs-diff") return RankMode::abs_diff;
    if (s == "signed_diff" || s == "signed-diff" || s == "diff") return RankMode::signed_diff;
    if (s == "score_a" || s == "score-a") return RankMode::score_a;
    throw InputError("unknown rank mode: '" + std::string(s) + "'");
}

AxisRanking rank_axes(const EmbeddingModel& model_a, const EmbeddingModel& model_b,
                      const std::string& word, std::span<const AxisSpec> catalog, std::size_t k,
                      RankMode mode) {
    if (catalog.empty()) throw InputError("rank_axes needs a non-empty axis catalog");
    auto ia = model_a.vocab().find(word);
    auto ib = model_b.vocab().find(word);
    if (!ia || !ib)
        throw PipelineError("word not in both vocabularies: '" + word + "'");

    AxisRanking ranking;
    ranking.word = word;
    for (const auto& spec : catalog) {
        SemanticAxis axis_a, axis_b;
        try {
            axis_a = build_axis(model_a, spec.pos_poles, spec.neg_poles, spec.name);
            axis_b = build_axis(model_b, spec.pos_poles, spec.neg_poles, spec.name);
        } catch (const PipelineError&) {
            ranking.skipped_axes.push_back(spec.name);
            continue;
        }
        AxisRankRow row;
        row.axis_name = spec.name;
        row.score_a = score_word(model_a, axis_a, word);
        row.score_b = score_word(model_b, axis_b, word);
        row.diff = row.score_a - row.score_b;
        ranking.rows.push_back(std::move(row));
    }
    if (ranking.rows.empty())
        throw PipelineError("no catalog axis is usable in both models");

    ranking.no_contrast = std::all_of(ranking.rows.begin(), ranking.rows.end(),
                                      [](const AxisRankRow& r) { return r.diff == 0.0; });

    auto key = [mode](const AxisRankRow& r) {
        switch (mode) {
        case RankMode::abs_diff: return std::abs(r.diff);
        case RankMode::signed_diff: return r.diff;
        case RankMode::score_a: return r.score_a;
        }
        return std::abs(r.diff);
    };
    std::sort(ranking.rows.begin(), ranking.rows.end(),
              [&](const AxisRankRow& a, const AxisRankRow& b) {
                  if (key(a) != key(b)) return key(a) > key(b);
                  return a.axis_name < b.axis_name;
              });
    if (ranking.rows.size() > k) ranking.rows.resize(k);
    return ranking;
}

std::string AxisRanking::to_tsv() const {
    std::ostringstream out;
    out << "axis\tscore_a\tscore_b\tdiff\n";
    for (const auto& r : rows)
        out << r.axis_name << '\t' << detail::fmt_fixed(r.score_a, 6) << '\t'
            << detail::fmt_fixed(r.score_b, 6) << '\t' << detail::fmt_fixed(r.diff, 6) << '\n';
    if (no_contrast) out << "# no contrast: all diffs are zero\n";
    return out.str();
}

std::string AxisRanking::to_json() const {
    nlohmann::json j;
    j["word"] = word;
    j["no_contrast"] = no_contrast;
    j["skipped_axes"] = skipped_axes;
    auto& bars = j["bars"] = nlohmann::json::array();
    for (const auto& r : rows)
        bars.push_back({{"axis", r.axis_name},
                        {"score_a", r.score_a},
                        {"score_b", r.score_b},
                        {"diff", r.diff}});
    return j.dump(2);
}

} // namespace semaxis
