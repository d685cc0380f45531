#include "semaxis/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "format.hpp"
#include "semaxis/kernels.hpp"

#include <nlohmann/json.hpp>

namespace semaxis {

std::vector<std::pair<std::string, double>> ScoredLexicon::sorted_entries() const {
    std::vector<std::pair<std::string, double>> rows(entries.begin(), entries.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return rows;
}

std::string ScoredLexicon::to_tsv() const {
    std::ostringstream out;
    const bool with_labels = !labels.empty();
    out << "token\tscore" << (with_labels ? "\tlabel" : "") << '\n';
    for (const auto& [tok, score] : sorted_entries()) {
        out << tok << '\t' << detail::fmt_shortest(score);
        if (with_labels) out << '\t' << to_string(labels.at(tok));
        out << '\n';
    }
    return out.str();
}

std::string ScoredLexicon::to_json() const {
    nlohmann::json j;
    j["axis"] = axis_name;
    j["model_id"] = model_id;
    j["size"] = entries.size();
    j["oov"] = oov;
    const std::size_t requested = entries.size() + oov.size();
    j["coverage"] = requested ? static_cast<double>(entries.size()) / requested : 0.0;
    auto& rows = j["entries"] = nlohmann::json::array();
    const bool with_labels = !labels.empty();
    for (const auto& [tok, score] : sorted_entries()) {
        nlohmann::json row{{"token", tok}, {"score", score}};
        if (with_labels) row["label"] = to_string(labels.at(tok));
        rows.push_back(std::move(row));
    }
    return j.dump(2);
}

double score_word(const EmbeddingModel& model, const SemanticAxis& axis, std::string_view word) {
    auto idx = model.vocab().find(word);
    if (!idx) throw PipelineError("token not in vocabulary: '" + std::string(word) + "'");
    if (axis.vector.size() != model.dim())
        throw InputError("axis dimension " + std::to_string(axis.vector.size()) +
                         " does not match model dimension " + std::to_string(model.dim()));
    const double wn = model.norm(*idx);
    if (wn == 0.0) throw PipelineError("zero vector for token: '" + std::string(word) + "'");
    const double an = kernels::l2_norm(std::span<const double>(axis.vector));
    if (an == 0.0) throw PipelineError("axis '" + axis.name + "' has a zero vector");
    const double dot = kernels::dot(model.row(*idx), std::span<const double>(axis.vector));
    return std::clamp(dot / (wn * an), -1.0, 1.0);
}

namespace {

ScoredLexicon induce(const EmbeddingModel& model, const SemanticAxis& axis,
                     std::span<const std::string> words, bool report_oov) {
    ScoredLexicon lex;
    lex.axis_name = axis.name;
    lex.model_id = model.meta().source;
    for (const auto& w : words) {
        if (lex.entries.count(w)) continue;
        auto idx = model.vocab().find(w);
        if (!idx || model.norm(*idx) == 0.0) {
            if (report_oov && std::find(lex.oov.begin(), lex.oov.end(), w) == lex.oov.end())
                lex.oov.push_back(w);
            continue;
        }
        lex.entries.emplace(w, score_word(model, axis, w));
    }
    if (lex.entries.empty()) throw PipelineError("no scorable words for axis '" + axis.name + "'");
    return lex;
}

} // namespace

ScoredLexicon induce_lexicon(const EmbeddingModel& model, const SemanticAxis& axis,
                             std::span<const std::string> words) {
    return induce(model, axis, words, true);
}

ScoredLexicon induce_lexicon_all(const EmbeddingModel& model, const SemanticAxis& axis) {
    return induce(model, axis, model.vocab().words(), true);
}

void LabelDistribution::validate() const {
    for (double p : {p_pos, p_neu, p_neg})
        if (!(p >= 0.0 && p <= 1.0))
            throw InputError("label distribution fractions must be in [0, 1]");
    if (std::abs(p_pos + p_neu + p_neg - 1.0) > 1e-9)
        throw InputError("label distribution must sum to 1");
}

std::array<std::size_t, 3> class_mass_counts(std::size_t n, const LabelDistribution& dist) {
    dist.validate();
    const double exact[3] = {dist.p_pos * static_cast<double>(n),
                             dist.p_neu * static_cast<double>(n),
                             dist.p_neg * static_cast<double>(n)};
    std::array<std::size_t, 3> counts{};
    double frac[3];
    std::size_t assigned = 0;
    for (int c = 0; c < 3; ++c) {
        counts[c] = static_cast<std::size_t>(std::floor(exact[c]));
        frac[c] = exact[c] - std::floor(exact[c]);
        assigned += counts[c];
    }
    // distribute the remainder by largest fractional part; ties favor
    // positive, then neutral, then negative (class order as declared)
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
    for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++counts[order[r % 3]];
    return counts;
}

ScoredLexicon class_mass_normalize(ScoredLexicon lexicon, const LabelDistribution& dist) {
    const std::size_t n = lexicon.entries.size();
    if (n == 0) throw InputError("cannot normalize an empty lexicon");
    const auto counts = class_mass_counts(n, dist);

    auto rows = lexicon.sorted_entries();
    lexicon.labels.clear();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        TernaryLabel label;
        if (i < counts[0])
            label = TernaryLabel::positive;
        else if (i < counts[0] + counts[1])
            label = TernaryLabel::neutral;
        else
            label = TernaryLabel::negative;
        lexicon.labels.emplace(rows[i].first, label);
    }
    return lexicon;
}

} // namespace semaxis
