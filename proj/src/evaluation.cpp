#include "semaxis/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>

#include "format.hpp"
#include "semaxis/axis.hpp"

#include <nlohmann/json.hpp>

namespace semaxis {

namespace {

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    auto [p, ec] = std::from_chars(b, b + s.size(), out);
    return ec == std::errc() && p == b + s.size();
}

std::pair<std::string, std::string> split_tab_pair(const std::string& line,
                                                   const std::string& where) {
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
        throw InputError("expected 'token<TAB>value' at " + where);
    if (line.find('\t', tab + 1) != std::string::npos)
        throw InputError("too many columns at " + where);
    return {line.substr(0, tab), line.substr(tab + 1)};
}

} // namespace

GoldLexicon GoldLexicon::load(const std::string& path) {
    enum class Mode { unknown, labels, scores };
    Mode mode = Mode::unknown;
    bool have_thresholds = false;
    double lo = 0.0, hi = 0.0;

    GoldLexicon gold;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto fields = split_whitespace(line);
            if (fields[0] == "#labels") {
                mode = Mode::labels;
            } else if (fields[0] == "#scores") {
                mode = Mode::scores;
            } else if (fields[0] == "#thresholds") {
                if (fields.size() != 3 || !parse_double(fields[1], lo) ||
                    !parse_double(fields[2], hi) || lo > hi)
                    throw InputError("bad #thresholds header at " + where);
                have_thresholds = true;
            }
            continue;
        }
        auto [token, value] = split_tab_pair(line, where);
        if (mode == Mode::unknown) {
            double probe;
            mode = parse_double(value, probe) ? Mode::scores : Mode::labels;
        }
        if (mode == Mode::scores) {
            double v;
            if (!parse_double(value, v) || !std::isfinite(v))
                throw InputError("bad score '" + value + "' at " + where);
            if (!gold.scores.emplace(token, v).second)
                throw InputError("duplicate gold token '" + token + "' at " + where);
        } else {
            if (!gold.labels.emplace(token, ternary_label_from_string(value)).second)
                throw InputError("duplicate gold token '" + token + "' at " + where);
        }
    }
    if (gold.scores.empty() && gold.labels.empty())
        throw InputError("no gold entries in " + path);
    if (have_thresholds) {
        if (gold.scores.empty())
            throw InputError("#thresholds requires score-valued gold in " + path);
        for (const auto& [tok, v] : gold.scores) {
            TernaryLabel label = v < lo   ? TernaryLabel::negative
                                 : v > hi ? TernaryLabel::positive
                                          : TernaryLabel::neutral;
            gold.labels.emplace(tok, label);
        }
    }
    return gold;
}

double auc(std::span<const double> positives, std::span<const double> negatives) {
    if (positives.empty() || negatives.empty())
        throw InputError("auc needs at least one score in each class");
    struct Item {
        double score;
        bool positive;
    };
    std::vector<Item> items;
    items.reserve(positives.size() + negatives.size());
    for (double s : positives) items.push_back({s, true});
    for (double s : negatives) items.push_back({s, false});
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.score < b.score; });

    // average ranks over tie groups; rank sums of half-integers stay exact
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < items.size()) {
        std::size_t j = i;
        while (j < items.size() && items[j].score == items[i].score) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t)
            if (items[t].positive) pos_rank_sum += avg_rank;
        i = j;
    }
    const double np = static_cast<double>(positives.size());
    const double nn = static_cast<double>(negatives.size());
    const double u = pos_rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * nn);
}

namespace {

/// Pairs tied within equal-value runs of a sorted-key view: sum c*(c-1)/2.
std::int64_t tied_pairs(const std::vector<double>& sorted) {
    std::int64_t total = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const auto c = static_cast<std::int64_t>(j - i);
        total += c * (c - 1) / 2;
        i = j;
    }
    return total;
}

/// Counts inversions (strict descents) while mergesorting v.
std::int64_t count_inversions(std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> buf(n);
    std::int64_t inversions = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t left = 0; left + width < n; left += 2 * width) {
            const std::size_t mid = left + width;
            const std::size_t right = std::min(left + 2 * width, n);
            std::size_t a = left, b = mid, o = left;
            while (a < mid && b < right) {
                if (v[b] < v[a]) {
                    inversions += static_cast<std::int64_t>(mid - a);
                    buf[o++] = v[b++];
                } else {
                    buf[o++] = v[a++];
                }
            }
            while (a < mid) buf[o++] = v[a++];
            while (b < right) buf[o++] = v[b++];
            std::copy(buf.begin() + static_cast<std::ptrdiff_t>(left),
                      buf.begin() + static_cast<std::ptrdiff_t>(right),
                      v.begin() + static_cast<std::ptrdiff_t>(left));
        }
    }
    return inversions;
}

} // namespace

double kendall_tau(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw InputError("kendall_tau inputs must have equal length");
    const std::size_t n = xs.size();
    if (n < 2) throw InputError("kendall_tau needs at least 2 observations");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (xs[a] != xs[b]) return xs[a] < xs[b];
        return ys[a] < ys[b];
    });

    std::vector<double> x_sorted(n), y_by_x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x_sorted[i] = xs[order[i]];
        y_by_x[i] = ys[order[i]];
    }

    const auto n0 = static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(n) - 1) / 2;
    const std::int64_t n1 = tied_pairs(x_sorted);

    // joint ties: runs of equal (x, y)
    std::int64_t n3 = 0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j < n && x_sorted[j] == x_sorted[i] && y_by_x[j] == y_by_x[i]) ++j;
            const auto c = static_cast<std::int64_t>(j - i);
            n3 += c * (c - 1) / 2;
            i = j;
        }
    }

    std::vector<double> y_sorted = y_by_x;
    std::sort(y_sorted.begin(), y_sorted.end());
    const std::int64_t n2 = tied_pairs(y_sorted);

    if (n1 == n0 || n2 == n0)
        throw InputError("kendall_tau undefined: one input is fully tied");

    const std::int64_t discordant = count_inversions(y_by_x);
    const std::int64_t numerator = n0 - n1 - n2 + n3 - 2 * discordant;
    // single sqrt keeps the +/-1 extremes exact: the product of the two
    // integer pair counts is a perfect square whenever |tau| == 1
    const double denominator =
        std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
    return static_cast<double>(numerator) / denominator;
}

double ternary_f1(const std::map<std::string, TernaryLabel>& gold,
                  const std::map<std::string, TernaryLabel>& predicted) {
    std::size_t tp[3] = {0, 0, 0}, fp[3] = {0, 0, 0}, fn[3] = {0, 0, 0};
    std::size_t overlap = 0;
    for (const auto& [tok, g] : gold) {
        auto it = predicted.find(tok);
        if (it == predicted.end()) continue;
        ++overlap;
        const int gi = static_cast<int>(g);
        const int pi = static_cast<int>(it->second);
        if (gi == pi) {
            ++tp[gi];
        } else {
            ++fn[gi];
            ++fp[pi];
        }
    }
    if (overlap == 0) throw InputError("ternary_f1: no shared tokens");

    double f1_sum = 0.0;
    std::size_t classes = 0;
    for (int c = 0; c < 3; ++c) {
        const std::size_t support = tp[c] + fn[c];
        const std::size_t predicted_c = tp[c] + fp[c];
        if (support == 0 && predicted_c == 0) continue; // class absent everywhere
        ++classes;
        if (tp[c] == 0) continue; // precision or recall is 0 -> F1 0
        const double prec = static_cast<double>(tp[c]) / static_cast<double>(predicted_c);
        const double rec = static_cast<double>(tp[c]) / static_cast<double>(support);
        f1_sum += 2.0 * prec * rec / (prec + rec);
    }
    return f1_sum / static_cast<double>(classes);
}

EvalReport evaluate(const ScoredLexicon& lexicon, const GoldLexicon& gold) {
    EvalReport report;
    report.axis_name = lexicon.axis_name;
    report.lexicon_size = lexicon.entries.size();

    std::map<std::string, double> covered; // lexicon scores over gold tokens
    std::map<std::string, TernaryLabel> covered_gold_labels;
    std::map<std::string, double> covered_gold_scores;
    std::set<std::string> gold_tokens;
    for (const auto& [tok, label] : gold.labels) gold_tokens.insert(tok);
    for (const auto& [tok, score] : gold.scores) gold_tokens.insert(tok);
    report.gold_size = gold_tokens.size();

    for (const auto& tok : gold_tokens) {
        auto it = lexicon.entries.find(tok);
        if (it == lexicon.entries.end()) continue;
        covered.emplace(tok, it->second);
        if (auto g = gold.labels.find(tok); g != gold.labels.end())
            covered_gold_labels.emplace(tok, g->second);
        if (auto g = gold.scores.find(tok); g != gold.scores.end())
            covered_gold_scores.emplace(tok, g->second);
    }
    report.overlap = covered.size();
    report.coverage =
        report.gold_size ? static_cast<double>(report.overlap) / report.gold_size : 0.0;
    if (report.overlap == 0) throw PipelineError("no overlap between lexicon and gold standard");

    // AUC: gold-positive vs gold-negative
    {
        std::vector<double> pos, neg;
        for (const auto& [tok, label] : covered_gold_labels) {
            if (label == TernaryLabel::positive) pos.push_back(covered.at(tok));
            if (label == TernaryLabel::negative) neg.push_back(covered.at(tok));
        }
        if (!pos.empty() && !neg.empty()) {
            report.auc = auc(pos, neg);
            report.n_auc = pos.size() + neg.size();
        }
    }

    // Ternary F1 after class-mass normalization with the gold distribution
    if (!covered_gold_labels.empty()) {
        std::size_t n_by_class[3] = {0, 0, 0};
        for (const auto& [tok, label] : covered_gold_labels)
            ++n_by_class[static_cast<int>(label)];
        const auto n = static_cast<double>(covered_gold_labels.size());
        LabelDistribution dist;
        dist.p_neg = static_cast<double>(n_by_class[0]) / n;
        dist.p_neu = static_cast<double>(n_by_class[1]) / n;
        dist.p_pos = 1.0 - dist.p_neg - dist.p_neu;

        ScoredLexicon sub;
        sub.axis_name = lexicon.axis_name;
        for (const auto& [tok, label] : covered_gold_labels) sub.entries.emplace(tok, covered.at(tok));
        sub = class_mass_normalize(std::move(sub), dist);
        report.f1 = ternary_f1(covered_gold_labels, sub.labels);
        report.n_f1 = covered_gold_labels.size();
    }

    // Kendall tau against continuous gold
    if (covered_gold_scores.size() >= 2) {
        std::vector<double> xs, ys;
        xs.reserve(covered_gold_scores.size());
        for (const auto& [tok, gs] : covered_gold_scores) {
            xs.push_back(covered.at(tok));
            ys.push_back(gs);
        }
        bool xs_tied = std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs[0]; });
        bool ys_tied = std::all_of(ys.begin(), ys.end(), [&](double v) { return v == ys[0]; });
        if (!xs_tied && !ys_tied) {
            report.tau = kendall_tau(xs, ys);
            report.n_tau = xs.size();
        }
    }
    return report;
}

std::string EvalReport::to_tsv() const {
    std::ostringstream out;
    out << "metric\tvalue\tn\n";
    if (auc) out << "auc\t" << detail::fmt_fixed(*auc, 6) << '\t' << n_auc << '\n';
    if (f1) out << "ternary_f1\t" << detail::fmt_fixed(*f1, 6) << '\t' << n_f1 << '\n';
    if (tau) out << "kendall_tau\t" << detail::fmt_fixed(*tau, 6) << '\t' << n_tau << '\n';
    out << "coverage\t" << detail::fmt_fixed(coverage, 6) << '\t' << overlap << '\n';
    return out.str();
}

std::string EvalReport::to_json() const {
    nlohmann::json j;
    j["axis"] = axis_name;
    if (auc) j["auc"] = *auc;
    if (f1) j["ternary_f1"] = *f1;
    if (tau) j["kendall_tau"] = *tau;
    j["n_auc"] = n_auc;
    j["n_f1"] = n_f1;
    j["n_tau"] = n_tau;
    j["overlap"] = overlap;
    j["gold_size"] = gold_size;
    j["lexicon_size"] = lexicon_size;
    j["coverage"] = coverage;
    return j.dump(2);
}

namespace {

double sweep_auc(const EmbeddingModel& model, const SemanticAxis& axis,
                 const std::vector<std::string>& gold_tokens, const GoldLexicon& gold,
                 std::size_t& n_out) {
    auto lex = induce_lexicon(model, axis, gold_tokens);
    std::vector<double> pos, neg;
    for (const auto& [tok, score] : lex.entries) {
        auto it = gold.labels.find(tok);
        if (it == gold.labels.end()) continue;
        if (it->second == TernaryLabel::positive) pos.push_back(score);
        if (it->second == TernaryLabel::negative) neg.push_back(score);
    }
    if (pos.empty() || neg.empty())
        throw PipelineError("sweep axis '" + axis.name + "' covers only one gold class");
    n_out = pos.size() + neg.size();
    return auc(pos, neg);
}

SweepModeStats summarize_mode(const std::vector<SweepRow>& rows, const std::string& mode) {
    SweepModeStats stats;
    stats.mode = mode;
    double sum = 0.0;
    for (const auto& r : rows) {
        if (r.mode != mode) continue;
        if (stats.rows == 0 || r.auc > stats.best.auc) stats.best = r;
        if (stats.rows == 0 || r.auc < stats.worst.auc) stats.worst = r;
        sum += r.auc;
        ++stats.rows;
    }
    if (stats.rows) {
        stats.mean_auc = sum / static_cast<double>(stats.rows);
        stats.min_auc = stats.worst.auc;
        stats.max_auc = stats.best.auc;
    }
    return stats;
}

} // namespace

const SweepModeStats* SweepReport::mode_stats(std::string_view mode) const {
    for (const auto& m : modes)
        if (m.mode == mode) return &m;
    return nullptr;
}

std::string SweepReport::to_tsv() const {
    std::ostringstream out;
    out << "pos\tneg\tmode\tauc\tn\n";
    for (const auto& r : rows)
        out << r.pos_pole << '\t' << r.neg_pole << '\t' << r.mode << '\t'
            << detail::fmt_fixed(r.auc, 6) << '\t' << r.n << '\n';
    for (const auto& m : modes) {
        out << "# " << m.mode << "\tmean=" << detail::fmt_fixed(m.mean_auc, 6)
            << "\tmin=" << detail::fmt_fixed(m.min_auc, 6)
            << "\tmax=" << detail::fmt_fixed(m.max_auc, 6) << "\tbest=" << m.best.pos_pole << '/'
            << m.best.neg_pole << "\tworst=" << m.worst.pos_pole << '/' << m.worst.neg_pole
            << '\n';
    }
    return out.str();
}

SweepReport pole_sensitivity_sweep(const EmbeddingModel& model,
                                   std::span<const std::string> pos_candidates,
                                   std::span<const std::string> neg_candidates, std::size_t l,
                                   const GoldLexicon& gold) {
    if (pos_candidates.empty() || neg_candidates.empty())
        throw InputError("sweep needs non-empty candidate pole sets");
    if (!gold.has_labels()) throw InputError("sweep needs label-valued gold");
    for (const auto& tok : pos_candidates)
        if (!model.vocab().contains(tok))
            throw PipelineError("sweep candidate not in vocabulary: '" + tok + "'");
    for (const auto& tok : neg_candidates)
        if (!model.vocab().contains(tok))
            throw PipelineError("sweep candidate not in vocabulary: '" + tok + "'");

    std::vector<std::string> gold_tokens;
    for (const auto& [tok, label] : gold.labels) gold_tokens.push_back(tok);

    SweepReport report;
    for (const auto& pos : pos_candidates) {
        for (const auto& neg : neg_candidates) {
            if (pos == neg) continue;
            const std::string name = neg + "->" + pos;
            {
                std::array<std::string, 1> ps{pos}, ns{neg};
                SweepRow row{pos, neg, "two_pole", 0.0, 0};
                row.auc = sweep_auc(model, build_axis(model, ps, ns, name), gold_tokens, gold,
                                    row.n);
                report.rows.push_back(std::move(row));
            }
            if (l > 0) {
                SweepRow row{pos, neg, "expanded", 0.0, 0};
                row.auc = sweep_auc(model, build_expanded_axis(model, pos, neg, l, name),
                                    gold_tokens, gold, row.n);
                report.rows.push_back(std::move(row));
            }
        }
    }
    if (report.rows.empty()) throw PipelineError("sweep produced no usable pole pairs");
    report.modes.push_back(summarize_mode(report.rows, "two_pole"));
    if (l > 0) report.modes.push_back(summarize_mode(report.rows, "expanded"));
    return report;
}

} // namespace semaxis
