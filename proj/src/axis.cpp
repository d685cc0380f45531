#include "semaxis/axis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "semaxis/kernels.hpp"

#include <nlohmann/json.hpp>

namespace semaxis {

std::string_view to_string(DropReason r) {
    switch (r) {
    case DropReason::non_english: return "non_english";
    case DropReason::multi_word: return "multi_word";
    case DropReason::synonym_duplicate: return "synonym_duplicate";
    case DropReason::crowd_rejected: return "crowd_rejected";
    case DropReason::redundant_axis: return "redundant_axis";
    case DropReason::oov: return "oov";
    }
    return "unknown";
}

void SynonymTable::add(std::string_view a, std::string_view b) {
    if (a == b) return;
    if (map_[std::string(a)].insert(std::string(b)).second) ++pairs_;
    map_[std::string(b)].insert(std::string(a));
}

bool SynonymTable::are_synonyms(std::string_view a, std::string_view b) const {
    if (a == b) return true;
    auto it = map_.find(std::string(a));
    return it != map_.end() && it->second.count(std::string(b)) > 0;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

bool parse_bool(const std::string& s, const std::string& context) {
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw InputError("bad boolean '" + s + "' in " + context);
}

} // namespace

AntonymInput ingest_antonyms(const std::string& edges_path, const std::string& synonyms_path) {
    AntonymInput input;
    std::unordered_map<std::string, std::size_t> seen; // "pos\tneg" -> index

    std::size_t lineno = 0;
    for (const auto& line : read_lines(edges_path)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        const std::string where = edges_path + ":" + std::to_string(lineno);
        if (fields.size() != 2 && fields.size() != 3)
            throw InputError("antonym row needs 2 or 3 columns, got " +
                             std::to_string(fields.size()) + " at " + where);
        AntonymPair pair;
        pair.pos = fields[0];
        pair.neg = fields[1];
        if (pair.pos.empty() || pair.neg.empty())
            throw InputError("empty pole token at " + where);
        if (pair.pos == pair.neg)
            throw InputError("identical pole tokens '" + pair.pos + "' at " + where);
        if (fields.size() == 3) pair.crowd_ok = parse_bool(fields[2], where);

        const std::string key = pair.pos + '\t' + pair.neg;
        auto [it, inserted] = seen.emplace(key, input.pairs.size());
        if (inserted) {
            input.pairs.push_back(std::move(pair));
        } else if (input.pairs[it->second].crowd_ok != pair.crowd_ok) {
            throw InputError("conflicting crowd_ok for duplicate pair at " + where);
        }
    }
    if (input.pairs.empty()) throw InputError("no antonym pairs in " + edges_path);

    if (!synonyms_path.empty()) {
        lineno = 0;
        for (const auto& line : read_lines(synonyms_path)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            auto fields = split_tabs(line);
            if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
                throw InputError("synonym row needs 2 columns at " + synonyms_path + ":" +
                                 std::to_string(lineno));
            input.synonyms.add(fields[0], fields[1]);
        }
    }
    return input;
}

namespace {

bool is_multi_word(const std::string& token) {
    for (char c : token)
        if (c == '_' || std::isspace(static_cast<unsigned char>(c))) return true;
    return false;
}

std::vector<double> pole_mean(const EmbeddingModel& model, std::span<const std::string> poles,
                              bool normalize) {
    std::vector<double> mean(model.dim(), 0.0);
    for (const auto& tok : poles) {
        auto idx = model.vocab().find(tok);
        if (!idx) throw PipelineError("pole token not in vocabulary: '" + tok + "'");
        auto r = model.row(*idx);
        double scale = 1.0;
        if (normalize) {
            const double n = model.norm(*idx);
            if (n == 0.0) throw PipelineError("zero vector for pole token: '" + tok + "'");
            scale = 1.0 / n;
        }
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += r[j] * scale;
    }
    for (double& v : mean) v /= static_cast<double>(poles.size());
    return mean;
}

double abs_cosine(std::span<const double> a, std::span<const double> b) {
    const double na = kernels::l2_norm(a);
    const double nb = kernels::l2_norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::abs(std::clamp(kernels::dot(a, b) / (na * nb), -1.0, 1.0));
}

} // namespace

std::vector<AntonymPair> filter_pairs(std::vector<AntonymPair> pairs,
                                      const SynonymTable& synonyms, const EmbeddingModel& model,
                                      const std::unordered_set<std::string>& english_lexicon,
                                      const FilterOptions& opts) {
    if (opts.sim_threshold <= 0.0 || opts.sim_threshold >= 1.0)
        throw InputError("sim_threshold must be in (0, 1)");

    // 1: non-English (skipped when no lexicon is provided)
    if (!english_lexicon.empty())
        for (auto& p : pairs)
            if (p.kept() && (!english_lexicon.count(p.pos) || !english_lexicon.count(p.neg)))
                p.dropped = DropReason::non_english;

    // 2: multi-word
    for (auto& p : pairs)
        if (p.kept() && (is_multi_word(p.pos) || is_multi_word(p.neg)))
            p.dropped = DropReason::multi_word;

    // 3: synonym dedup, first of a group by input order wins
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        if (!pairs[j].kept()) continue;
        for (std::size_t i = 0; i < j; ++i) {
            if (!pairs[i].kept()) continue;
            const bool shared_pos =
                pairs[i].pos == pairs[j].pos && synonyms.are_synonyms(pairs[i].neg, pairs[j].neg);
            const bool shared_neg =
                pairs[i].neg == pairs[j].neg && synonyms.are_synonyms(pairs[i].pos, pairs[j].pos);
            if (shared_pos || shared_neg) {
                pairs[j].dropped = DropReason::synonym_duplicate;
                break;
            }
        }
    }

    // 4: crowd rejection
    for (auto& p : pairs)
        if (p.kept() && p.crowd_ok.has_value() && !*p.crowd_ok)
            p.dropped = DropReason::crowd_rejected;

    // 5: greedy redundancy dedup; OOV pairs cannot form vectors and fall
    // through to stage 6
    struct Accepted {
        std::size_t idx;
        std::vector<double> axis;
    };
    std::vector<Accepted> accepted;
    const auto& vocab = model.vocab();
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        if (!pairs[j].kept()) continue;
        if (!vocab.contains(pairs[j].pos) || !vocab.contains(pairs[j].neg)) continue;
        std::array<std::string, 1> pos{pairs[j].pos}, neg{pairs[j].neg};
        auto vp = pole_mean(model, pos, opts.normalize_poles);
        auto vn = pole_mean(model, neg, opts.normalize_poles);
        std::vector<double> axis(vp.size());
        for (std::size_t t = 0; t < axis.size(); ++t) axis[t] = vp[t] - vn[t];

        bool redundant = false;
        for (const auto& acc : accepted) {
            double sim;
            if (opts.redundancy_on_pole_words) {
                const auto& pi = pairs[acc.idx];
                const auto& pj = pairs[j];
                if (pi.pos == pj.pos)
                    sim = abs_cosine(model.row_d(*vocab.find(pi.neg)),
                                     model.row_d(*vocab.find(pj.neg)));
                else if (pi.neg == pj.neg)
                    sim = abs_cosine(model.row_d(*vocab.find(pi.pos)),
                                     model.row_d(*vocab.find(pj.pos)));
                else
                    sim = abs_cosine(acc.axis, axis);
            } else {
                sim = abs_cosine(acc.axis, axis);
            }
            if (sim > opts.sim_threshold) {
                redundant = true;
                break;
            }
        }
        if (redundant)
            pairs[j].dropped = DropReason::redundant_axis;
        else
            accepted.push_back({j, std::move(axis)});
    }

    // 6: OOV
    for (auto& p : pairs)
        if (p.kept() && (!vocab.contains(p.pos) || !vocab.contains(p.neg)))
            p.dropped = DropReason::oov;

    return pairs;
}

std::vector<std::string> expand_poles(const EmbeddingModel& model, const std::string& pole_word,
                                      std::size_t l) {
    if (!model.vocab().contains(pole_word))
        throw PipelineError("pole token not in vocabulary: '" + pole_word + "'");
    std::vector<std::string> out{pole_word};
    if (l == 0) return out;
    for (auto& nb : nearest_neighbors(model, pole_word, l)) out.push_back(std::move(nb.word));
    return out;
}

SemanticAxis build_axis(const EmbeddingModel& model, std::span<const std::string> pos_poles,
                        std::span<const std::string> neg_poles, std::string name,
                        bool normalize_poles) {
    if (pos_poles.empty() || neg_poles.empty())
        throw InputError("axis pole sets must be non-empty");
    std::unordered_set<std::string> pos_set(pos_poles.begin(), pos_poles.end());
    for (const auto& tok : neg_poles)
        if (pos_set.count(tok))
            throw InputError("axis pole sets overlap on '" + tok + "'");

    auto vp = pole_mean(model, pos_poles, normalize_poles);
    auto vn = pole_mean(model, neg_poles, normalize_poles);

    SemanticAxis axis;
    axis.name = std::move(name);
    axis.pos_poles.assign(pos_poles.begin(), pos_poles.end());
    axis.neg_poles.assign(neg_poles.begin(), neg_poles.end());
    axis.model_id = model.meta().source;
    axis.vector.resize(model.dim());
    for (std::size_t j = 0; j < axis.vector.size(); ++j) axis.vector[j] = vp[j] - vn[j];
    if (kernels::l2_norm(std::span<const double>(axis.vector)) == 0.0)
        throw PipelineError("axis '" + axis.name + "' has a zero vector");
    return axis;
}

SemanticAxis build_expanded_axis(const EmbeddingModel& model, const std::string& pos_word,
                                 const std::string& neg_word, std::size_t l, std::string name,
                                 bool normalize_poles) {
    auto pos = expand_poles(model, pos_word, l);
    auto neg = expand_poles(model, neg_word, l);

    std::unordered_set<std::string> pos_set(pos.begin(), pos.end());
    std::unordered_set<std::string> collisions;
    for (const auto& tok : neg)
        if (pos_set.count(tok)) collisions.insert(tok);
    if (!collisions.empty()) {
        auto scrub = [&](std::vector<std::string>& side) {
            side.erase(std::remove_if(side.begin(), side.end(),
                                      [&](const std::string& t) { return collisions.count(t) > 0; }),
                       side.end());
        };
        scrub(pos);
        scrub(neg);
    }
    if (pos.empty() || neg.empty())
        throw PipelineError("pole expansions of '" + pos_word + "' and '" + neg_word +
                            "' collapse to overlapping sets");
    if (name.empty()) name = neg_word + "->" + pos_word;
    return build_axis(model, pos, neg, std::move(name), normalize_poles);
}

const SemanticAxis* AxisCatalog::find(std::string_view name) const {
    for (const auto& a : axes)
        if (a.name == name) return &a;
    return nullptr;
}

void AxisCatalog::add(SemanticAxis axis) {
    if (find(axis.name)) throw InputError("duplicate axis name '" + axis.name + "'");
    axes.push_back(std::move(axis));
}

DiversityStats catalog_diversity(const AxisCatalog& catalog) {
    if (catalog.axes.size() < 2) throw InputError("catalog diversity needs at least 2 axes");
    std::vector<std::vector<double>> vecs;
    vecs.reserve(catalog.axes.size());
    for (const auto& a : catalog.axes) vecs.push_back(a.vector);
    auto s = kernels::pairwise_cosine_stats(vecs);
    return {s.mean_abs_cos, s.std_cos, s.pairs};
}

AxisCatalog build_catalog(const EmbeddingModel& model, std::span<const AntonymPair> kept_pairs,
                          std::size_t expansion_l, bool normalize_poles) {
    AxisCatalog catalog;
    for (const auto& p : kept_pairs) {
        if (!p.kept()) continue;
        const std::string name = p.neg + "->" + p.pos;
        if (expansion_l == 0) {
            std::array<std::string, 1> pos{p.pos}, neg{p.neg};
            catalog.add(build_axis(model, pos, neg, name, normalize_poles));
        } else {
            catalog.add(build_expanded_axis(model, p.pos, p.neg, expansion_l, name,
                                            normalize_poles));
        }
    }
    return catalog;
}

void save_catalog(const AxisCatalog& catalog, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PipelineError("cannot write catalog: " + path);
    for (const auto& a : catalog.axes) {
        nlohmann::json j;
        j["name"] = a.name;
        j["pos_poles"] = a.pos_poles;
        j["neg_poles"] = a.neg_poles;
        j["model_id"] = a.model_id;
        out << j.dump() << '\n';
    }
    if (!out) throw PipelineError("write failed: " + path);
}

std::vector<AxisSpec> load_catalog_specs(const std::string& path) {
    std::vector<AxisSpec> specs;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw InputError("bad catalog line " + std::to_string(lineno) + " in " + path + ": " +
                             e.what());
        }
        if (!j.contains("name") || !j.contains("pos_poles") || !j.contains("neg_poles"))
            throw InputError("catalog line " + std::to_string(lineno) + " in " + path +
                             " missing fields");
        AxisSpec spec;
        spec.name = j["name"].get<std::string>();
        spec.pos_poles = j["pos_poles"].get<std::vector<std::string>>();
        spec.neg_poles = j["neg_poles"].get<std::vector<std::string>>();
        specs.push_back(std::move(spec));
    }
    if (specs.empty()) throw InputError("no axes in catalog " + path);
    return specs;
}

AxisCatalog load_catalog(const std::string& path, const EmbeddingModel& model,
                         bool normalize_poles) {
    AxisCatalog catalog;
    for (auto& spec : load_catalog_specs(path))
        catalog.add(
            build_axis(model, spec.pos_poles, spec.neg_poles, spec.name, normalize_poles));
    return catalog;
}

std::vector<AxisSpec> catalog_specs(const AxisCatalog& catalog) {
    std::vector<AxisSpec> specs;
    specs.reserve(catalog.axes.size());
    for (const auto& a : catalog.axes) specs.push_back({a.name, a.pos_poles, a.neg_poles});
    return specs;
}

SemanticAxis parse_inline_axis(const EmbeddingModel& model, std::string_view spec, std::size_t l,
                               bool normalize_poles) {
    auto colon = spec.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == spec.size() ||
        spec.find(':', colon + 1) != std::string_view::npos)
        throw InputError("axis spec must be 'negative:positive', got '" + std::string(spec) + "'");
    const std::string neg(spec.substr(0, colon));
    const std::string pos(spec.substr(colon + 1));
    const std::string name = neg + "->" + pos;
    if (l == 0) {
        std::array<std::string, 1> ps{pos}, ns{neg};
        return build_axis(model, ps, ns, name, normalize_poles);
    }
    return build_expanded_axis(model, pos, neg, l, name, normalize_poles);
}

const PoleWords& standard_sentiment_poles() {
    static const PoleWords poles{
        {"good", "lovely", "excellent", "fortunate", "pleasant", "delightful", "perfect",
         "loved", "love", "happy"},
        {"bad", "horrible", "poor", "unfortunate", "unpleasant", "disgusting", "evil", "hated",
         "hate", "unhappy"},
    };
    return poles;
}

const PoleWords& twitter_sentiment_poles() {
    static const PoleWords poles{
        {"love", "loved", "loves", "awesome", "nice", "amazing", "best", "fantastic", "correct",
         "happy"},
        {"hate", "hated", "hates", "terrible", "nasty", "awful", "worst", "horrible", "wrong",
         "sad"},
    };
    return poles;
}

} // namespace semaxis
