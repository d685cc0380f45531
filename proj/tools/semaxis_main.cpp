#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semaxis/analogy.hpp"
#include "semaxis/axis.hpp"
#include "semaxis/common.hpp"
#include "semaxis/comparative.hpp"
#include "semaxis/corpus.hpp"
#include "semaxis/embedding.hpp"
#include "semaxis/evaluation.hpp"
#include "semaxis/lexicon.hpp"
#include "semaxis/trainer.hpp"

using namespace semaxis;

namespace {

void emit(const std::string& content, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PipelineError("cannot write " + path);
    out << content;
}

/// Resolved-config echo; every run can be replayed from this line.
void echo_config(const CLI::App& sub) {
    std::ostringstream line;
    line << "# " << sub.get_name();
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_lnames().empty() ? "" : opt->get_lnames().front();
        if (name.empty() || name == "help" || name == "config") continue;
        std::string value;
        if (opt->get_expected_max() == 0) {
            value = opt->count() ? "true" : "false";
        } else if (opt->count()) {
            const auto& results = opt->results();
            for (std::size_t i = 0; i < results.size(); ++i) {
                if (i) value += ',';
                value += results[i];
            }
        } else {
            value = opt->get_default_str();
        }
        line << ' ' << name << '=' << value;
    }
    std::cerr << line.str() << '\n';
}

std::vector<std::string> load_word_list(const std::string& path) {
    std::vector<std::string> words;
    for (const auto& line : read_lines(path))
        for (auto& tok : split_whitespace(line)) words.push_back(std::move(tok));
    if (words.empty()) throw InputError("no words in " + path);
    return words;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) parts.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    return parts;
}

std::pair<std::string, std::string> split_pole_pair(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size() ||
        spec.find(':', colon + 1) != std::string::npos)
        throw InputError("axis spec must be neg:pos, got '" + spec + "'");
    return {spec.substr(0, colon), spec.substr(colon + 1)};
}

struct AxisArgs {
    std::string inline_spec;
    std::string catalog_path;
    std::string axis_name;
    std::size_t expand_l = 0;
    bool normalize = false;
};

void add_axis_options(CLI::App* sub, AxisArgs& args) {
    sub->add_option("--axis", args.inline_spec, "inline axis neg:pos");
    sub->add_option("--catalog", args.catalog_path, "axis catalog file (JSON lines)");
    sub->add_option("--axis-name", args.axis_name, "axis to pick from --catalog");
    sub->add_option("--expand", args.expand_l, "expand each pole by its l nearest neighbors")
        ->capture_default_str();
    sub->add_flag("--normalize", args.normalize, "unit-normalize pole vectors before averaging");
}

SemanticAxis resolve_axis(const EmbeddingModel& model, const AxisArgs& args) {
    if (!args.inline_spec.empty())
        return parse_inline_axis(model, args.inline_spec, args.expand_l, args.normalize);
    if (!args.catalog_path.empty()) {
        if (args.axis_name.empty()) throw InputError("--catalog needs --axis-name");
        for (const auto& spec : load_catalog_specs(args.catalog_path))
            if (spec.name == args.axis_name)
                return build_axis(model, spec.pos_poles, spec.neg_poles, spec.name,
                                  args.normalize);
        throw InputError("axis '" + args.axis_name + "' not in " + args.catalog_path);
    }
    throw InputError("need --axis or --catalog/--axis-name");
}

LabelDistribution parse_distribution(const std::string& spec) {
    const auto parts = split_csv(spec);
    if (parts.size() != 3) throw InputError("--dist must be p_pos,p_neu,p_neg");
    LabelDistribution dist;
    try {
        dist.p_pos = std::stod(parts[0]);
        dist.p_neu = std::stod(parts[1]);
        dist.p_neg = std::stod(parts[2]);
    } catch (const std::exception&) {
        throw InputError("--dist must be three numbers");
    }
    dist.validate();
    return dist;
}

double map_subsample(double t) {
    return t == 0.0 ? std::numeric_limits<double>::infinity() : t;
}

// ---- subcommand state ----

struct PreprocessArgs {
    std::string input, output, stopwords, counts;
    bool strip_numerals = false;
    bool keep_case = false;
    std::size_t undersample_n = 0;
    std::uint64_t seed = 1;
};

struct TrainArgs {
    std::string corpus, output, losses;
    TrainConfig cfg;
};

struct FineTuneArgs {
    std::string ref, corpus, output, analogies, report, epochs_tsv, drift_axis;
    FineTuneConfig cfg;
    TrainConfig train_cfg;
    bool no_extend = false;
};

struct AxesBuildArgs {
    std::string model, antonyms, synonyms, english, output, drops;
    double threshold = 0.4;
    bool pole_words = false;
    bool normalize = false;
    std::size_t expand_l = 0;
};

struct ScoreArgs {
    std::string model, words, output, dist;
    AxisArgs axis;
    bool all = false;
    bool json = false;
};

struct EvalArgs {
    std::string model, gold, output;
    AxisArgs axis;
    bool json = false;
};

struct SweepArgs {
    std::string model, pos, neg, gold, output;
    std::size_t expand_l = 10;
};

struct CompareTopicArgs {
    std::string model_a, model_b, seed_word, terms, counts_a, counts_b, axis, output;
    std::string expand_mode = "running_mean";
    std::size_t target_count = 30;
    std::uint64_t min_n = 100;
    bool json = false;
};

struct CompareAxesArgs {
    std::string model_a, model_b, word, catalog, output;
    std::string mode = "abs_diff";
    std::size_t k = 20;
    bool json = false;
};

struct AnalogyArgs {
    std::string model, questions, output;
    bool json = false;
};

// ---- subcommand runners ----

void run_preprocess(const PreprocessArgs& a) {
    PreprocessOptions opts;
    opts.lowercase = !a.keep_case;
    opts.strip_numerals = a.strip_numerals;
    if (!a.stopwords.empty()) opts.stopwords = load_stopwords(a.stopwords);

    std::vector<std::string> docs = read_lines(a.input);
    if (a.undersample_n > 0) docs = undersample(docs, a.undersample_n, a.seed);

    std::ostringstream out;
    TokenizedCorpus corpus;
    std::size_t kept = 0;
    for (const auto& doc : docs) {
        auto tokens = preprocess(doc, opts);
        if (tokens.empty()) continue;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (i) out << ' ';
            out << tokens[i];
        }
        out << '\n';
        ++kept;
        if (!a.counts.empty()) corpus.push_back(std::move(tokens));
    }
    emit(out.str(), a.output);
    if (!a.counts.empty()) save_counts(count_tokens(corpus), a.counts);
    std::cerr << "# preprocessed " << docs.size() << " documents, kept " << kept << '\n';
}

void run_train(const TrainArgs& a) {
    TrainConfig cfg = a.cfg;
    cfg.subsample_t = map_subsample(cfg.subsample_t);
    const TokenizedCorpus corpus = load_corpus(a.corpus);
    TrainResult result = train(corpus, cfg);
    save_embeddings(result.model, a.output, format_from_path(a.output));
    if (!a.losses.empty()) emit(result.losses_to_tsv(), a.losses);
    std::cerr << "# trained |V|=" << result.model.size() << " d=" << result.model.dim()
              << " final_loss=" << result.epoch_losses.back() << '\n';
}

void run_finetune(const FineTuneArgs& a) {
    const EmbeddingModel reference = load_embeddings(a.ref, format_from_path(a.ref));
    const TokenizedCorpus corpus = load_corpus(a.corpus);
    const AnalogySet analogies = AnalogySet::load(a.analogies);

    FineTuneConfig cfg = a.cfg;
    if (!a.drift_axis.empty()) cfg.drift_axis = parse_inline_axis(reference, a.drift_axis);
    TrainConfig train_cfg = a.train_cfg;
    train_cfg.subsample_t = map_subsample(train_cfg.subsample_t);
    train_cfg.extend_vocab = !a.no_extend;

    auto [model, report] = fine_tune(reference, corpus, cfg, train_cfg, analogies);
    save_embeddings(model, a.output, format_from_path(a.output));
    emit(report.to_json() + "\n", a.report);
    if (!a.epochs_tsv.empty()) emit(report.to_tsv(), a.epochs_tsv);
    std::cerr << "# stopped at epoch " << report.stop_epoch << " ("
              << to_string(report.stop_reason) << "), acc_0=" << report.acc_0 << '\n';
}

void run_axes_build(const AxesBuildArgs& a) {
    const EmbeddingModel model = load_embeddings(a.model, format_from_path(a.model));
    AntonymInput input = ingest_antonyms(a.antonyms, a.synonyms);

    std::unordered_set<std::string> english;
    if (!a.english.empty())
        for (const auto& w : load_word_list(a.english)) english.insert(w);

    FilterOptions opts;
    opts.sim_threshold = a.threshold;
    opts.redundancy_on_pole_words = a.pole_words;
    opts.normalize_poles = a.normalize;
    const auto pairs = filter_pairs(std::move(input.pairs), input.synonyms, model, english, opts);

    std::vector<AntonymPair> kept;
    std::ostringstream drops;
    drops << "pos\tneg\treason\n";
    for (const auto& p : pairs) {
        if (p.kept())
            kept.push_back(p);
        else
            drops << p.pos << '\t' << p.neg << '\t' << to_string(*p.dropped) << '\n';
    }
    const AxisCatalog catalog = build_catalog(model, kept, a.expand_l, a.normalize);
    save_catalog(catalog, a.output);
    if (!a.drops.empty()) emit(drops.str(), a.drops);

    std::cerr << "# kept " << kept.size() << " of " << pairs.size() << " pairs";
    if (catalog.axes.size() >= 2) {
        const auto div = catalog_diversity(catalog);
        std::cerr << ", mean |cos| " << div.mean_abs_cos;
    }
    std::cerr << '\n';
}

void run_score(const ScoreArgs& a) {
    const EmbeddingModel model = load_embeddings(a.model, format_from_path(a.model));
    const SemanticAxis axis = resolve_axis(model, a.axis);

    ScoredLexicon lexicon;
    if (a.all) {
        lexicon = induce_lexicon_all(model, axis);
    } else {
        if (a.words.empty()) throw InputError("need --words or --all");
        const auto words = load_word_list(a.words);
        lexicon = induce_lexicon(model, axis, words);
    }
    if (!a.dist.empty())
        lexicon = class_mass_normalize(std::move(lexicon), parse_distribution(a.dist));

    emit(a.json ? lexicon.to_json() + "\n" : lexicon.to_tsv(), a.output);
    if (!lexicon.oov.empty()) std::cerr << "# " << lexicon.oov.size() << " words out of vocabulary\n";
}

void run_eval(const EvalArgs& a) {
    const EmbeddingModel model = load_embeddings(a.model, format_from_path(a.model));
    const SemanticAxis axis = resolve_axis(model, a.axis);
    const GoldLexicon gold = GoldLexicon::load(a.gold);

    std::set<std::string> tokens;
    for (const auto& [tok, _] : gold.scores) tokens.insert(tok);
    for (const auto& [tok, _] : gold.labels) tokens.insert(tok);
    const std::vector<std::string> requested(tokens.begin(), tokens.end());

    const ScoredLexicon lexicon = induce_lexicon(model, axis, requested);
    const EvalReport report = evaluate(lexicon, gold);
    emit(a.json ? report.to_json() + "\n" : report.to_tsv(), a.output);
}

void run_sweep(const SweepArgs& a) {
    const EmbeddingModel model = load_embeddings(a.model, format_from_path(a.model));
    const GoldLexicon gold = GoldLexicon::load(a.gold);
    const auto pos = split_csv(a.pos);
    const auto neg = split_csv(a.neg);
    if (pos.empty() || neg.empty()) throw InputError("--pos and --neg need candidate words");

    const SweepReport report = pole_sensitivity_sweep(model, pos, neg, a.expand_l, gold);
    emit(report.to_tsv(), a.output);
    for (const auto& stats : report.modes)
        std::cerr << "# " << stats.mode << ": mean AUC " << stats.mean_auc << ", best "
                  << stats.best.pos_pole << '/' << stats.best.neg_pole << " (" << stats.max_auc
                  << ")\n";
}

void run_compare_topic(const CompareTopicArgs& a) {
    const EmbeddingModel model_a = load_embeddings(a.model_a, format_from_path(a.model_a));
    const EmbeddingModel model_b = load_embeddings(a.model_b, format_from_path(a.model_b));

    std::vector<std::string> terms;
    if (!a.terms.empty()) {
        terms = load_word_list(a.terms);
    } else if (!a.seed_word.empty()) {
        const auto expansion = expand_topic(model_a, a.seed_word, a.target_count,
                                            expand_mode_from_string(a.expand_mode));
        terms = expansion.terms;
        if (expansion.exhausted) std::cerr << "# vocabulary exhausted during expansion\n";
    } else {
        throw InputError("need --seed-word or --terms");
    }

    if (!a.counts_a.empty() || !a.counts_b.empty()) {
        if (a.counts_a.empty() || a.counts_b.empty())
            throw InputError("--counts-a and --counts-b go together");
        terms = filter_topic_terms(terms, load_counts(a.counts_a), load_counts(a.counts_b),
                                   a.min_n);
        if (terms.empty()) throw PipelineError("no topic term passes the frequency filter");
    }

    const auto [neg, pos] = split_pole_pair(a.axis);
    const std::vector<std::string> pos_poles{pos}, neg_poles{neg};
    const TopicProjection projection =
        project_topic(model_a, model_b, terms, pos_poles, neg_poles, neg + "->" + pos);
    emit(a.json ? projection.to_json() + "\n" : projection.to_tsv(), a.output);
}

void run_compare_axes(const CompareAxesArgs& a) {
    const EmbeddingModel model_a = load_embeddings(a.model_a, format_from_path(a.model_a));
    const EmbeddingModel model_b = load_embeddings(a.model_b, format_from_path(a.model_b));
    const auto specs = load_catalog_specs(a.catalog);

    const AxisRanking ranking =
        rank_axes(model_a, model_b, a.word, specs, a.k, rank_mode_from_string(a.mode));
    emit(a.json ? ranking.to_json() + "\n" : ranking.to_tsv(), a.output);
    if (!ranking.skipped_axes.empty())
        std::cerr << "# skipped " << ranking.skipped_axes.size() << " axes with missing poles\n";
    if (ranking.no_contrast) std::cerr << "# no axis separates the two models for this word\n";
}

void run_analogy(const AnalogyArgs& a) {
    const EmbeddingModel model = load_embeddings(a.model, format_from_path(a.model));
    const AnalogySet set = AnalogySet::load(a.questions);
    const AnalogyReport report = evaluate_analogies(model, set);
    emit(a.json ? report.to_json() + "\n" : report.to_tsv(), a.output);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semantic axis toolkit: train, build axes, score, and compare"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; command-line flags win");
    app.allow_config_extras(false);

    PreprocessArgs pre;
    auto* pre_cmd = app.add_subcommand("preprocess", "clean raw text into tokenized lines");
    pre_cmd->add_option("--input", pre.input, "raw text, one document per line")->required();
    pre_cmd->add_option("--output", pre.output, "tokenized output (- for stdout)");
    pre_cmd->add_option("--stopwords", pre.stopwords, "stopword list, one per line");
    pre_cmd->add_option("--counts", pre.counts, "write token counts TSV here");
    pre_cmd->add_flag("--strip-numerals", pre.strip_numerals, "drop all-digit tokens");
    pre_cmd->add_flag("--keep-case", pre.keep_case, "skip ASCII lowercasing");
    pre_cmd->add_option("--undersample", pre.undersample_n,
                        "sample this many documents before cleaning (0 = all)")
        ->capture_default_str();
    pre_cmd->add_option("--seed", pre.seed, "sampling seed")
        ->envname("SEMAXIS_SEED")
        ->capture_default_str();

    TrainArgs tr;
    auto* tr_cmd = app.add_subcommand("train", "train CBOW embeddings with negative sampling");
    tr_cmd->add_option("--corpus", tr.corpus, "tokenized corpus, one document per line")
        ->required();
    tr_cmd->add_option("--output", tr.output, "model path (.txt = text, else binary)")
        ->required();
    tr_cmd->add_option("--losses", tr.losses, "write per-epoch loss TSV here");
    tr_cmd->add_option("--dim", tr.cfg.dim, "vector dimensionality")->capture_default_str();
    tr_cmd->add_option("--window", tr.cfg.window, "context radius")->capture_default_str();
    tr_cmd->add_option("--min-count", tr.cfg.min_count, "frequency cutoff")
        ->capture_default_str();
    tr_cmd->add_option("--negatives", tr.cfg.negatives, "negative samples per example")
        ->capture_default_str();
    tr_cmd->add_option("--subsample", tr.cfg.subsample_t, "downsampling threshold (0 = off)")
        ->capture_default_str();
    tr_cmd->add_option("--lr", tr.cfg.lr_initial, "initial learning rate")
        ->capture_default_str();
    tr_cmd->add_option("--epochs", tr.cfg.epochs, "training epochs")->capture_default_str();
    tr_cmd->add_option("--seed", tr.cfg.seed, "RNG seed")
        ->envname("SEMAXIS_SEED")
        ->capture_default_str();
    tr_cmd->add_option("--workers", tr.cfg.workers, "threads (1 = bit-exact reproducible)")
        ->capture_default_str();

    FineTuneArgs ft;
    ft.train_cfg.lr_initial = 0.005;
    auto* ft_cmd = app.add_subcommand("finetune", "adapt a reference model to a target corpus");
    ft_cmd->add_option("--ref", ft.ref, "reference model")->required();
    ft_cmd->add_option("--corpus", ft.corpus, "target corpus")->required();
    ft_cmd->add_option("--output", ft.output, "fine-tuned model path")->required();
    ft_cmd->add_option("--analogies", ft.analogies, "analogy question file")->required();
    ft_cmd->add_option("--report", ft.report, "JSON report path (- for stdout)");
    ft_cmd->add_option("--epochs-tsv", ft.epochs_tsv, "per-epoch TSV path");
    ft_cmd->add_option("--alpha", ft.cfg.alpha, "analogy accuracy drop budget")
        ->capture_default_str();
    ft_cmd->add_option("--beta", ft.cfg.beta, "drift convergence threshold")
        ->capture_default_str();
    ft_cmd->add_option("--top-k", ft.cfg.top_k, "tracked words for drift")
        ->capture_default_str();
    ft_cmd->add_option("--max-epochs", ft.cfg.max_epochs, "epoch cap")->capture_default_str();
    ft_cmd->add_option("--drift-axis", ft.drift_axis,
                       "drift axis neg:pos (default: built-in sentiment poles)");
    ft_cmd->add_option("--lr", ft.train_cfg.lr_initial, "fixed learning rate")
        ->capture_default_str();
    ft_cmd->add_option("--window", ft.train_cfg.window, "context radius")
        ->capture_default_str();
    ft_cmd->add_option("--negatives", ft.train_cfg.negatives, "negative samples per example")
        ->capture_default_str();
    ft_cmd->add_option("--subsample", ft.train_cfg.subsample_t,
                       "downsampling threshold (0 = off)")
        ->capture_default_str();
    ft_cmd->add_option("--min-count", ft.train_cfg.min_count,
                       "frequency cutoff for vocabulary extension")
        ->capture_default_str();
    ft_cmd->add_option("--seed", ft.train_cfg.seed, "RNG seed")
        ->envname("SEMAXIS_SEED")
        ->capture_default_str();
    ft_cmd->add_option("--workers", ft.train_cfg.workers, "threads")->capture_default_str();
    ft_cmd->add_flag("--no-extend", ft.no_extend, "keep the reference vocabulary as is");

    AxesBuildArgs ab;
    auto* ab_cmd = app.add_subcommand("axes-build", "filter antonym pairs into an axis catalog");
    ab_cmd->add_option("--model", ab.model, "embedding model")->required();
    ab_cmd->add_option("--antonyms", ab.antonyms, "antonym TSV: pos, neg[, crowd_ok]")
        ->required();
    ab_cmd->add_option("--output", ab.output, "catalog output (JSON lines)")->required();
    ab_cmd->add_option("--synonyms", ab.synonyms, "synonym TSV for duplicate-axis removal");
    ab_cmd->add_option("--english", ab.english, "English word list; enables the language filter");
    ab_cmd->add_option("--drops", ab.drops, "write dropped pairs and reasons here");
    ab_cmd->add_option("--threshold", ab.threshold, "redundant-axis |cos| cutoff")
        ->capture_default_str();
    ab_cmd->add_option("--expand", ab.expand_l, "expand poles by l neighbors in kept axes")
        ->capture_default_str();
    ab_cmd->add_flag("--pole-words", ab.pole_words,
                     "deduplicate on pole-word similarity instead of axis vectors");
    ab_cmd->add_flag("--normalize", ab.normalize, "unit-normalize pole vectors");

    ScoreArgs sc;
    auto* sc_cmd = app.add_subcommand("score", "induce a lexicon by projecting words on an axis");
    sc_cmd->add_option("--model", sc.model, "embedding model")->required();
    sc_cmd->add_option("--words", sc.words, "words to score, whitespace separated");
    sc_cmd->add_flag("--all", sc.all, "score the whole vocabulary");
    sc_cmd->add_option("--dist", sc.dist, "label distribution p_pos,p_neu,p_neg");
    sc_cmd->add_option("--output", sc.output, "output path (- for stdout)");
    sc_cmd->add_flag("--json", sc.json, "emit JSON instead of TSV");
    add_axis_options(sc_cmd, sc.axis);

    EvalArgs ev;
    auto* ev_cmd = app.add_subcommand("eval", "evaluate an axis against a gold lexicon");
    ev_cmd->add_option("--model", ev.model, "embedding model")->required();
    ev_cmd->add_option("--gold", ev.gold, "gold lexicon TSV")->required();
    ev_cmd->add_option("--output", ev.output, "output path (- for stdout)");
    ev_cmd->add_flag("--json", ev.json, "emit JSON instead of TSV");
    add_axis_options(ev_cmd, ev.axis);

    SweepArgs sw;
    auto* sw_cmd = app.add_subcommand("sweep", "pole-choice sensitivity sweep");
    sw_cmd->add_option("--model", sw.model, "embedding model")->required();
    sw_cmd->add_option("--pos", sw.pos, "positive pole candidates, comma separated")
        ->required();
    sw_cmd->add_option("--neg", sw.neg, "negative pole candidates, comma separated")
        ->required();
    sw_cmd->add_option("--gold", sw.gold, "gold lexicon TSV")->required();
    sw_cmd->add_option("--expand", sw.expand_l, "expansion l for the expanded mode (0 = skip)")
        ->capture_default_str();
    sw_cmd->add_option("--output", sw.output, "output path (- for stdout)");

    CompareTopicArgs ct;
    auto* ct_cmd = app.add_subcommand("compare-topic",
                                      "project topic terms on one axis in two models");
    ct_cmd->add_option("--model-a", ct.model_a, "first model")->required();
    ct_cmd->add_option("--model-b", ct.model_b, "second model")->required();
    ct_cmd->add_option("--axis", ct.axis, "axis neg:pos, rebuilt inside each model")
        ->required();
    ct_cmd->add_option("--seed-word", ct.seed_word, "expand the topic from this seed");
    ct_cmd->add_option("--terms", ct.terms, "explicit topic term file");
    ct_cmd->add_option("--target-count", ct.target_count, "topic size for expansion")
        ->capture_default_str();
    ct_cmd->add_option("--expand-mode", ct.expand_mode, "running_mean or pair_chain")
        ->capture_default_str();
    ct_cmd->add_option("--counts-a", ct.counts_a, "token counts TSV for corpus A");
    ct_cmd->add_option("--counts-b", ct.counts_b, "token counts TSV for corpus B");
    ct_cmd->add_option("--min-n", ct.min_n, "minimum count in both corpora")
        ->capture_default_str();
    ct_cmd->add_option("--output", ct.output, "output path (- for stdout)");
    ct_cmd->add_flag("--json", ct.json, "emit JSON instead of TSV");

    CompareAxesArgs ca;
    auto* ca_cmd = app.add_subcommand("compare-axes",
                                      "rank catalog axes by a word's score divergence");
    ca_cmd->add_option("--model-a", ca.model_a, "first model")->required();
    ca_cmd->add_option("--model-b", ca.model_b, "second model")->required();
    ca_cmd->add_option("--word", ca.word, "word to characterize")->required();
    ca_cmd->add_option("--catalog", ca.catalog, "axis catalog (JSON lines)")->required();
    ca_cmd->add_option("--k", ca.k, "axes to keep")->capture_default_str();
    ca_cmd->add_option("--mode", ca.mode, "abs_diff, signed_diff, or score_a")
        ->capture_default_str();
    ca_cmd->add_option("--output", ca.output, "output path (- for stdout)");
    ca_cmd->add_flag("--json", ca.json, "emit JSON instead of TSV");

    AnalogyArgs an;
    auto* an_cmd = app.add_subcommand("analogy", "offset-rule analogy accuracy");
    an_cmd->add_option("--model", an.model, "embedding model")->required();
    an_cmd->add_option("--questions", an.questions, "analogy question file")->required();
    an_cmd->add_option("--output", an.output, "output path (- for stdout)");
    an_cmd->add_flag("--json", an.json, "emit JSON instead of TSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*pre_cmd) {
            echo_config(*pre_cmd);
            run_preprocess(pre);
        } else if (*tr_cmd) {
            echo_config(*tr_cmd);
            run_train(tr);
        } else if (*ft_cmd) {
            echo_config(*ft_cmd);
            run_finetune(ft);
        } else if (*ab_cmd) {
            echo_config(*ab_cmd);
            run_axes_build(ab);
        } else if (*sc_cmd) {
            echo_config(*sc_cmd);
            run_score(sc);
        } else if (*ev_cmd) {
            echo_config(*ev_cmd);
            run_eval(ev);
        } else if (*sw_cmd) {
            echo_config(*sw_cmd);
            run_sweep(sw);
        } else if (*ct_cmd) {
            echo_config(*ct_cmd);
            run_compare_topic(ct);
        } else if (*ca_cmd) {
            echo_config(*ca_cmd);
            run_compare_axes(ca);
        } else if (*an_cmd) {
            echo_config(*an_cmd);
            run_analogy(an);
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const PipelineError& e) {
        std::cerr << "pipeline error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
