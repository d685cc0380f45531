#include "semaxis/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "format.hpp"
#include "semaxis/corpus.hpp"
#include "semaxis/kernels.hpp"
#include "semaxis/rng.hpp"

#include <nlohmann/json.hpp>

namespace semaxis {

void TrainConfig::validate() const {
    if (dim < 1) throw InputError("dim must be >= 1");
    if (window < 1) throw InputError("window must be >= 1");
    if (min_count < 1) throw InputError("min_count must be >= 1");
    if (negatives < 1) throw InputError("negatives must be >= 1");
    if (epochs < 1) throw InputError("epochs must be >= 1");
    if (!(lr_initial > 0.0 && lr_initial < 1.0)) throw InputError("lr_initial must be in (0, 1)");
    if (!(subsample_t > 0.0)) throw InputError("subsample_t must be positive");
    if (workers < 1) throw InputError("workers must be >= 1");
}

Vocabulary build_vocab(const TokenizedCorpus& corpus, std::size_t min_count) {
    if (corpus.empty()) throw InputError("empty corpus");
    struct Entry {
        uint64_t count = 0;
        std::size_t first = 0;
    };
    std::unordered_map<std::string, Entry> table;
    std::size_t position = 0;
    for (const auto& doc : corpus) {
        for (const auto& tok : doc) {
            auto [it, inserted] = table.try_emplace(tok);
            if (inserted) it->second.first = position;
            ++it->second.count;
            ++position;
        }
    }
    std::vector<std::pair<std::string, Entry>> rows;
    for (auto& [tok, e] : table)
        if (e.count >= min_count) rows.push_back({tok, e});
    if (rows.empty())
        throw PipelineError("empty vocabulary: no token reaches min_count " +
                            std::to_string(min_count));
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second.count != b.second.count) return a.second.count > b.second.count;
        return a.second.first < b.second.first;
    });
    std::vector<std::string> words;
    std::vector<uint64_t> counts;
    words.reserve(rows.size());
    counts.reserve(rows.size());
    for (auto& [tok, e] : rows) {
        words.push_back(std::move(tok));
        counts.push_back(e.count);
    }
    return Vocabulary::build(std::move(words), std::move(counts));
}

NegativeSampler::NegativeSampler(std::span<const std::uint64_t> counts, double power) {
    if (counts.empty()) throw InputError("negative sampler needs a non-empty vocabulary");
    const std::size_t n = counts.size();
    probs_.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        probs_[i] = counts[i] ? std::pow(static_cast<double>(counts[i]), power) : 0.0;
        total += probs_[i];
    }
    if (total <= 0.0) throw InputError("negative sampler needs at least one positive count");
    for (double& p : probs_) p /= total;

    // Vose alias construction
    accept_.assign(n, 1.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = probs_[i] * static_cast<double>(n);
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back();
        small.pop_back();
        const std::uint32_t l = large.back();
        accept_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // leftovers are 1 within rounding
    for (auto i : large) accept_[i] = 1.0;
    for (auto i : small) accept_[i] = 1.0;
}

std::uint32_t NegativeSampler::sample(std::mt19937_64& rng) const {
    const auto k = static_cast<std::uint32_t>(uniform_below(rng, probs_.size()));
    const double u = uniform_real01(rng);
    return u < accept_[k] ? k : alias_[k];
}

double subsample_keep_prob(std::uint64_t count, std::uint64_t total_tokens, double t) {
    if (count == 0 || total_tokens == 0) return 1.0;
    const double f = static_cast<double>(count) / static_cast<double>(total_tokens);
    const double r = t / f;
    return std::sqrt(r) + r;
}

namespace {

struct MappedCorpus {
    std::vector<std::vector<uint32_t>> docs; // aligned with the input corpus
    std::vector<uint64_t> doc_offsets;       // in-vocab tokens before doc i
    std::vector<uint64_t> counts;            // per vocab id, over this corpus
    uint64_t train_words = 0;

    bool has_training_pair() const {
        for (const auto& d : docs)
            if (d.size() >= 2) return true;
        return false;
    }
};

MappedCorpus map_corpus(const TokenizedCorpus& corpus, const Vocabulary& vocab) {
    MappedCorpus m;
    m.docs.resize(corpus.size());
    m.doc_offsets.resize(corpus.size());
    m.counts.assign(vocab.size(), 0);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        m.doc_offsets[i] = m.train_words;
        auto& doc = m.docs[i];
        doc.reserve(corpus[i].size());
        for (const auto& tok : corpus[i]) {
            if (auto idx = vocab.find(tok)) {
                doc.push_back(*idx);
                ++m.counts[*idx];
                ++m.train_words;
            }
        }
    }
    return m;
}

std::vector<double> keep_probabilities(const std::vector<uint64_t>& counts, uint64_t total,
                                       double t) {
    std::vector<double> keep(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        keep[i] = subsample_keep_prob(counts[i], total, t);
    return keep;
}

inline double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct EpochParams {
    float* input = nullptr;
    float* output = nullptr;
    std::size_t dim = 0;
    const MappedCorpus* corpus = nullptr;
    const std::vector<double>* keep_prob = nullptr;
    const NegativeSampler* sampler = nullptr;
    std::size_t negatives = 5;
    std::size_t window = 5;
    uint64_t seed = 1;
    std::size_t epoch_idx = 0;
    bool decay = false;
    double lr_initial = 0.025;
    double lr_min = 0.0;
    uint64_t words_done_before = 0;
    uint64_t decay_span = 0; // epochs * train_words
    double fixed_lr = 0.0;
    std::size_t workers = 1;
    bool update = true;
    std::vector<uint64_t>* center_counts = nullptr;
};

struct EpochOutcome {
    double mean_loss = 0.0;
    uint64_t centers = 0;
};

EpochOutcome run_epoch(const EpochParams& p) {
    double loss_sum = 0.0;
    uint64_t centers = 0;
    const auto ndocs = static_cast<std::ptrdiff_t>(p.corpus->docs.size());
    const std::size_t dim = p.dim;

#ifdef _OPENMP
    const int nthreads = static_cast<int>(p.workers);
#pragma omp parallel num_threads(nthreads) reduction(+ : loss_sum, centers) if (nthreads > 1)
#endif
    {
        std::vector<double> h(dim), neu1e(dim);
        std::vector<uint64_t> local_counts;
        if (p.center_counts) local_counts.assign(p.center_counts->size(), 0);

#ifdef _OPENMP
#pragma omp for schedule(dynamic, 8)
#endif
        for (std::ptrdiff_t di = 0; di < ndocs; ++di) {
            const auto& doc = p.corpus->docs[static_cast<std::size_t>(di)];
            if (doc.size() < 2) continue;
            std::mt19937_64 rng(
                derive_seed(p.seed, p.epoch_idx, static_cast<uint64_t>(di)));
            const uint64_t base_progress =
                p.words_done_before + p.corpus->doc_offsets[static_cast<std::size_t>(di)];

            for (std::size_t t = 0; t < doc.size(); ++t) {
                const uint32_t center = doc[t];
                const double keep = (*p.keep_prob)[center];
                if (keep < 1.0 && uniform_real01(rng) >= keep) continue;

                double lr = p.fixed_lr;
                if (p.decay) {
                    const double progress = static_cast<double>(base_progress + t) /
                                            (static_cast<double>(p.decay_span) + 1.0);
                    lr = p.lr_initial * (1.0 - progress);
                    if (lr < p.lr_min) lr = p.lr_min;
                }

                const std::size_t lo = t >= p.window ? t - p.window : 0;
                const std::size_t hi = std::min(doc.size() - 1, t + p.window);
                std::fill(h.begin(), h.end(), 0.0);
                std::size_t cw = 0;
                for (std::size_t u = lo; u <= hi; ++u) {
                    if (u == t) continue;
                    const float* row = p.input + static_cast<std::size_t>(doc[u]) * dim;
                    for (std::size_t j = 0; j < dim; ++j) h[j] += row[j];
                    ++cw;
                }
                if (cw == 0) continue;
                const double inv_cw = 1.0 / static_cast<double>(cw);
                for (std::size_t j = 0; j < dim; ++j) h[j] *= inv_cw;

                std::fill(neu1e.begin(), neu1e.end(), 0.0);
                double example_loss = 0.0;
                for (std::size_t s = 0; s <= p.negatives; ++s) {
                    uint32_t target;
                    double label;
                    if (s == 0) {
                        target = center;
                        label = 1.0;
                    } else {
                        target = p.sampler->sample(rng);
                        if (target == center) continue;
                        label = 0.0;
                    }
                    float* orow = p.output + static_cast<std::size_t>(target) * dim;
                    double f = 0.0;
                    for (std::size_t j = 0; j < dim; ++j) f += h[j] * orow[j];
                    example_loss += label == 1.0 ? softplus(-f) : softplus(f);
                    if (p.update) {
                        const double g = (label - sigmoid(f)) * lr;
                        for (std::size_t j = 0; j < dim; ++j) {
                            neu1e[j] += g * orow[j];
                            orow[j] += static_cast<float>(g * h[j]);
                        }
                    }
                }
                if (p.update) {
                    for (std::size_t u = lo; u <= hi; ++u) {
                        if (u == t) continue;
                        float* irow = p.input + static_cast<std::size_t>(doc[u]) * dim;
                        for (std::size_t j = 0; j < dim; ++j)
                            irow[j] += static_cast<float>(neu1e[j]);
                    }
                }
                loss_sum += example_loss;
                ++centers;
                if (p.center_counts) ++local_counts[center];
            }
        }

        if (p.center_counts && !local_counts.empty()) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                for (std::size_t i = 0; i < local_counts.size(); ++i)
                    (*p.center_counts)[i] += local_counts[i];
            }
        }
    }
    EpochOutcome outcome;
    outcome.centers = centers;
    outcome.mean_loss = centers ? loss_sum / static_cast<double>(centers) : 0.0;
    return outcome;
}

void fill_uniform_rows(std::vector<float>& matrix, std::size_t first_row, std::size_t rows,
                       std::size_t dim, std::mt19937_64& rng) {
    const double scale = 1.0 / static_cast<double>(dim);
    for (std::size_t i = first_row * dim; i < (first_row + rows) * dim; ++i)
        matrix[i] = static_cast<float>((uniform_real01(rng) - 0.5) * scale);
}

std::string model_source(const TrainConfig& cfg) {
    std::ostringstream s;
    s << "cbow:d" << cfg.dim << ":s" << cfg.seed;
    return s.str();
}

/// Target-corpus tokens meeting min_count but missing from the vocabulary,
/// ordered like build_vocab output.
std::vector<std::pair<std::string, uint64_t>> extension_words(const TokenizedCorpus& corpus,
                                                              const Vocabulary& vocab,
                                                              std::size_t min_count) {
    struct Entry {
        uint64_t count = 0;
        std::size_t first = 0;
    };
    std::unordered_map<std::string, Entry> table;
    std::size_t position = 0;
    for (const auto& doc : corpus) {
        for (const auto& tok : doc) {
            if (!vocab.contains(tok)) {
                auto [it, inserted] = table.try_emplace(tok);
                if (inserted) it->second.first = position;
                ++it->second.count;
            }
            ++position;
        }
    }
    std::vector<std::pair<std::string, Entry>> rows;
    for (auto& [tok, e] : table)
        if (e.count >= min_count) rows.push_back({tok, e});
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second.count != b.second.count) return a.second.count > b.second.count;
        return a.second.first < b.second.first;
    });
    std::vector<std::pair<std::string, uint64_t>> out;
    out.reserve(rows.size());
    for (auto& [tok, e] : rows) out.push_back({std::move(tok), e.count});
    return out;
}

/// The model's vocabulary, extended in place; returns the extended input
/// matrix (new rows seeded uniform) and the new Vocabulary.
std::pair<Vocabulary, std::vector<float>> extend_model(const EmbeddingModel& model,
                                                       const TokenizedCorpus& corpus,
                                                       const TrainConfig& cfg) {
    std::vector<std::string> words = model.vocab().words();
    std::vector<uint64_t> counts = model.vocab().counts();
    std::vector<float> input = model.matrix();

    if (cfg.extend_vocab) {
        auto added = extension_words(corpus, model.vocab(), cfg.min_count);
        if (!added.empty()) {
            const std::size_t old_rows = words.size();
            for (auto& [tok, count] : added) {
                words.push_back(std::move(tok));
                if (!counts.empty()) counts.push_back(count);
            }
            input.resize(words.size() * model.dim());
            std::mt19937_64 rng(derive_seed(cfg.seed, 0xE77E, 0));
            fill_uniform_rows(input, old_rows, words.size() - old_rows, model.dim(), rng);
        }
    }
    return {Vocabulary::build(std::move(words), std::move(counts)), std::move(input)};
}

} // namespace

std::string TrainResult::losses_to_tsv() const {
    std::ostringstream out;
    out << "epoch\tloss\n";
    for (std::size_t e = 0; e < epoch_losses.size(); ++e)
        out << (e + 1) << '\t' << detail::fmt_shortest(epoch_losses[e]) << '\n';
    return out.str();
}

TrainResult train(const TokenizedCorpus& corpus, const TrainConfig& config) {
    config.validate();
    Vocabulary vocab = build_vocab(corpus, config.min_count);
    MappedCorpus mapped = map_corpus(corpus, vocab);
    if (!mapped.has_training_pair())
        throw PipelineError("degenerate corpus: no in-vocab token pair within a window");

    const std::size_t n = vocab.size();
    std::vector<float> input(n * config.dim);
    std::vector<float> output(n * config.dim, 0.0f);
    std::mt19937_64 init_rng(derive_seed(config.seed, 0x1417, 0));
    fill_uniform_rows(input, 0, n, config.dim, init_rng);

    NegativeSampler sampler(mapped.counts);
    const auto keep = keep_probabilities(mapped.counts, mapped.train_words, config.subsample_t);

    TrainResult result;
    result.center_counts.assign(n, 0);

    EpochParams p;
    p.input = input.data();
    p.output = output.data();
    p.dim = config.dim;
    p.corpus = &mapped;
    p.keep_prob = &keep;
    p.sampler = &sampler;
    p.negatives = config.negatives;
    p.window = config.window;
    p.seed = config.seed;
    p.decay = true;
    p.lr_initial = config.lr_initial;
    p.lr_min = config.lr_initial * 1e-4;
    p.decay_span = static_cast<uint64_t>(config.epochs) * mapped.train_words;
    p.workers = config.workers;
    p.update = true;
    p.center_counts = &result.center_counts;

    for (std::size_t e = 0; e < config.epochs; ++e) {
        p.epoch_idx = e;
        p.words_done_before = static_cast<uint64_t>(e) * mapped.train_words;
        result.epoch_losses.push_back(run_epoch(p).mean_loss);
    }

    ModelMeta meta;
    meta.source = model_source(config);
    meta.epochs_trained = static_cast<int>(config.epochs);
    result.model = EmbeddingModel(std::move(vocab), std::move(input), config.dim, meta);
    result.output_matrix = std::move(output);
    return result;
}

namespace {

void validate_continue(const TrainConfig& cfg) {
    if (cfg.dim < 1) throw InputError("dim must be >= 1");
    if (cfg.window < 1) throw InputError("window must be >= 1");
    if (cfg.min_count < 1) throw InputError("min_count must be >= 1");
    if (cfg.negatives < 1) throw InputError("negatives must be >= 1");
    if (cfg.epochs < 1) throw InputError("epochs must be >= 1");
    if (!(cfg.lr_initial >= 0.0 && cfg.lr_initial < 1.0))
        throw InputError("lr must be in [0, 1)"); // 0 permitted: no-op pass
    if (!(cfg.subsample_t > 0.0)) throw InputError("subsample_t must be positive");
    if (cfg.workers < 1) throw InputError("workers must be >= 1");
}

} // namespace

double continue_training(EmbeddingModel& model, const TokenizedCorpus& corpus,
                         const TrainConfig& config) {
    validate_continue(config);
    if (model.size() == 0) throw InputError("cannot continue training an empty model");

    auto [vocab, input] = extend_model(model, corpus, config);
    MappedCorpus mapped = map_corpus(corpus, vocab);
    if (!mapped.has_training_pair()) throw PipelineError("empty effective corpus");

    // The model carries no context matrix, so it restarts at zero, the same
    // state an externally loaded model would get.
    std::vector<float> output(vocab.size() * model.dim(), 0.0f);

    NegativeSampler sampler(mapped.counts);
    const auto keep = keep_probabilities(mapped.counts, mapped.train_words, config.subsample_t);

    EpochParams p;
    p.input = input.data();
    p.output = output.data();
    p.dim = model.dim();
    p.corpus = &mapped;
    p.keep_prob = &keep;
    p.sampler = &sampler;
    p.negatives = config.negatives;
    p.window = config.window;
    p.seed = config.seed;
    p.decay = false;
    p.fixed_lr = config.lr_initial;
    p.workers = config.workers;
    p.update = true;

    double last_loss = 0.0;
    for (std::size_t e = 0; e < config.epochs; ++e) {
        p.epoch_idx = e;
        last_loss = run_epoch(p).mean_loss;
    }

    ModelMeta meta = model.meta();
    meta.epochs_trained += static_cast<int>(config.epochs);
    model = EmbeddingModel(std::move(vocab), std::move(input), model.dim(), meta);
    return last_loss;
}

double negative_sampling_loss(const EmbeddingModel& model, std::span<const float> output_matrix,
                              const TokenizedCorpus& corpus, const TrainConfig& config,
                              std::size_t epoch) {
    if (output_matrix.size() != model.size() * model.dim())
        throw InputError("output matrix size does not match the model");
    MappedCorpus mapped = map_corpus(corpus, model.vocab());
    if (!mapped.has_training_pair()) throw PipelineError("empty effective corpus");

    NegativeSampler sampler(mapped.counts);
    const auto keep = keep_probabilities(mapped.counts, mapped.train_words, config.subsample_t);

    std::vector<float> input_copy(model.matrix());
    std::vector<float> output_copy(output_matrix.begin(), output_matrix.end());

    EpochParams p;
    p.input = input_copy.data();
    p.output = output_copy.data();
    p.dim = model.dim();
    p.corpus = &mapped;
    p.keep_prob = &keep;
    p.sampler = &sampler;
    p.negatives = config.negatives;
    p.window = config.window;
    p.seed = config.seed;
    p.epoch_idx = epoch;
    p.decay = false;
    p.fixed_lr = 0.0;
    p.workers = config.workers;
    p.update = false;

    return run_epoch(p).mean_loss;
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
    case StopReason::accuracy_budget: return "accuracy_budget";
    case StopReason::drift_converged: return "drift_converged";
    case StopReason::max_epochs: return "max_epochs";
    }
    return "unknown";
}

void FineTuneConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must be in (0, 1)");
    if (!(beta > 0.0)) throw InputError("beta must be positive");
    if (top_k < 1) throw InputError("top_k must be >= 1");
}

FineTuneMonitor::FineTuneMonitor(double alpha, double beta, std::size_t max_epochs, double acc_0)
    : alpha_(alpha), beta_(beta), max_epochs_(max_epochs), acc_0_(acc_0) {}

std::optional<StopReason> FineTuneMonitor::observe(std::size_t epoch, double accuracy,
                                                   double delta) {
    if (acc_0_ - accuracy >= alpha_) return StopReason::accuracy_budget;
    if (delta < beta_) return StopReason::drift_converged;
    if (epoch >= max_epochs_) return StopReason::max_epochs;
    return std::nullopt;
}

std::string FineTuneReport::to_tsv() const {
    std::ostringstream out;
    out << "epoch\tloss\taccuracy\tdelta\n";
    out << "0\tnan\t" << detail::fmt_shortest(acc_0) << "\tnan\n";
    for (const auto& e : epochs)
        out << e.epoch << '\t' << detail::fmt_shortest(e.loss) << '\t'
            << detail::fmt_shortest(e.accuracy) << '\t' << detail::fmt_shortest(e.delta) << '\n';
    return out.str();
}

std::string FineTuneReport::to_json() const {
    nlohmann::json j;
    j["acc_0"] = acc_0;
    j["stop_epoch"] = stop_epoch;
    j["stop_reason"] = to_string(stop_reason);
    auto& rows = j["epochs"] = nlohmann::json::array();
    for (const auto& e : epochs)
        rows.push_back(
            {{"epoch", e.epoch}, {"loss", e.loss}, {"accuracy", e.accuracy}, {"delta", e.delta}});
    j["tracked_words"] = tracked_words;
    j["trajectories"] = trajectories;
    return j.dump(2);
}

namespace {

std::vector<std::string> pick_tracked_words(const MappedCorpus& mapped, const Vocabulary& vocab,
                                            std::size_t top_k) {
    std::vector<uint32_t> ids;
    for (uint32_t i = 0; i < mapped.counts.size(); ++i)
        if (mapped.counts[i] > 0) ids.push_back(i);
    std::sort(ids.begin(), ids.end(), [&](uint32_t a, uint32_t b) {
        if (mapped.counts[a] != mapped.counts[b]) return mapped.counts[a] > mapped.counts[b];
        return vocab.word(a) < vocab.word(b);
    });
    if (ids.size() > top_k) ids.resize(top_k);
    std::vector<std::string> words;
    words.reserve(ids.size());
    for (auto i : ids) words.push_back(vocab.word(i));
    return words;
}

double drift_score(const std::vector<float>& input, std::size_t dim, uint32_t idx,
                   const std::vector<double>& axis, double axis_norm) {
    const float* row = input.data() + static_cast<std::size_t>(idx) * dim;
    double dot = 0.0, sq = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        dot += row[j] * axis[j];
        sq += static_cast<double>(row[j]) * row[j];
    }
    const double norm = std::sqrt(sq);
    if (norm == 0.0 || axis_norm == 0.0) return 0.0;
    return std::clamp(dot / (norm * axis_norm), -1.0, 1.0);
}

} // namespace

std::pair<EmbeddingModel, FineTuneReport>
fine_tune(const EmbeddingModel& reference, const TokenizedCorpus& target_corpus,
          const FineTuneConfig& cfg, const TrainConfig& train_cfg,
          const AnalogySet& analogy_set) {
    cfg.validate();
    validate_continue(train_cfg);
    if (reference.size() == 0) throw InputError("reference model is empty");

    SemanticAxis drift_axis = cfg.drift_axis;
    if (drift_axis.vector.empty()) {
        const auto& poles = standard_sentiment_poles();
        drift_axis =
            build_axis(reference, poles.positive, poles.negative, "bad->good");
    }
    if (drift_axis.vector.size() != reference.dim())
        throw InputError("drift axis dimension does not match the reference model");
    const double axis_norm = kernels::l2_norm(std::span<const double>(drift_axis.vector));

    FineTuneReport report;
    report.stop_reason = StopReason::max_epochs;

    if (cfg.max_epochs == 0) {
        report.acc_0 = evaluate_analogies(reference, analogy_set).total_accuracy;
        report.stop_epoch = 0;
        MappedCorpus mapped = map_corpus(target_corpus, reference.vocab());
        report.tracked_words = pick_tracked_words(mapped, reference.vocab(), cfg.top_k);
        for (const auto& w : report.tracked_words) {
            const uint32_t idx = *reference.vocab().find(w);
            report.trajectories.push_back(
                {drift_score(reference.matrix(), reference.dim(), idx, drift_axis.vector,
                             axis_norm)});
        }
        return {reference, std::move(report)};
    }

    auto [vocab, input] = extend_model(reference, target_corpus, train_cfg);
    MappedCorpus mapped = map_corpus(target_corpus, vocab);
    if (!mapped.has_training_pair()) throw PipelineError("empty effective corpus");
    std::vector<float> output(vocab.size() * reference.dim(), 0.0f);

    NegativeSampler sampler(mapped.counts);
    const auto keep =
        keep_probabilities(mapped.counts, mapped.train_words, train_cfg.subsample_t);

    report.tracked_words = pick_tracked_words(mapped, vocab, cfg.top_k);
    std::vector<uint32_t> tracked_ids;
    tracked_ids.reserve(report.tracked_words.size());
    for (const auto& w : report.tracked_words) tracked_ids.push_back(*vocab.find(w));

    const std::size_t dim = reference.dim();
    auto snapshot = [&](int epochs_done) {
        ModelMeta meta = reference.meta();
        meta.epochs_trained += epochs_done;
        return EmbeddingModel(vocab, input, dim, meta);
    };

    std::vector<double> prev_scores(tracked_ids.size());
    report.trajectories.assign(tracked_ids.size(), {});
    for (std::size_t w = 0; w < tracked_ids.size(); ++w) {
        prev_scores[w] = drift_score(input, dim, tracked_ids[w], drift_axis.vector, axis_norm);
        report.trajectories[w].push_back(prev_scores[w]);
    }

    EmbeddingModel current = snapshot(0);
    report.acc_0 = evaluate_analogies(current, analogy_set).total_accuracy;
    FineTuneMonitor monitor(cfg.alpha, cfg.beta, cfg.max_epochs, report.acc_0);

    EpochParams p;
    p.input = input.data();
    p.output = output.data();
    p.dim = dim;
    p.corpus = &mapped;
    p.keep_prob = &keep;
    p.sampler = &sampler;
    p.negatives = train_cfg.negatives;
    p.window = train_cfg.window;
    p.seed = train_cfg.seed;
    p.decay = false;
    p.fixed_lr = train_cfg.lr_initial;
    p.workers = train_cfg.workers;
    p.update = true;

    for (std::size_t e = 1; e <= cfg.max_epochs; ++e) {
        p.epoch_idx = e - 1;
        const double loss = run_epoch(p).mean_loss;

        current = snapshot(static_cast<int>(e));
        const double acc = evaluate_analogies(current, analogy_set).total_accuracy;

        double delta = 0.0;
        for (std::size_t w = 0; w < tracked_ids.size(); ++w) {
            const double s =
                drift_score(input, dim, tracked_ids[w], drift_axis.vector, axis_norm);
            delta += std::abs(s - prev_scores[w]);
            prev_scores[w] = s;
            report.trajectories[w].push_back(s);
        }
        if (!tracked_ids.empty()) delta /= static_cast<double>(tracked_ids.size());

        report.epochs.push_back({e, loss, acc, delta});
        if (auto reason = monitor.observe(e, acc, delta)) {
            report.stop_epoch = e;
            report.stop_reason = *reason;
            break;
        }
    }
    return {std::move(current), std::move(report)};
}

} // namespace semaxis
