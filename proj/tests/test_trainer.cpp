#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "semaxis/rng.hpp"
#include "semaxis/trainer.hpp"

using namespace semaxis;
using testutil::fixture;
using testutil::make_model;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Two word clusters with a couple of shared high-frequency tokens.
TokenizedCorpus clustered_corpus(std::size_t docs, std::size_t len, uint64_t seed) {
    static const std::vector<std::string> topic_a{"sea", "wave", "boat", "fish", "salt"};
    static const std::vector<std::string> topic_b{"code", "bug", "test", "loop", "byte"};
    static const std::vector<std::string> shared{"the", "and"};
    std::mt19937_64 rng(seed);
    TokenizedCorpus corpus;
    for (std::size_t d = 0; d < docs; ++d) {
        const auto& topic = d % 2 == 0 ? topic_a : topic_b;
        std::vector<std::string> doc;
        doc.reserve(len);
        for (std::size_t i = 0; i < len; ++i) {
            if (uniform_below(rng, 4) == 0)
                doc.push_back(shared[uniform_below(rng, shared.size())]);
            else
                doc.push_back(topic[uniform_below(rng, topic.size())]);
        }
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

double oracle_softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// Independent re-walk of one epoch's example stream over frozen matrices:
/// same document seeding, subsampling draws, window means, and negative
/// draws as the trainer, with the loss accumulated directly.
double replay_epoch_loss(const EmbeddingModel& model, std::span<const float> output,
                         const TokenizedCorpus& corpus, const TrainConfig& cfg,
                         std::size_t epoch) {
    const auto& vocab = model.vocab();
    const std::size_t dim = model.dim();

    std::vector<std::vector<uint32_t>> docs(corpus.size());
    std::vector<uint64_t> counts(vocab.size(), 0);
    uint64_t total = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        for (const auto& tok : corpus[i])
            if (auto id = vocab.find(tok)) {
                docs[i].push_back(*id);
                ++counts[*id];
                ++total;
            }

    std::vector<double> keep(vocab.size(), 1.0);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (counts[i] == 0 || total == 0) continue;
        const double f = static_cast<double>(counts[i]) / static_cast<double>(total);
        const double r = cfg.subsample_t / f;
        keep[i] = std::sqrt(r) + r;
    }
    NegativeSampler sampler(counts);

    double loss_sum = 0.0;
    uint64_t centers = 0;
    std::vector<double> h(dim);
    for (std::size_t di = 0; di < docs.size(); ++di) {
        const auto& doc = docs[di];
        if (doc.size() < 2) continue;
        std::mt19937_64 rng(derive_seed(cfg.seed, epoch, di));
        for (std::size_t t = 0; t < doc.size(); ++t) {
            const uint32_t center = doc[t];
            if (keep[center] < 1.0 && uniform_real01(rng) >= keep[center]) continue;

            const std::size_t lo = t >= cfg.window ? t - cfg.window : 0;
            const std::size_t hi = std::min(doc.size() - 1, t + cfg.window);
            std::fill(h.begin(), h.end(), 0.0);
            std::size_t cw = 0;
            for (std::size_t u = lo; u <= hi; ++u) {
                if (u == t) continue;
                auto row = model.row(doc[u]);
                for (std::size_t j = 0; j < dim; ++j) h[j] += row[j];
                ++cw;
            }
            if (cw == 0) continue;
            const double inv_cw = 1.0 / static_cast<double>(cw);
            for (std::size_t j = 0; j < dim; ++j) h[j] *= inv_cw;

            double example = 0.0;
            for (std::size_t s = 0; s <= cfg.negatives; ++s) {
                uint32_t target = center;
                if (s > 0) {
                    target = sampler.sample(rng);
                    if (target == center) continue; // slot dropped, not redrawn
                }
                const float* orow = output.data() + static_cast<std::size_t>(target) * dim;
                double f = 0.0;
                for (std::size_t j = 0; j < dim; ++j) f += h[j] * orow[j];
                example += s == 0 ? oracle_softplus(-f) : oracle_softplus(f);
            }
            loss_sum += example;
            ++centers;
        }
    }
    return centers ? loss_sum / static_cast<double>(centers) : 0.0;
}

std::map<std::string, uint64_t> word_counts(const TokenizedCorpus& corpus) {
    std::map<std::string, uint64_t> counts;
    for (const auto& doc : corpus)
        for (const auto& tok : doc) ++counts[tok];
    return counts;
}

} // namespace

TEST_CASE("train config validation") {
    TrainConfig ok;
    ok.validate();
    auto broken = [](auto&& mutate) {
        TrainConfig cfg;
        mutate(cfg);
        CHECK_THROWS_AS(cfg.validate(), InputError);
    };
    broken([](TrainConfig& c) { c.dim = 0; });
    broken([](TrainConfig& c) { c.window = 0; });
    broken([](TrainConfig& c) { c.min_count = 0; });
    broken([](TrainConfig& c) { c.negatives = 0; });
    broken([](TrainConfig& c) { c.epochs = 0; });
    broken([](TrainConfig& c) { c.lr_initial = 0.0; });
    broken([](TrainConfig& c) { c.lr_initial = 1.0; });
    broken([](TrainConfig& c) { c.subsample_t = 0.0; });
    broken([](TrainConfig& c) { c.workers = 0; });
}

TEST_CASE("build_vocab orders by count then first occurrence") {
    TokenizedCorpus corpus{{"b", "a", "b", "c"}, {"a", "b", "c", "d"}};
    auto vocab = build_vocab(corpus, 1);
    CHECK(vocab.words() == std::vector<std::string>{"b", "a", "c", "d"});
    CHECK(vocab.has_counts());
    CHECK(vocab.count(0) == 3);
    CHECK(vocab.count(1) == 2);
    CHECK(vocab.count(3) == 1);

    auto trimmed = build_vocab(corpus, 2);
    CHECK(trimmed.words() == std::vector<std::string>{"b", "a", "c"});

    CHECK_THROWS_AS(build_vocab(corpus, 4), PipelineError);
    CHECK_THROWS_AS(build_vocab({}, 1), InputError);
}

TEST_CASE("negative sampler follows the 3/4-power distribution") {
    std::vector<uint64_t> counts{16, 81, 0, 1};
    NegativeSampler sampler(counts);

    double weights[4];
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        weights[i] = counts[i] ? std::pow(static_cast<double>(counts[i]), 0.75) : 0.0;
        total += weights[i];
    }
    const auto& probs = sampler.probabilities();
    REQUIRE(probs.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(probs[i] - weights[i] / total) <= 1e-12);

    std::mt19937_64 rng(123);
    std::array<uint64_t, 4> freq{};
    const std::size_t draws = 1000000;
    for (std::size_t i = 0; i < draws; ++i) ++freq[sampler.sample(rng)];
    CHECK(freq[2] == 0); // zero-count word is never drawn
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(static_cast<double>(freq[i]) / draws - probs[i]) <= 0.01);

    CHECK_THROWS_AS(NegativeSampler(std::vector<uint64_t>{}), InputError);
    CHECK_THROWS_AS(NegativeSampler(std::vector<uint64_t>{0, 0}), InputError);
}

TEST_CASE("subsample keep probability") {
    // f = 0.1, t = 0.01: sqrt(0.1) + 0.1
    const double r = 0.01 / (100.0 / 1000.0);
    CHECK(subsample_keep_prob(100, 1000, 0.01) == std::sqrt(r) + r);
    CHECK(subsample_keep_prob(0, 1000, 0.01) == 1.0);
    CHECK(subsample_keep_prob(100, 0, 0.01) == 1.0);
    CHECK(subsample_keep_prob(5, 1000, kInf) == kInf); // never downsampled
    // more frequent tokens keep less
    CHECK(subsample_keep_prob(200, 1000, 0.01) < subsample_keep_prob(100, 1000, 0.01));
    // rare tokens are always kept
    CHECK(subsample_keep_prob(1, 1000000, 1e-3) > 1.0);
}

TEST_CASE("training is a pure function of corpus, config, and seed") {
    auto corpus = clustered_corpus(40, 8, 21);
    TrainConfig cfg;
    cfg.dim = 10;
    cfg.window = 3;
    cfg.min_count = 1;
    cfg.negatives = 3;
    cfg.epochs = 2;
    cfg.lr_initial = 0.05;
    cfg.seed = 7;

    auto a = train(corpus, cfg);
    auto b = train(corpus, cfg);
    CHECK(a.model.matrix() == b.model.matrix());
    CHECK(a.output_matrix == b.output_matrix);
    CHECK(a.epoch_losses == b.epoch_losses);
    CHECK(a.center_counts == b.center_counts);
    CHECK(a.model.vocab().words() == b.model.vocab().words());
    CHECK(a.model.meta().source == "cbow:d10:s7");
    CHECK(a.model.meta().epochs_trained == 2);
    REQUIRE(a.epoch_losses.size() == 2);
    for (double loss : a.epoch_losses) CHECK(loss > 0.0);

    cfg.seed = 8;
    auto c = train(corpus, cfg);
    CHECK(a.model.matrix() != c.model.matrix());

    CHECK(a.losses_to_tsv().rfind("epoch\tloss\n1\t", 0) == 0);
}

TEST_CASE("degenerate corpora are rejected") {
    TokenizedCorpus singles{{"a"}, {"a"}, {"b"}, {"b"}};
    TrainConfig cfg;
    cfg.min_count = 1;
    cfg.epochs = 1;
    CHECK_THROWS_AS(train(singles, cfg), PipelineError);
}

TEST_CASE("reported loss replays exactly over frozen matrices") {
    auto corpus = clustered_corpus(40, 8, 33);
    TrainConfig cfg;
    cfg.dim = 12;
    cfg.window = 2;
    cfg.min_count = 1;
    cfg.negatives = 3;
    cfg.subsample_t = 1e-3; // harsh, so the subsampling draws are exercised
    cfg.epochs = 2;
    cfg.lr_initial = 0.05;
    cfg.seed = 42;

    auto result = train(corpus, cfg);
    for (std::size_t epoch = 0; epoch < 2; ++epoch) {
        const double got =
            negative_sampling_loss(result.model, result.output_matrix, corpus, cfg, epoch);
        const double expected =
            replay_epoch_loss(result.model, result.output_matrix, corpus, cfg, epoch);
        CHECK(std::abs(got - expected) <= 1e-12);
        CHECK(got > 0.0);
    }

    // boundary shapes: window spanning whole documents, single negative
    TrainConfig wide = cfg;
    wide.window = 5;
    wide.negatives = 1;
    wide.subsample_t = kInf;
    const double got = negative_sampling_loss(result.model, result.output_matrix, corpus, wide);
    CHECK(std::abs(got - replay_epoch_loss(result.model, result.output_matrix, corpus, wide, 0)) <=
          1e-12);

    std::vector<float> short_output(3, 0.0f);
    CHECK_THROWS_AS(negative_sampling_loss(result.model, short_output, corpus, cfg), InputError);
}

TEST_CASE("loss falls from the first to the last epoch") {
    auto corpus = clustered_corpus(120, 10, 5);
    TrainConfig cfg;
    cfg.dim = 8;
    cfg.window = 3;
    cfg.min_count = 1;
    cfg.negatives = 3;
    cfg.subsample_t = kInf;
    cfg.epochs = 5;
    cfg.lr_initial = 0.05;
    cfg.seed = 11;

    auto result = train(corpus, cfg);
    REQUIRE(result.epoch_losses.size() == 5);
    CHECK(result.epoch_losses.back() < result.epoch_losses.front());
}

TEST_CASE("center counts equal corpus counts when downsampling is off") {
    auto corpus = clustered_corpus(30, 8, 13);
    TrainConfig cfg;
    cfg.dim = 6;
    cfg.window = 2;
    cfg.min_count = 1;
    cfg.negatives = 2;
    cfg.subsample_t = kInf;
    cfg.epochs = 1;
    cfg.seed = 3;

    auto full = train(corpus, cfg);
    auto counts = word_counts(corpus);
    for (const auto& [word, n] : counts) {
        auto idx = full.model.vocab().find(word);
        REQUIRE(idx.has_value());
        CHECK(full.center_counts[*idx] == n);
    }

    // harsh downsampling trains the most frequent token less often
    cfg.subsample_t = 1e-4;
    auto sampled = train(corpus, cfg);
    const auto top = *full.model.vocab().find("the");
    CHECK(sampled.center_counts[top] < full.center_counts[top]);
}

TEST_CASE("multi-worker training still produces a usable model") {
    auto corpus = clustered_corpus(40, 8, 9);
    TrainConfig cfg;
    cfg.dim = 8;
    cfg.window = 2;
    cfg.min_count = 1;
    cfg.negatives = 2;
    cfg.subsample_t = kInf;
    cfg.epochs = 2;
    cfg.workers = 2;
    cfg.seed = 17;

    auto result = train(corpus, cfg);
    CHECK(result.model.size() == 12);
    for (float v : result.model.matrix()) CHECK(std::isfinite(v));
    for (double loss : result.epoch_losses) CHECK(std::isfinite(loss));
}

TEST_CASE("continue_training at zero learning rate changes nothing") {
    auto corpus = clustered_corpus(30, 8, 51);
    TrainConfig cfg;
    cfg.dim = 8;
    cfg.window = 2;
    cfg.min_count = 1;
    cfg.negatives = 2;
    cfg.epochs = 2;
    cfg.seed = 2;

    auto model = train(corpus, cfg).model;
    auto before = model.matrix();

    TrainConfig cont = cfg;
    cont.lr_initial = 0.0;
    cont.epochs = 1;
    cont.extend_vocab = false;
    const double loss = continue_training(model, corpus, cont);
    CHECK(model.matrix() == before);
    CHECK(loss > 0.0);
    CHECK(model.meta().epochs_trained == 3);

    cont.lr_initial = 1.0;
    CHECK_THROWS_AS(continue_training(model, corpus, cont), InputError);
    cont.lr_initial = -0.1;
    CHECK_THROWS_AS(continue_training(model, corpus, cont), InputError);
}

TEST_CASE("continue_training without usable target text throws") {
    auto corpus = clustered_corpus(20, 8, 52);
    TrainConfig cfg;
    cfg.dim = 6;
    cfg.window = 2;
    cfg.min_count = 1;
    cfg.negatives = 2;
    cfg.epochs = 1;
    cfg.seed = 4;
    auto model = train(corpus, cfg).model;

    TokenizedCorpus foreign{{"qq", "ww", "ee"}, {"rr", "tt"}};
    TrainConfig cont = cfg;
    cont.extend_vocab = false;
    CHECK_THROWS_WITH_AS(continue_training(model, foreign, cont), "empty effective corpus",
                         PipelineError);
}

TEST_CASE("continue_training extends the vocabulary with frequent new words") {
    auto corpus = clustered_corpus(30, 8, 53);
    TrainConfig cfg;
    cfg.dim = 8;
    cfg.window = 2;
    cfg.min_count = 1;
    cfg.negatives = 2;
    cfg.epochs = 1;
    cfg.seed = 6;
    auto base = train(corpus, cfg).model;
    const std::size_t old_size = base.size();

    // new token appears 4 times, min_count 3 admits it; "rare" stays out
    TokenizedCorpus target{{"zzz", "sea", "zzz", "wave"},
                           {"zzz", "boat", "zzz", "rare"},
                           {"sea", "wave", "boat", "fish"}};
    TrainConfig cont = cfg;
    cont.min_count = 3;
    cont.lr_initial = 0.01;
    cont.extend_vocab = true;

    auto extended = base;
    continue_training(extended, target, cont);
    REQUIRE(extended.vocab().contains("zzz"));
    CHECK_FALSE(extended.vocab().contains("rare"));
    CHECK(extended.size() == old_size + 1);
    CHECK(*extended.vocab().find("zzz") == old_size); // appended after old vocab

    // a vocabulary word absent from the target corpus is never touched
    auto untouched = *base.vocab().find("the");
    CHECK(extended.row(untouched)[0] == base.row(untouched)[0]);
    std::vector<float> old_row(base.row(untouched).begin(), base.row(untouched).end());
    std::vector<float> new_row(extended.row(untouched).begin(), extended.row(untouched).end());
    CHECK(old_row == new_row);

    // extension is seeded: repeating from the same base reproduces it
    auto again = base;
    continue_training(again, target, cont);
    CHECK(again.matrix() == extended.matrix());

    // zero learning rate exposes the untouched seeded rows
    auto frozen = base;
    TrainConfig freeze = cont;
    freeze.lr_initial = 0.0;
    continue_training(frozen, target, freeze);
    const double bound = 0.5 / static_cast<double>(cfg.dim);
    for (float v : frozen.row(*frozen.vocab().find("zzz"))) {
        CHECK(v >= -bound);
        CHECK(v < bound);
    }
}

TEST_CASE("fine-tune monitor stop rules") {
    CHECK(to_string(StopReason::accuracy_budget) == "accuracy_budget");
    CHECK(to_string(StopReason::drift_converged) == "drift_converged");
    CHECK(to_string(StopReason::max_epochs) == "max_epochs");

    SUBCASE("accuracy budget fires on the cumulative drop from epoch zero") {
        FineTuneMonitor monitor(0.3, 1e-9, 10, 0.60);
        CHECK(monitor.observe(1, 0.55, 0.5) == std::nullopt);
        CHECK(monitor.observe(2, 0.28, 0.5) == StopReason::accuracy_budget);
    }

    SUBCASE("drift convergence fires when the mean shift falls below beta") {
        FineTuneMonitor monitor(0.9, 0.001, 10, 0.60);
        CHECK(monitor.observe(1, 0.60, 0.5) == std::nullopt);
        CHECK(monitor.observe(2, 0.60, 0.01) == std::nullopt);
        CHECK(monitor.observe(3, 0.60, 0.0005) == StopReason::drift_converged);
    }

    SUBCASE("epoch cap fires last") {
        FineTuneMonitor monitor(0.9, 1e-12, 2, 0.60);
        CHECK(monitor.observe(1, 0.60, 1.0) == std::nullopt);
        CHECK(monitor.observe(2, 0.60, 1.0) == StopReason::max_epochs);
    }

    SUBCASE("accuracy budget outranks drift convergence") {
        FineTuneMonitor monitor(0.1, 10.0, 5, 0.9);
        CHECK(monitor.observe(1, 0.5, 0.0) == StopReason::accuracy_budget);
    }
}

TEST_CASE("fine-tune config validation") {
    FineTuneConfig ok;
    ok.validate();
    auto broken = [](auto&& mutate) {
        FineTuneConfig cfg;
        mutate(cfg);
        CHECK_THROWS_AS(cfg.validate(), InputError);
    };
    broken([](FineTuneConfig& c) { c.alpha = 0.0; });
    broken([](FineTuneConfig& c) { c.alpha = 1.0; });
    broken([](FineTuneConfig& c) { c.beta = 0.0; });
    broken([](FineTuneConfig& c) { c.top_k = 0; });
}

namespace {

/// Docs drawn from the singular/plural vocabulary of the analogy corpus.
TokenizedCorpus plural_target_corpus() {
    return {
        {"cat", "cats", "dog", "dogs", "car", "cars"},
        {"tree", "trees", "bird", "birds", "book", "books"},
        {"star", "stars", "lamp", "lamps", "door", "doors"},
        {"hand", "hands", "cat", "dogs", "tree", "cars"},
    };
}

TrainConfig gentle_tune_config() {
    TrainConfig cfg;
    cfg.window = 2;
    cfg.min_count = 1;
    cfg.negatives = 2;
    cfg.subsample_t = kInf;
    cfg.lr_initial = 1e-4; // small enough to keep the analogy margins intact
    cfg.seed = 5;
    cfg.extend_vocab = false;
    return cfg;
}

} // namespace

TEST_CASE("fine_tune with max_epochs 0 returns the reference untouched") {
    auto reference = load_embeddings(fixture("analogy_model.txt"), EmbeddingFormat::text);
    auto analogies = AnalogySet::load(fixture("analogy_plural.txt"));

    FineTuneConfig cfg;
    cfg.max_epochs = 0;
    cfg.top_k = 2;
    cfg.drift_axis = parse_inline_axis(reference, "cat:cats");

    TokenizedCorpus target{{"cat", "cat", "cat", "dog"}, {"dog", "dog", "cats", "zzz"}};
    auto [model, report] = fine_tune(reference, target, cfg, gentle_tune_config(), analogies);

    CHECK(model.matrix() == reference.matrix());
    CHECK(model.size() == reference.size());
    CHECK(report.acc_0 == 1.0);
    CHECK(report.stop_epoch == 0);
    CHECK(report.stop_reason == StopReason::max_epochs);
    CHECK(report.epochs.empty());
    // count ties resolve by token: cat and dog both occur 3 times
    CHECK(report.tracked_words == std::vector<std::string>{"cat", "dog"});
    REQUIRE(report.trajectories.size() == 2);
    for (const auto& t : report.trajectories) CHECK(t.size() == 1);
}

TEST_CASE("fine_tune runs to the epoch cap under loose budgets") {
    auto reference = load_embeddings(fixture("analogy_model.txt"), EmbeddingFormat::text);
    auto analogies = AnalogySet::load(fixture("analogy_plural.txt"));

    FineTuneConfig cfg;
    cfg.alpha = 0.9;
    cfg.beta = 1e-15; // drift never converges at a visible learning rate
    cfg.max_epochs = 3;
    cfg.drift_axis = parse_inline_axis(reference, "cat:cats");

    // large enough that every epoch moves rows by far more than a float ulp,
    // small enough that the analogy margins survive
    auto tune = gentle_tune_config();
    tune.lr_initial = 0.01;

    auto [model, report] = fine_tune(reference, plural_target_corpus(), cfg, tune, analogies);

    CHECK(report.acc_0 == 1.0);
    CHECK(report.stop_epoch == 3);
    CHECK(report.stop_reason == StopReason::max_epochs);
    REQUIRE(report.epochs.size() == 3);
    for (std::size_t e = 0; e < 3; ++e) {
        CHECK(report.epochs[e].epoch == e + 1);
        CHECK(report.epochs[e].accuracy == 1.0); // tiny updates keep the margins
        CHECK(report.epochs[e].loss > 0.0);
        CHECK(report.epochs[e].delta > 0.0);
    }
    for (const auto& t : report.trajectories) CHECK(t.size() == 4);
    CHECK(model.meta().epochs_trained == reference.meta().epochs_trained + 3);
    CHECK(model.matrix() != reference.matrix());

    auto tsv = report.to_tsv();
    CHECK(tsv.rfind("epoch\tloss\taccuracy\tdelta\n0\tnan\t1\tnan\n", 0) == 0);
    CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 5);

    auto j = nlohmann::json::parse(report.to_json());
    CHECK(j["acc_0"] == 1.0);
    CHECK(j["stop_epoch"] == 3);
    CHECK(j["stop_reason"] == "max_epochs");
    CHECK(j["epochs"].size() == 3);
    CHECK(j["trajectories"].size() == report.trajectories.size());
    CHECK(j["tracked_words"].size() == report.tracked_words.size());
}

TEST_CASE("fine_tune stops immediately once drift is inside beta") {
    auto reference = load_embeddings(fixture("analogy_model.txt"), EmbeddingFormat::text);
    auto analogies = AnalogySet::load(fixture("analogy_plural.txt"));

    FineTuneConfig cfg;
    cfg.alpha = 0.9;
    cfg.beta = 10.0; // any drift counts as converged
    cfg.max_epochs = 5;
    cfg.drift_axis = parse_inline_axis(reference, "cat:cats");

    auto [model, report] =
        fine_tune(reference, plural_target_corpus(), cfg, gentle_tune_config(), analogies);
    CHECK(report.stop_epoch == 1);
    CHECK(report.stop_reason == StopReason::drift_converged);
    CHECK(report.epochs.size() == 1);
    for (const auto& t : report.trajectories) CHECK(t.size() == 2);
}

TEST_CASE("fine_tune builds the default sentiment drift axis when none is given") {
    std::vector<std::string> words;
    const auto& poles = standard_sentiment_poles();
    words.insert(words.end(), poles.positive.begin(), poles.positive.end());
    words.insert(words.end(), poles.negative.begin(), poles.negative.end());
    words.push_back("filler");

    std::mt19937_64 rng(31);
    std::vector<float> matrix(words.size() * 4);
    for (auto& v : matrix) v = static_cast<float>(uniform_real01(rng) * 2.0 - 1.0);
    auto reference = make_model(words, matrix, 4);

    AnalogySet analogies;
    analogies.sections.push_back({"toy", {{{"good", "bad", "happy", "unhappy"}}}});

    FineTuneConfig cfg;
    cfg.max_epochs = 0;
    TokenizedCorpus target{{"good", "bad", "filler"}};
    auto [model, report] = fine_tune(reference, target, cfg, gentle_tune_config(), analogies);
    CHECK(report.trajectories.size() == 3);

    // a reference lacking a pole word cannot build the default axis
    auto small = testutil::random_model(5, 4, 77);
    CHECK_THROWS_AS(fine_tune(small, target, cfg, gentle_tune_config(), analogies),
                    PipelineError);
}
