#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semaxis/analogy.hpp"
#include "semaxis/axis.hpp"
#include "semaxis/common.hpp"
#include "semaxis/embedding.hpp"

namespace semaxis {

struct TrainConfig {
    std::size_t dim = 300;
    std::size_t window = 5;    // fixed context radius
    std::size_t min_count = 10;
    std::size_t negatives = 5;
    double subsample_t = 1e-3; // infinity disables downsampling
    double lr_initial = 0.025; // use 0.005 for fine-tuning
    std::size_t epochs = 100;
    std::uint64_t seed = 1;
    std::size_t workers = 1;   // >1 loses bit-exact reproducibility
    bool extend_vocab = true;  // continue_training/fine_tune only

    void validate() const;
};

/// Tokens with frequency >= min_count, ordered by descending frequency,
/// ties by first occurrence in the corpus.
Vocabulary build_vocab(const TokenizedCorpus& corpus, std::size_t min_count);

/// Negative-sampling draw distribution proportional to count^power.
/// Walker alias sampling, so draw probabilities match probabilities()
/// exactly.
class NegativeSampler {
public:
    explicit NegativeSampler(std::span<const std::uint64_t> counts, double power = 0.75);

    std::uint32_t sample(std::mt19937_64& rng) const;
    const std::vector<double>& probabilities() const { return probs_; }

private:
    std::vector<double> probs_;
    std::vector<double> accept_;
    std::vector<std::uint32_t> alias_;
};

/// word2vec downsampling keep probability sqrt(t/f) + t/f for corpus
/// frequency f = count/total; values above 1 mean the token is always kept.
double subsample_keep_prob(std::uint64_t count, std::uint64_t total_tokens, double t);

struct TrainResult {
    EmbeddingModel model;
    std::vector<float> output_matrix;           // context vectors, size() x dim
    std::vector<double> epoch_losses;           // mean NS loss per center word
    std::vector<std::uint64_t> center_counts;   // training occurrences per vocab index

    std::string losses_to_tsv() const;
};

/// CBOW with negative sampling trained from scratch. Learning rate decays
/// linearly from lr_initial to lr_initial*1e-4 over epochs*corpus tokens.
/// With workers=1 the result is a pure function of (corpus, config, seed).
TrainResult train(const TokenizedCorpus& corpus, const TrainConfig& config);

/// Applies config.epochs epochs of CBOW updates to an existing model at the
/// fixed learning rate config.lr_initial (no decay). With extend_vocab,
/// corpus tokens meeting min_count but missing from the model are first
/// added with seeded uniform [-0.5/dim, 0.5/dim] input rows. Returns the
/// mean NS loss of the last epoch.
double continue_training(EmbeddingModel& model, const TokenizedCorpus& corpus,
                         const TrainConfig& config);

/// Mean negative-sampling loss of a frozen model over the corpus, using the
/// same windowing, subsampling, and negative draws as an epoch at lr=0.
/// output_matrix supplies the context vectors (e.g. TrainResult's); epoch
/// selects the per-document RNG streams.
double negative_sampling_loss(const EmbeddingModel& model, std::span<const float> output_matrix,
                              const TokenizedCorpus& corpus, const TrainConfig& config,
                              std::size_t epoch = 0);

enum class StopReason { accuracy_budget, drift_converged, max_epochs };

std::string_view to_string(StopReason reason);

struct FineTuneConfig {
    double alpha = 0.3;        // analogy accuracy drop budget
    double beta = 0.001;       // drift convergence threshold
    std::size_t top_k = 1000;  // drift-tracked word count
    std::size_t max_epochs = 100;
    SemanticAxis drift_axis;   // empty vector: default sentiment axis over the reference

    void validate() const;
};

/// Stop rule shared by fine_tune and the scripted tests. Observing epoch e
/// stops on (acc_0 - acc_e >= alpha) first, then (delta_e < beta), then
/// e == max_epochs.
class FineTuneMonitor {
public:
    FineTuneMonitor(double alpha, double beta, std::size_t max_epochs, double acc_0);

    std::optional<StopReason> observe(std::size_t epoch, double accuracy, double delta);

private:
    double alpha_;
    double beta_;
    std::size_t max_epochs_;
    double acc_0_;
};

struct FineTuneEpoch {
    std::size_t epoch = 0;
    double loss = 0.0;
    double accuracy = 0.0;
    double delta = 0.0;
};

struct FineTuneReport {
    double acc_0 = 0.0;
    std::vector<FineTuneEpoch> epochs;
    std::vector<std::string> tracked_words;
    // trajectories[w][e]: drift-axis score of tracked word w after epoch e,
    // including the pre-fine-tune score at e=0
    std::vector<std::vector<double>> trajectories;
    std::size_t stop_epoch = 0;
    StopReason stop_reason = StopReason::max_epochs;

    std::string to_tsv() const; // epoch, loss, acc, delta
    std::string to_json() const;
};

/// Fine-tunes a copy of the reference on the target corpus one epoch at a
/// time, monitoring analogy accuracy and the mean absolute drift-axis score
/// change of the top_k most frequent in-vocab target-corpus words between
/// consecutive epochs. Returns the model at the stop epoch.
std::pair<EmbeddingModel, FineTuneReport>
fine_tune(const EmbeddingModel& reference, const TokenizedCorpus& target_corpus,
          const FineTuneConfig& cfg, const TrainConfig& train_cfg,
          const AnalogySet& analogy_set);

} // namespace semaxis
