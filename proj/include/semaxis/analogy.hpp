#pragma once

#include <array>
#include <string>
#include <vector>

#include "semaxis/embedding.hpp"

namespace semaxis {

/// Sectioned analogy questions: lines ": <name>" open a section, other
/// non-empty lines carry 4 whitespace-separated tokens meaning a:b :: c:d.
struct AnalogySet {
    struct Section {
        std::string name;
        std::vector<std::array<std::string, 4>> questions;
    };
    std::vector<Section> sections;

    std::size_t total_questions() const;
    static AnalogySet load(const std::string& path);
};

struct AnalogyReport {
    struct SectionResult {
        std::string name;
        double accuracy = 0.0; // over answered questions
        std::size_t answered = 0;
        std::size_t skipped = 0;
        std::size_t correct = 0;
    };
    std::vector<SectionResult> sections;
    double total_accuracy = 0.0;
    std::size_t answered = 0;
    std::size_t skipped = 0;
    std::size_t correct = 0;

    std::string to_tsv() const;
    std::string to_json() const;
};

/// Shares one unit-normalized copy of the matrix across many analogy
/// queries.
class AnalogySolver {
public:
    explicit AnalogySolver(const EmbeddingModel& model);

    /// Vocabulary index of the offset-rule answer, excluding the three
    /// inputs. Ties break by ascending index.
    uint32_t query(uint32_t a, uint32_t b, uint32_t c) const;

private:
    const EmbeddingModel& model_;
    std::vector<float> unit_matrix_;
    std::vector<double> unit_norms_; // all ones; zero rows stay zero vectors
};

/// Questions with any out-of-vocabulary token are counted as skipped;
/// accuracies are over answered questions. Throws on an empty set.
AnalogyReport evaluate_analogies(const EmbeddingModel& model, const AnalogySet& set);

} // namespace semaxis
