#include "semaxis/analogy.hpp"

#include <sstream>

#include "format.hpp"
#include "semaxis/kernels.hpp"

#include <nlohmann/json.hpp>

namespace semaxis {

std::size_t AnalogySet::total_questions() const {
    std::size_t n = 0;
    for (const auto& s : sections) n += s.questions.size();
    return n;
}

AnalogySet AnalogySet::load(const std::string& path) {
    AnalogySet set;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        auto tokens = split_whitespace(line);
        if (tokens.empty()) continue;
        if (tokens[0] == ":") {
            std::string name;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                if (i > 1) name += ' ';
                name += tokens[i];
            }
            set.sections.push_back({name.empty() ? "unnamed" : name, {}});
            continue;
        }
        if (tokens.size() != 4)
            throw InputError("analogy line " + std::to_string(lineno) + " in " + path +
                             " needs 4 tokens, got " + std::to_string(tokens.size()));
        if (set.sections.empty()) set.sections.push_back({"default", {}});
        set.sections.back().questions.push_back({tokens[0], tokens[1], tokens[2], tokens[3]});
    }
    if (set.total_questions() == 0) throw InputError("no analogy questions in " + path);
    return set;
}

AnalogySolver::AnalogySolver(const EmbeddingModel& model) : model_(model) {
    const std::size_t n = model.size();
    const std::size_t d = model.dim();
    unit_matrix_.resize(n * d, 0.0f);
    unit_norms_.assign(n, 1.0);
    const auto& m = model.matrix();
    for (std::size_t i = 0; i < n; ++i) {
        const double norm = model.norm(static_cast<uint32_t>(i));
        if (norm == 0.0) continue;
        const double inv = 1.0 / norm;
        for (std::size_t j = 0; j < d; ++j)
            unit_matrix_[i * d + j] = static_cast<float>(m[i * d + j] * inv);
    }
}

uint32_t AnalogySolver::query(uint32_t a, uint32_t b, uint32_t c) const {
    const std::size_t n = model_.size();
    const std::size_t d = model_.dim();
    std::vector<double> target(d);
    for (std::size_t j = 0; j < d; ++j)
        target[j] = static_cast<double>(unit_matrix_[b * d + j]) - unit_matrix_[a * d + j] +
                    unit_matrix_[c * d + j];

    std::vector<double> scores(n);
    kernels::cosine_scan(unit_matrix_.data(), n, d, target, 1.0, unit_norms_, scores.data());

    std::vector<std::uint8_t> mask(n, 0);
    mask[a] = mask[b] = mask[c] = 1;
    auto top = kernels::top_k_indices(scores, 1, mask);
    if (top.empty()) throw PipelineError("vocabulary too small for analogy query");
    return top[0];
}

AnalogyReport evaluate_analogies(const EmbeddingModel& model, const AnalogySet& set) {
    if (set.total_questions() == 0) throw InputError("empty analogy set");
    AnalogySolver solver(model);
    const auto& vocab = model.vocab();

    AnalogyReport report;
    for (const auto& section : set.sections) {
        AnalogyReport::SectionResult res;
        res.name = section.name;
        for (const auto& q : section.questions) {
            auto ia = vocab.find(q[0]);
            auto ib = vocab.find(q[1]);
            auto ic = vocab.find(q[2]);
            auto id = vocab.find(q[3]);
            if (!ia || !ib || !ic || !id) {
                ++res.skipped;
                continue;
            }
            ++res.answered;
            if (solver.query(*ia, *ib, *ic) == *id) ++res.correct;
        }
        res.accuracy = res.answered ? static_cast<double>(res.correct) / res.answered : 0.0;
        report.answered += res.answered;
        report.skipped += res.skipped;
        report.correct += res.correct;
        report.sections.push_back(std::move(res));
    }
    report.total_accuracy =
        report.answered ? static_cast<double>(report.correct) / report.answered : 0.0;
    return report;
}

std::string AnalogyReport::to_tsv() const {
    std::ostringstream out;
    out << "section\taccuracy\tanswered\tskipped\tcorrect\n";
    for (const auto& s : sections)
        out << s.name << '\t' << detail::fmt_fixed(s.accuracy, 4) << '\t' << s.answered << '\t'
            << s.skipped << '\t' << s.correct << '\n';
    out << "TOTAL\t" << detail::fmt_fixed(total_accuracy, 4) << '\t' << answered << '\t' << skipped
        << '\t' << correct << '\n';
    return out.str();
}

std::string AnalogyReport::to_json() const {
    nlohmann::json j;
    j["total_accuracy"] = total_accuracy;
    j["answered"] = answered;
    j["skipped"] = skipped;
    j["correct"] = correct;
    j["sections"] = nlohmann::json::array();
    for (const auto& s : sections)
        j["sections"].push_back({{"name", s.name},
                                 {"accuracy", s.accuracy},
                                 {"answered", s.answered},
                                 {"skipped", s.skipped},
                                 {"correct", s.correct}});
    return j.dump(2);
}

} // namespace semaxis
