#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "semaxis/axis.hpp"
#include "semaxis/corpus.hpp"

using testutil::fixture;
using testutil::run_command;
using testutil::write_temp;

namespace {

const std::string kCli = SEMAXIS_CLI_PATH;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("cli analogy reports per-section and total accuracy") {
    auto result = run_command(kCli + " analogy --model " + fixture("analogy_model.txt") +
                              " --questions " + fixture("analogy_plural.txt"));
    CHECK(result.exit_code == 0);
    CHECK(result.output.rfind("section\taccuracy\tanswered\tskipped\tcorrect\n", 0) == 0);
    CHECK(result.output.find("TOTAL\t1.0000\t10\t0\t10\n") != std::string::npos);

    auto json = run_command(kCli + " analogy --model " + fixture("analogy_model.txt") +
                            " --questions " + fixture("analogy_plural.txt") + " --json");
    CHECK(json.exit_code == 0);
    auto j = nlohmann::json::parse(json.output);
    CHECK(j["total_accuracy"] == 1.0);
    CHECK(j["answered"] == 10);
}

TEST_CASE("cli score ranks words on an inline axis") {
    const std::string words = write_temp("cli_words.txt", "good bad great awful\n");
    auto result = run_command(kCli + " score --model " + fixture("planted_model.txt") +
                              " --axis bad:good --words " + words);
    CHECK(result.exit_code == 0);
    auto lines = lines_of(result.output);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "token\tscore");
    CHECK(lines[1].rfind("good\t", 0) == 0);  // highest score first
    CHECK(lines[2].rfind("great\t", 0) == 0);
    CHECK(lines[3].rfind("awful\t", 0) == 0);
    CHECK(lines[4].rfind("bad\t", 0) == 0);

    SUBCASE("a label distribution adds the label column") {
        auto labeled = run_command(kCli + " score --model " + fixture("planted_model.txt") +
                                   " --axis bad:good --words " + words +
                                   " --dist 0.25,0.5,0.25");
        CHECK(labeled.exit_code == 0);
        auto rows = lines_of(labeled.output);
        REQUIRE(rows.size() == 5);
        CHECK(rows[0] == "token\tscore\tlabel");
        CHECK(rows[1].rfind("good\t", 0) == 0);
        CHECK(rows[1].find("\tpositive") != std::string::npos);
        CHECK(rows[2].find("\tneutral") != std::string::npos);
        CHECK(rows[3].find("\tneutral") != std::string::npos);
        CHECK(rows[4].find("\tnegative") != std::string::npos);
    }

    SUBCASE("scoring the whole vocabulary needs no word list") {
        auto all = run_command(kCli + " score --model " + fixture("planted_model.txt") +
                               " --axis bad:good --all --json");
        CHECK(all.exit_code == 0);
        auto j = nlohmann::json::parse(all.output);
        CHECK(j["axis"] == "bad->good");
        CHECK(j["entries"].size() == 90);
    }
}

TEST_CASE("cli train is byte-reproducible for a fixed seed") {
    std::ostringstream corpus;
    for (int i = 0; i < 10; ++i) {
        corpus << "sea wave boat fish salt sea\n";
        corpus << "code bug test loop byte code\n";
    }
    const std::string corpus_path = write_temp("cli_corpus.txt", corpus.str());

    const std::string args = " train --corpus " + corpus_path +
                             " --dim 8 --window 2 --min-count 1 --negatives 2 --subsample 0"
                             " --lr 0.05 --epochs 2 --seed 9 --output ";
    auto first = run_command(kCli + args + "/tmp/semaxis_cli_m1.txt --losses /tmp/semaxis_cli_l1.tsv");
    auto second = run_command(kCli + args + "/tmp/semaxis_cli_m2.txt");
    CHECK(first.exit_code == 0);
    CHECK(second.exit_code == 0);

    const std::string m1 = read_file("/tmp/semaxis_cli_m1.txt");
    CHECK_FALSE(m1.empty());
    CHECK(m1 == read_file("/tmp/semaxis_cli_m2.txt"));
    CHECK(m1.rfind("10 8\n", 0) == 0); // 10 distinct tokens, 8 dimensions
    CHECK(read_file("/tmp/semaxis_cli_l1.tsv").rfind("epoch\tloss\n1\t", 0) == 0);

    auto model = semaxis::load_embeddings("/tmp/semaxis_cli_m1.txt",
                                          semaxis::EmbeddingFormat::text);
    CHECK(model.size() == 10);
    CHECK(model.dim() == 8);
}

TEST_CASE("cli finetune writes the model and a json report") {
    const std::string corpus =
        write_temp("cli_ft_corpus.txt", "cat cats dog dogs\ntree trees bird birds\n");
    auto result = run_command(kCli + " finetune --ref " + fixture("analogy_model.txt") +
                              " --corpus " + corpus + " --analogies " +
                              fixture("analogy_plural.txt") +
                              " --output /tmp/semaxis_cli_ft.txt --report -" +
                              " --max-epochs 1 --lr 0.0001 --subsample 0 --no-extend" +
                              " --drift-axis cat:cats");
    CHECK(result.exit_code == 0);
    auto j = nlohmann::json::parse(result.output);
    CHECK(j["acc_0"] == 1.0);
    CHECK(j["stop_epoch"] == 1);
    CHECK(j["epochs"].size() == 1);

    auto model = semaxis::load_embeddings("/tmp/semaxis_cli_ft.txt",
                                          semaxis::EmbeddingFormat::text);
    CHECK(model.size() == 20); // --no-extend keeps the reference vocabulary
}

TEST_CASE("cli axes-build writes a catalog and a drop log") {
    auto result = run_command(kCli + " axes-build --model " + fixture("axis_model.txt") +
                              " --antonyms " + fixture("antonyms_50.tsv") + " --synonyms " +
                              fixture("synonyms.tsv") +
                              " --output /tmp/semaxis_cli_catalog.jsonl" +
                              " --drops /tmp/semaxis_cli_drops.tsv --threshold 0.4");
    CHECK(result.exit_code == 0);

    auto specs = semaxis::load_catalog_specs("/tmp/semaxis_cli_catalog.jsonl");
    CHECK(specs.size() == 43);

    const std::string drops = read_file("/tmp/semaxis_cli_drops.tsv");
    CHECK(drops.rfind("pos\tneg\treason\n", 0) == 0);
    CHECK(drops.find("5\t3\tcrowd_rejected\n") != std::string::npos);
    CHECK(drops.find("purposely\taccidentally\tredundant_axis\n") != std::string::npos);
}

TEST_CASE("cli eval and sweep run against a gold lexicon") {
    auto eval = run_command(kCli + " eval --model " + fixture("planted_model.txt") +
                            " --axis bad:good --gold " + fixture("gold_labels.tsv"));
    CHECK(eval.exit_code == 0);
    CHECK(eval.output.rfind("metric\tvalue\tn\n", 0) == 0);
    CHECK(eval.output.find("auc\t") != std::string::npos);
    CHECK(eval.output.find("coverage\t1.000000\t60\n") != std::string::npos);

    auto sweep = run_command(kCli + " sweep --model " + fixture("planted_model.txt") +
                             " --pos good,great --neg bad,awful --gold " +
                             fixture("gold_labels.tsv") + " --expand 6");
    CHECK(sweep.exit_code == 0);
    CHECK(sweep.output.rfind("pos\tneg\tmode\tauc\tn\n", 0) == 0);
    CHECK(sweep.output.find("# two_pole\tmean=") != std::string::npos);
    CHECK(sweep.output.find("# expanded\tmean=") != std::string::npos);
}

TEST_CASE("cli compare subcommands run end to end") {
    const std::string terms = write_temp("cli_terms.txt", "wheel road engine\n");
    auto topic = run_command(kCli + " compare-topic --model-a " + fixture("divergent_a.txt") +
                             " --model-b " + fixture("divergent_b.txt") +
                             " --axis cold:hot --terms " + terms);
    CHECK(topic.exit_code == 0);
    CHECK(topic.output.rfind("term\tscore_a\tscore_b\tdelta\n", 0) == 0);
    CHECK(topic.output.find("engine\t0.000000\t0.408248\t-0.408248\n") != std::string::npos);

    const std::string catalog = write_temp(
        "cli_catalog.jsonl",
        R"({"name":"cold->hot","pos_poles":["hot"],"neg_poles":["cold"],"model_id":"divergent"})"
        "\n"
        R"({"name":"slow->fast","pos_poles":["fast"],"neg_poles":["slow"],"model_id":"divergent"})"
        "\n");
    auto axes = run_command(kCli + " compare-axes --model-a " + fixture("divergent_a.txt") +
                            " --model-b " + fixture("divergent_b.txt") + " --word engine" +
                            " --catalog " + catalog + " --k 5 --json");
    CHECK(axes.exit_code == 0);
    auto j = nlohmann::json::parse(axes.output);
    CHECK(j["word"] == "engine");
    REQUIRE(j["bars"].size() == 2);
    CHECK(j["bars"][0]["axis"] == "cold->hot");

    auto expanded = run_command(kCli + " compare-topic --model-a " + fixture("topic_model.txt") +
                                " --model-b " + fixture("topic_model.txt") +
                                " --axis mountain:ocean --seed-word ocean --target-count 6");
    CHECK(expanded.exit_code == 0);
    CHECK(lines_of(expanded.output).size() == 7); // header + six topic terms
}

TEST_CASE("cli preprocess cleans raw text and counts tokens") {
    auto result = run_command(kCli + " preprocess --input " + fixture("raw_sample.txt") +
                              " --stopwords " + fixture("stopwords_en.txt") +
                              " --output /tmp/semaxis_cli_pre.txt" +
                              " --counts /tmp/semaxis_cli_counts.tsv");
    CHECK(result.exit_code == 0);
    const std::string cleaned = read_file("/tmp/semaxis_cli_pre.txt");
    CHECK_FALSE(cleaned.empty());
    // lowercased, punctuation stripped
    for (char c : cleaned) CHECK_FALSE(std::isupper(static_cast<unsigned char>(c)));

    auto counts = semaxis::load_counts("/tmp/semaxis_cli_counts.tsv");
    CHECK(counts.tokens > 0);
    CHECK_FALSE(counts.freq.empty());
}

TEST_CASE("cli rejects bad invocations with the parse exit code") {
    auto unknown = run_command(kCli + " score --bogus-flag 1");
    CHECK(unknown.exit_code == 2);

    auto missing_required = run_command(kCli + " train");
    CHECK(missing_required.exit_code == 2);

    auto no_subcommand = run_command(kCli);
    CHECK(no_subcommand.exit_code == 2);

    // readable invocation, unreadable input
    auto bad_input = run_command(kCli + " analogy --model /nonexistent/model.txt --questions " +
                                 fixture("analogy_plural.txt"));
    CHECK(bad_input.exit_code != 0);

    // inline axis spec validation happens before any model work
    auto bad_axis = run_command(kCli + " score --model " + fixture("planted_model.txt") +
                                " --axis nocolon --all");
    CHECK(bad_axis.exit_code == 2);
}
