// End-to-end checks of the command-line binary, shelled out via std::system.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string data_path(const std::string& name) {
    return std::string(ASRFIX_DATA_DIR) + "/" + name;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

RunResult run(const std::string& args, const std::string& stdin_text = "") {
    const std::string out_path = "/tmp/asrfix_cli_stdout";
    const std::string err_path = "/tmp/asrfix_cli_stderr";
    std::string command = std::string(ASRFIX_CLI_PATH) + " " + args;
    if (!stdin_text.empty()) {
        std::ofstream("/tmp/asrfix_cli_stdin") << stdin_text;
        command += " < /tmp/asrfix_cli_stdin";
    }
    command += " > " + out_path + " 2> " + err_path;
    int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

const std::string kIndexPath = "/tmp/asrfix_cli_index.bin";

void ensure_index() {
    static bool built = false;
    if (built) return;
    auto result = run("build-index --catalog " + data_path("catalog.jsonl") + " --out " +
                      kIndexPath);
    REQUIRE(result.exit_code == 0);
    built = true;
}

} // namespace

TEST_CASE("build-index writes an index and reports its shape") {
    std::remove(kIndexPath.c_str());
    auto result = run("build-index --catalog " + data_path("catalog.jsonl") + " --out " +
                      kIndexPath);
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("entries: 50") != std::string::npos);
    CHECK(!slurp(kIndexPath).empty());
}

TEST_CASE("build-index is byte-deterministic") {
    ensure_index();
    std::string first = slurp(kIndexPath);
    auto result = run("build-index --catalog " + data_path("catalog.jsonl") +
                      " --out /tmp/asrfix_cli_index2.bin");
    CHECK(result.exit_code == 0);
    CHECK(slurp("/tmp/asrfix_cli_index2.bin") == first);
}

TEST_CASE("a missing catalog is an input error naming the path") {
    auto result = run("build-index --catalog /nonexistent/cat.jsonl --out /tmp/x.bin");
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("/nonexistent/cat.jsonl") != std::string::npos);
}

TEST_CASE("correct fixes the faucet n-best from flags") {
    ensure_index();
    auto result = run("correct --index " + kIndexPath + " --lexicon " +
                      data_path("lexicon.dict") + " --state searching --intent search" +
                      " --nbest \"how can i fix a leaky bathroom for sit\"");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("\"kind\": \"corrected\"") != std::string::npos);
    CHECK(result.out.find("how can i fix a leaky bathroom faucet") != std::string::npos);
    CHECK(result.out.find("\"target\": \"task-001\"") != std::string::npos);
}

TEST_CASE("correct reads the n-best from stdin when no flag is given") {
    ensure_index();
    auto result = run("correct --index " + kIndexPath + " --lexicon " +
                          data_path("lexicon.dict") + " --state searching --intent search",
                      R"({"nbest": ["cartoon electric guitar"]})");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("tune an electric guitar") != std::string::npos);
}

TEST_CASE("correct leaves an exact option alone") {
    ensure_index();
    auto result = run("correct --index " + kIndexPath + " --lexicon " +
                      data_path("lexicon.dict") +
                      " --state selecting --intent select"
                      " --option \"boil an egg\" --option \"grill a steak\""
                      " --nbest \"boil an egg\"");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("\"kind\": \"no-correction-needed\"") != std::string::npos);
}

TEST_CASE("eval reproduces the checked-in golden report byte for byte") {
    ensure_index();
    auto result = run("eval --corpus " + data_path("golden_corpus.jsonl") + " --index " +
                      kIndexPath + " --lexicon " + data_path("lexicon.dict") +
                      " --report /tmp/asrfix_cli_report.json");
    CHECK(result.exit_code == 0);
    CHECK(slurp("/tmp/asrfix_cli_report.json") ==
          slurp(data_path("golden_report.expected.json")));
    CHECK(result.out.find("combined") != std::string::npos);
}

TEST_CASE("the alternate FPR convention rebooks the wrong correction") {
    ensure_index();
    auto result = run("eval --corpus " + data_path("golden_corpus.jsonl") + " --index " +
                      kIndexPath + " --lexicon " + data_path("lexicon.dict") +
                      " --fpr-convention alternate --report /tmp/asrfix_cli_alt.json");
    CHECK(result.exit_code == 0);
    std::string report = slurp("/tmp/asrfix_cli_alt.json");
    CHECK(report != slurp(data_path("golden_report.expected.json")));
    // the single wrong correction moves from FP to FN in the combined row
    CHECK(report.find("\"fp\": 1") == std::string::npos);
    CHECK(report.find("\"fn\": 4") != std::string::npos);
}

TEST_CASE("an unknown FPR convention is an input error") {
    ensure_index();
    auto result = run("eval --corpus " + data_path("golden_corpus.jsonl") + " --index " +
                      kIndexPath + " --lexicon " + data_path("lexicon.dict") +
                      " --fpr-convention sideways");
    CHECK(result.exit_code == 2);
}

TEST_CASE("an empty corpus is an input error") {
    ensure_index();
    std::ofstream("/tmp/asrfix_cli_empty.jsonl").close();
    auto result = run("eval --corpus /tmp/asrfix_cli_empty.jsonl --index " + kIndexPath +
                      " --lexicon " + data_path("lexicon.dict"));
    CHECK(result.exit_code == 2);
}

TEST_CASE("gen-corpus writes the requested number of turns") {
    auto result = run("gen-corpus --catalog " + data_path("catalog.jsonl") + " --lexicon " +
                      data_path("lexicon.dict") +
                      " --out /tmp/asrfix_cli_corpus.jsonl --turns 20");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("(20 turns)") != std::string::npos);
    std::ifstream in("/tmp/asrfix_cli_corpus.jsonl");
    size_t lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 20);
}

TEST_CASE("augment attaches generated variations from the table") {
    auto result = run("augment --catalog " + data_path("catalog.jsonl") + " --out " +
                      "/tmp/asrfix_cli_augmented.jsonl --generator-table " +
                      data_path("variations.tsv") + " --public /dev/null -k 2");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("augmented catalog written") != std::string::npos);
    CHECK(!slurp("/tmp/asrfix_cli_augmented.jsonl").empty());
}
