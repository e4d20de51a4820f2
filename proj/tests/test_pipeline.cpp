#include "asrfix/errors.hpp"
#include "asrfix/pipeline.hpp"

#include "doctest.h"
#include "test_support.hpp"

using namespace asrfix;
using testsupport::data_path;
using testsupport::lexicon;

namespace {

struct PipelineFixture {
    TrigramEmbedder embedder{256};
    SearchIndex index;
    PipelineFixture() {
        index = SearchIndex::build(load_catalog_file(data_path("catalog.jsonl")), embedder);
    }

    CorrectionOutcome run(const NBestList& nbest, const DialogueSnapshot& snapshot,
                          IntentLabel label = IntentLabel::Search) {
        return correct(nbest, snapshot, {label, 0.8}, &index, &embedder, lexicon(), {});
    }
};

NBestList nbest(std::initializer_list<const char*> hyps) {
    NBestList out;
    for (const char* h : hyps) out.hypotheses.emplace_back(h);
    return out;
}

struct DeadEmbedder : Embedder {
    size_t dim() const override { return 256; }
    std::vector<float> embed(const std::string&) const override {
        throw RetrievalError("embedding service unreachable");
    }
};

} // namespace

TEST_CASE("faucet n-best is corrected phonetically through the broad fallback") {
    PipelineFixture fx;
    DialogueSnapshot searching;
    searching.state = DialogueState::Searching;
    auto outcome = fx.run(nbest({"how can i fix a leaky bathroom for sit"}), searching);
    CHECK(outcome.kind == OutcomeKind::Corrected);
    CHECK(outcome.corrected_text == "how can i fix a leaky bathroom faucet");
    CHECK(outcome.target == "task-001");
    CHECK(outcome.method == CorrectionMethod::Phonetic);
    CHECK(outcome.prompt == "Did you mean how can i fix a leaky bathroom faucet?");
}

TEST_CASE("cartoon n-best resolves to the guitar task") {
    PipelineFixture fx;
    DialogueSnapshot searching;
    searching.state = DialogueState::Searching;
    auto outcome = fx.run(nbest({"cartoon electric guitar"}), searching);
    CHECK(outcome.kind == OutcomeKind::Corrected);
    CHECK(outcome.corrected_text == "tune an electric guitar");
    CHECK(outcome.target == "task-003");
}

TEST_CASE("a command matching the narrow vocabulary is left alone") {
    PipelineFixture fx;
    DialogueSnapshot executing;
    executing.state = DialogueState::Executing;
    executing.active_task = "task-009";
    auto outcome =
        fx.run(nbest({"start another task", "star another ask"}), executing,
               IntentLabel::Command);
    CHECK(outcome.kind == OutcomeKind::NoCorrectionNeeded);
    CHECK(outcome.method == CorrectionMethod::Fuzzy);
}

TEST_CASE("no trigger in Ended state") {
    PipelineFixture fx;
    DialogueSnapshot ended;
    ended.state = DialogueState::Ended;
    auto outcome = fx.run(nbest({"how can i fix a leaky bathroom for sit"}), ended);
    CHECK(outcome.kind == OutcomeKind::NoTrigger);
}

TEST_CASE("nothing above thresholds means no correction needed") {
    PipelineFixture fx;
    DialogueSnapshot searching;
    searching.state = DialogueState::Searching;
    auto outcome = fx.run(nbest({"zzz qqq xxx"}), searching);
    CHECK(outcome.kind == OutcomeKind::NoCorrectionNeeded);
}

TEST_CASE("a misheard ordinal is corrected phonetically and resolves to its option") {
    PipelineFixture fx;
    DialogueSnapshot selecting;
    selecting.state = DialogueState::Selecting;
    selecting.presented_options = {"how to water indoor plants", "how to boil an egg"};
    auto outcome = fx.run(nbest({"option to"}), selecting, IntentLabel::Select);
    CHECK(outcome.kind == OutcomeKind::Corrected);
    CHECK(outcome.corrected_text == "option two");
    CHECK(outcome.target == "how to boil an egg");
    CHECK(outcome.method == CorrectionMethod::Phonetic);
}

TEST_CASE("a splice that reproduces the hypothesis is reported as no correction needed") {
    PipelineFixture fx;
    DialogueSnapshot selecting;
    selecting.state = DialogueState::Selecting;
    selecting.presented_options = {"cook rice on the stove", "grill a steak"};
    auto outcome = fx.run(nbest({"cook rice on the stove"}), selecting, IntentLabel::Select);
    CHECK(outcome.kind == OutcomeKind::NoCorrectionNeeded);
}

TEST_CASE("retrieval failure degrades to diagnostics instead of crashing") {
    PipelineFixture fx;
    DeadEmbedder dead;
    DialogueSnapshot searching;
    searching.state = DialogueState::Searching;
    auto outcome = correct(nbest({"how can i fix a leaky bathroom for sit"}), searching,
                           {IntentLabel::Search, 0.8}, &fx.index, &dead, lexicon(), {});
    CHECK(outcome.kind == OutcomeKind::NoCorrectionNeeded);
    REQUIRE(!outcome.diagnostics.empty());
    CHECK(outcome.diagnostics.front().find("unreachable") != std::string::npos);
}

TEST_CASE("pipeline without index or embedder still handles narrow context") {
    DialogueSnapshot selecting;
    selecting.state = DialogueState::Selecting;
    selecting.presented_options = {"boil an egg", "make pancakes"};
    auto outcome = correct(nbest({"boil an egg"}), selecting, {IntentLabel::Select, 0.8},
                           nullptr, nullptr, lexicon(), {});
    CHECK(outcome.kind == OutcomeKind::NoCorrectionNeeded);
}

TEST_CASE("invalid n-best is rejected up front") {
    DialogueSnapshot searching;
    searching.state = DialogueState::Searching;
    CHECK_THROWS_AS(correct(NBestList{}, searching, {IntentLabel::Search, 0.8}, nullptr,
                            nullptr, lexicon(), {}),
                    InvalidInput);
}

TEST_CASE("trace line is one JSON object with the turn's fields") {
    PipelineFixture fx;
    DialogueSnapshot searching;
    searching.state = DialogueState::Searching;
    auto list = nbest({"cartoon electric guitar"});
    auto outcome = fx.run(list, searching);
    std::string line = trace_turn_json(searching, list, {IntentLabel::Search, 0.8},
                                       derive_narrow_context(searching), outcome);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(line.find("\"state\":\"searching\"") != std::string::npos);
    CHECK(line.find("cartoon electric guitar") != std::string::npos);
    CHECK(line.find("\"kind\":\"corrected\"") != std::string::npos);
}

TEST_CASE("outcome kinds have stable names") {
    CHECK(to_string(OutcomeKind::NoTrigger) == "no-trigger");
    CHECK(to_string(OutcomeKind::NoCorrectionNeeded) == "no-correction-needed");
    CHECK(to_string(OutcomeKind::Corrected) == "corrected");
}
