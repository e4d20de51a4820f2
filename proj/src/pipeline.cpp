#include "asrfix/pipeline.hpp"

#include "asrfix/errors.hpp"
#include "asrfix/text.hpp"

#include "json.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace asrfix {

std::string to_string(OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::NoTrigger: return "no-trigger";
        case OutcomeKind::NoCorrectionNeeded: return "no-correction-needed";
        case OutcomeKind::Corrected: return "corrected";
    }
    return "no-trigger";
}

namespace {

CorrectionOutcome corrected_outcome(std::string text, std::string target,
                                    CorrectionMethod method, double score,
                                    std::string matched_entry) {
    CorrectionOutcome outcome;
    outcome.kind = OutcomeKind::Corrected;
    outcome.corrected_text = std::move(text);
    outcome.target = std::move(target);
    outcome.method = method;
    outcome.score = score;
    outcome.matched_entry = std::move(matched_entry);
    outcome.prompt = "Did you mean " + outcome.corrected_text + "?";
    return outcome;
}

// Re-ranking followed by phoneme ranking against one context; nullopt when
// neither stage is decisive.
std::optional<CorrectionOutcome> run_rankers(const NBestList& nbest,
                                             const std::vector<ContextEntry>& context,
                                             const SearchIndex* index,
                                             const Embedder* embedder, const Lexicon& lexicon,
                                             const PipelineConfig& config,
                                             std::vector<std::string>& diagnostics) {
    RerankResult reranked =
        rerank_nbest(nbest, context, index, embedder, config.rerank, &diagnostics);
    if (reranked.kind == RerankResult::Kind::NoCorrectionNeeded) {
        CorrectionOutcome outcome;
        outcome.kind = OutcomeKind::NoCorrectionNeeded;
        outcome.method = reranked.method;
        outcome.score = reranked.score;
        outcome.matched_entry = reranked.matched_entry;
        return outcome;
    }
    if (reranked.kind == RerankResult::Kind::Corrected)
        return corrected_outcome(reranked.text, reranked.target, reranked.method,
                                 reranked.score, reranked.matched_entry);

    if (context.empty()) return std::nullopt;

    // phoneme ranking of the context against the best hypothesis
    std::vector<ContextEntry> pool = context;
    if (pool.size() > config.narrow_prefilter_limit && index && embedder) {
        try {
            auto hits = index->search(*embedder, nbest.hypotheses.front(),
                                      config.phonetic.alpha, pool.size());
            std::set<std::string> allowed;
            for (const auto& hit : hits) allowed.insert(normalize_text(hit.surface_form));
            std::vector<ContextEntry> filtered;
            for (const auto& e : pool)
                if (allowed.count(normalize_text(e.text))) filtered.push_back(e);
            if (!filtered.empty()) pool = std::move(filtered);
        } catch (const RetrievalError& e) {
            diagnostics.push_back(std::string("narrow pre-filter skipped: ") + e.what());
        }
    }

    PhonemePhrase best_hyp = phonemize_phrase(lexicon, nbest.hypotheses.front());
    std::vector<ContextCandidate> candidates;
    candidates.reserve(pool.size());
    for (const auto& e : pool)
        candidates.push_back({e.text, phonemize_phrase(lexicon, e.text), e.target()});

    auto ranked = rank_context(best_hyp, candidates, config.phonetic);
    if (!ranked) return std::nullopt;
    if (ranked->rewritten == normalize_text(nbest.hypotheses.front())) {
        CorrectionOutcome outcome; // the splice reproduced the hypothesis
        outcome.kind = OutcomeKind::NoCorrectionNeeded;
        outcome.method = CorrectionMethod::Phonetic;
        outcome.score = ranked->match.coverage;
        outcome.matched_entry = ranked->candidate_text;
        return outcome;
    }
    return corrected_outcome(ranked->rewritten, ranked->task_id, CorrectionMethod::Phonetic,
                             ranked->match.coverage, ranked->candidate_text);
}

} // namespace

CorrectionOutcome correct(const NBestList& nbest, const DialogueSnapshot& snapshot,
                          const Intent& intent, const SearchIndex* index,
                          const Embedder* embedder, const Lexicon& lexicon,
                          const PipelineConfig& config) {
    nbest.validate();

    CorrectionOutcome outcome;
    if (!should_trigger(snapshot, intent)) {
        outcome.kind = OutcomeKind::NoTrigger;
        return outcome;
    }

    std::vector<std::string> diagnostics;
    std::vector<ContextEntry> narrow = derive_narrow_context(snapshot);

    if (auto decisive =
            run_rankers(nbest, narrow, index, embedder, lexicon, config, diagnostics)) {
        decisive->diagnostics = std::move(diagnostics);
        return *decisive;
    }

    // broad-context fallback, at most once per turn
    if (index && embedder) {
        std::vector<ContextEntry> broad;
        std::set<std::string> seen;
        try {
            for (const auto& hyp : nbest.hypotheses) {
                for (const auto& hit :
                     index->search(*embedder, hyp, config.phonetic.alpha,
                                   config.broad_search_k)) {
                    if (!seen.insert(normalize_text(hit.surface_form)).second) continue;
                    broad.push_back({hit.surface_form, hit.surface_form, hit.entry_id});
                }
            }
        } catch (const RetrievalError& e) {
            diagnostics.push_back(std::string("broad fallback skipped: ") + e.what());
            broad.clear();
        }
        if (!broad.empty()) {
            if (auto decisive =
                    run_rankers(nbest, broad, index, embedder, lexicon, config, diagnostics)) {
                decisive->diagnostics = std::move(diagnostics);
                return *decisive;
            }
        }
    }

    outcome.kind = OutcomeKind::NoCorrectionNeeded;
    outcome.diagnostics = std::move(diagnostics);
    return outcome;
}

std::string trace_turn_json(const DialogueSnapshot& snapshot, const NBestList& nbest,
                            const Intent& intent, const std::vector<ContextEntry>& narrow,
                            const CorrectionOutcome& outcome) {
    nlohmann::ordered_json record;
    record["state"] = to_string(snapshot.state);
    record["nbest"] = nbest.hypotheses;
    record["intent"] = to_string(intent.label);
    nlohmann::ordered_json context = nlohmann::ordered_json::array();
    for (const auto& e : narrow)
        context.push_back({{"text", e.text}, {"resolve_to", e.resolve_to}});
    record["narrow_context"] = context;
    nlohmann::ordered_json out;
    out["kind"] = to_string(outcome.kind);
    if (outcome.kind == OutcomeKind::Corrected) {
        out["corrected_text"] = outcome.corrected_text;
        out["target"] = outcome.target;
        out["method"] = to_string(outcome.method);
        out["score"] = outcome.score;
        out["prompt"] = outcome.prompt;
    }
    record["outcome"] = out;
    return record.dump();
}

} // namespace asrfix
