#pragma once

#include "asrfix/dialogue.hpp"
#include "asrfix/g2p.hpp"
#include "asrfix/phonetics.hpp"
#include "asrfix/rerank.hpp"
#include "asrfix/retrieval.hpp"

#include <string>
#include <vector>

namespace asrfix {

enum class OutcomeKind { NoTrigger, NoCorrectionNeeded, Corrected };

std::string to_string(OutcomeKind kind);

struct CorrectionOutcome {
    OutcomeKind kind = OutcomeKind::NoTrigger;
    std::string corrected_text;    // kind == Corrected
    std::string target;            // canonical task id or option, may be empty
    CorrectionMethod method = CorrectionMethod::Fuzzy;
    double score = 0.0;
    std::string prompt;            // "Did you mean <corrected_text>?"
    std::string matched_entry;     // traceability: the context entry that won
    std::vector<std::string> diagnostics;
};

struct PipelineConfig {
    RerankThresholds rerank;    // fuzzy 96, cosine 0.8
    PhoneticThresholds phonetic; // alpha 0.5, range 1.5, coverage 0.8
    size_t broad_search_k = 10;
    /// Narrow contexts larger than this are pre-filtered through the index
    /// at alpha before phoneme ranking; smaller ones are ranked exhaustively.
    size_t narrow_prefilter_limit = 50;
};

/// Full correction pass for one turn: trigger check, n-best re-ranking
/// against the narrow context, phoneme-LCS context ranking, then one
/// broad-context fallback over the task index. Retrieval failures skip the
/// semantic phases and are recorded in the outcome's diagnostics.
CorrectionOutcome correct(const NBestList& nbest, const DialogueSnapshot& snapshot,
                          const Intent& intent, const SearchIndex* index,
                          const Embedder* embedder, const Lexicon& lexicon,
                          const PipelineConfig& config);

/// One session-trace line (line-delimited JSON): state, n-best, intent,
/// narrow context and outcome for a turn.
std::string trace_turn_json(const DialogueSnapshot& snapshot, const NBestList& nbest,
                            const Intent& intent, const std::vector<ContextEntry>& narrow,
                            const CorrectionOutcome& outcome);

} // namespace asrfix
