#pragma once

#include "asrfix/context.hpp"
#include "asrfix/embedder.hpp"
#include "asrfix/retrieval.hpp"

#include <atomic>
#include <string>
#include <vector>

namespace asrfix {

/// Ordered ASR hypotheses for one turn, best first, 1-5 of them.
struct NBestList {
    std::vector<std::string> hypotheses;
    std::vector<double> confidences; // optional; empty or one per hypothesis

    /// Throws InvalidInput when empty, longer than 5, or holding empty texts.
    void validate() const;
};

struct RerankThresholds {
    int fuzzy_min = 96;      // integer percent
    double cosine_min = 0.8;
};

enum class CorrectionMethod { Fuzzy, Semantic, Phonetic };

std::string to_string(CorrectionMethod method);

struct RerankResult {
    enum class Kind { None, NoCorrectionNeeded, Corrected };
    Kind kind = Kind::None;
    std::string text;          // one of the input hypotheses (kind == Corrected)
    std::string target;        // resolved context target or task id
    CorrectionMethod method = CorrectionMethod::Fuzzy;
    double score = 0.0;
    std::string matched_entry; // context entry or surface form that matched
};

/// Normalized character-Levenshtein similarity as an integer percent:
/// round(100 * (1 - distance / max length)). Throws InvalidInput when either
/// side is empty after normalization.
int fuzzy_ratio(const std::string& a, const std::string& b);

/// Stage-1 correction. Phase A walks hypotheses best to worst and stops at
/// the first whose best fuzzy match against the narrow context reaches
/// fuzzy_min. Phase B searches the index per hypothesis, scores each by its
/// largest cosine, and picks the highest (earlier rank wins ties). Picking
/// the original best hypothesis means no correction was needed.
///
/// Retrieval failures in Phase B are recorded into diagnostics when a sink
/// is given (the phase is skipped), and propagated otherwise.
RerankResult rerank_nbest(const NBestList& nbest, const std::vector<ContextEntry>& narrow,
                          const SearchIndex* index, const Embedder* embedder,
                          const RerankThresholds& thresholds,
                          std::vector<std::string>* diagnostics = nullptr);

namespace detail {
// instrumentation for the Phase-A short-circuit property test
extern std::atomic<size_t> fuzzy_scored_hypotheses;
} // namespace detail

} // namespace asrfix
