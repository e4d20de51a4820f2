#include "asrfix/rerank.hpp"

#include "asrfix/errors.hpp"
#include "asrfix/text.hpp"

#include <algorithm>
#include <cmath>

namespace asrfix {

namespace detail {
std::atomic<size_t> fuzzy_scored_hypotheses{0};
} // namespace detail

void NBestList::validate() const {
    if (hypotheses.empty()) throw InvalidInput("n-best list is empty");
    if (hypotheses.size() > 5) throw InvalidInput("n-best list longer than 5");
    for (const auto& h : hypotheses)
        if (normalize_text(h).empty())
            throw InvalidInput("n-best list contains an empty hypothesis");
    if (!confidences.empty() && confidences.size() != hypotheses.size())
        throw InvalidInput("confidence count does not match hypothesis count");
}

std::string to_string(CorrectionMethod method) {
    switch (method) {
        case CorrectionMethod::Fuzzy: return "fuzzy";
        case CorrectionMethod::Semantic: return "semantic";
        case CorrectionMethod::Phonetic: return "phonetic";
    }
    return "fuzzy";
}

int fuzzy_ratio(const std::string& a, const std::string& b) {
    std::string na = normalize_text(a);
    std::string nb = normalize_text(b);
    if (na.empty() || nb.empty())
        throw InvalidInput("fuzzy_ratio on text that is empty after normalization");
    size_t max_len = std::max(na.size(), nb.size());
    double ratio = 1.0 - static_cast<double>(levenshtein(na, nb)) / static_cast<double>(max_len);
    return static_cast<int>(std::lround(100.0 * ratio));
}

RerankResult rerank_nbest(const NBestList& nbest, const std::vector<ContextEntry>& narrow,
                          const SearchIndex* index, const Embedder* embedder,
                          const RerankThresholds& thresholds,
                          std::vector<std::string>* diagnostics) {
    nbest.validate();

    // Phase A: fuzzy matching against the narrow context, best hypothesis
    // first, stop at the first hit.
    if (!narrow.empty()) {
        for (size_t h = 0; h < nbest.hypotheses.size(); ++h) {
            detail::fuzzy_scored_hypotheses.fetch_add(1, std::memory_order_relaxed);
            int best_score = -1;
            const ContextEntry* best_entry = nullptr;
            for (const auto& entry : narrow) {
                int score = fuzzy_ratio(nbest.hypotheses[h], entry.text);
                if (score > best_score) {
                    best_score = score;
                    best_entry = &entry;
                }
            }
            if (best_score >= thresholds.fuzzy_min) {
                if (h == 0)
                    return {RerankResult::Kind::NoCorrectionNeeded, "", "",
                            CorrectionMethod::Fuzzy, static_cast<double>(best_score), ""};
                return {RerankResult::Kind::Corrected, nbest.hypotheses[h],
                        best_entry->target(), CorrectionMethod::Fuzzy,
                        static_cast<double>(best_score), best_entry->text};
            }
        }
    }

    // Phase B: indexed search per hypothesis, score = largest cosine.
    if (!index || !embedder) return {};
    size_t winner = 0;
    double winner_score = -1.0;
    ScoredResult winner_result;
    try {
        for (size_t h = 0; h < nbest.hypotheses.size(); ++h) {
            auto results = index->search(*embedder, nbest.hypotheses[h],
                                         thresholds.cosine_min, 10);
            double score = results.empty() ? 0.0 : results.front().score;
            if (score > winner_score) { // ties keep the earlier ASR rank
                winner_score = score;
                winner = h;
                if (!results.empty()) winner_result = results.front();
            }
        }
    } catch (const RetrievalError& e) {
        if (!diagnostics) throw;
        diagnostics->push_back(std::string("semantic phase skipped: ") + e.what());
        return {};
    }
    if (winner_score < thresholds.cosine_min) return {};
    if (winner == 0)
        return {RerankResult::Kind::NoCorrectionNeeded, "", "", CorrectionMethod::Semantic,
                winner_score, winner_result.surface_form};
    return {RerankResult::Kind::Corrected, nbest.hypotheses[winner], winner_result.entry_id,
            CorrectionMethod::Semantic, winner_score, winner_result.surface_form};
}

} // namespace asrfix
