#pragma once

#include "asrfix/g2p.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace asrfix {

/// One longest common subsequence between a hypothesis and a candidate
/// phoneme sequence, plus the statistics the ranker tests.
struct LcsMatch {
    /// (i into hypothesis phonemes, j into candidate phonemes), strictly
    /// increasing in both coordinates.
    std::vector<std::pair<size_t, size_t>> pairs;
    size_t length = 0;
    /// length / |candidate phonemes|, 0 when the candidate is empty.
    double coverage = 0.0;
    /// last i - first i + 1 in hypothesis phonemes, 0 when length is 0.
    size_t range_in_hyp = 0;
};

struct PhoneticThresholds {
    double alpha = 0.5;        // index-search similarity cutoff
    double range_ratio = 1.5;  // max range_in_hyp / candidate phoneme count
    double min_coverage = 0.8;
    bool strip_stress = false; // compare vowels without stress digits
};

/// Phoneme LCS with deterministic reconstruction: backtrack from the end of
/// the DP table, preferring the hypothesis-side move on ties, which keeps the
/// matched pairs leftmost in the hypothesis.
LcsMatch lcs(const std::vector<Phoneme>& hyp, const std::vector<Phoneme>& cand,
             bool strip_stress = false);

struct ContextCandidate {
    std::string text;
    PhonemePhrase phrase;
    std::string task_id; // canonical target, may be empty for plain options
};

struct RankedCorrection {
    size_t candidate_index = 0;
    std::string candidate_text;
    std::string task_id;
    std::string rewritten;
    LcsMatch match;
};

/// Pick the candidate with the longest phoneme LCS against the hypothesis
/// (ties go to presentation order); accept it when its coverage and range
/// pass the thresholds, otherwise retry with the highest-coverage candidate.
/// Returns the accepted candidate and the spliced hypothesis, or nullopt.
std::optional<RankedCorrection> rank_context(const PhonemePhrase& best_hyp,
                                             const std::vector<ContextCandidate>& candidates,
                                             const PhoneticThresholds& thresholds);

/// Token-level splice: hypothesis tokens with at least one matched phoneme
/// are covered; each maximal run of covered tokens is replaced by the
/// candidate tokens that own the run's matched candidate phonemes (first run
/// to claim a candidate token keeps it); uncovered tokens stay verbatim.
std::string rewrite(const PhonemePhrase& hyp, const PhonemePhrase& cand,
                    const std::vector<std::pair<size_t, size_t>>& pairs);

} // namespace asrfix
