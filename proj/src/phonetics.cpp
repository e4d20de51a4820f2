#include "asrfix/phonetics.hpp"

#include <algorithm>

namespace asrfix {

namespace {

bool same_phoneme(const Phoneme& a, const Phoneme& b, bool strip_stress) {
    return strip_stress ? a.base() == b.base() : a.symbol == b.symbol;
}

} // namespace

LcsMatch lcs(const std::vector<Phoneme>& hyp, const std::vector<Phoneme>& cand,
             bool strip_stress) {
    const size_t m = hyp.size(), n = cand.size();
    std::vector<std::vector<uint32_t>> dp(m + 1, std::vector<uint32_t>(n + 1, 0));
    for (size_t i = 1; i <= m; ++i)
        for (size_t j = 1; j <= n; ++j)
            dp[i][j] = same_phoneme(hyp[i - 1], cand[j - 1], strip_stress)
                           ? dp[i - 1][j - 1] + 1
                           : std::max(dp[i - 1][j], dp[i][j - 1]);

    LcsMatch match;
    size_t i = m, j = n;
    while (i > 0 && j > 0) {
        if (same_phoneme(hyp[i - 1], cand[j - 1], strip_stress)) {
            match.pairs.emplace_back(i - 1, j - 1);
            --i, --j;
        } else if (dp[i - 1][j] >= dp[i][j - 1]) {
            --i; // tie-break: consume the hypothesis side first
        } else {
            --j;
        }
    }
    std::reverse(match.pairs.begin(), match.pairs.end());
    match.length = match.pairs.size();
    match.coverage = n == 0 ? 0.0 : static_cast<double>(match.length) / static_cast<double>(n);
    match.range_in_hyp =
        match.pairs.empty() ? 0 : match.pairs.back().first - match.pairs.front().first + 1;
    return match;
}

std::string rewrite(const PhonemePhrase& hyp, const PhonemePhrase& cand,
                    const std::vector<std::pair<size_t, size_t>>& pairs) {
    // token index for every phoneme index
    auto token_of = [](const PhonemePhrase& p, size_t phoneme_idx) {
        for (size_t t = 0; t < p.spans.size(); ++t)
            if (phoneme_idx >= p.spans[t].first && phoneme_idx < p.spans[t].second) return t;
        return p.spans.size();
    };

    std::vector<bool> hyp_covered(hyp.tokens.size(), false);
    for (const auto& [i, j] : pairs) hyp_covered[token_of(hyp, i)] = true;

    std::vector<bool> cand_claimed(cand.tokens.size(), false);
    std::vector<std::string> out;

    size_t t = 0;
    while (t < hyp.tokens.size()) {
        if (!hyp_covered[t]) {
            out.push_back(hyp.tokens[t]);
            ++t;
            continue;
        }
        size_t run_end = t;
        while (run_end < hyp.tokens.size() && hyp_covered[run_end]) ++run_end;
        size_t phon_begin = hyp.spans[t].first;
        size_t phon_end = hyp.spans[run_end - 1].second;

        // candidate tokens owning matched candidate phonemes inside this run
        std::vector<bool> wanted(cand.tokens.size(), false);
        for (const auto& [i, j] : pairs)
            if (i >= phon_begin && i < phon_end) wanted[token_of(cand, j)] = true;
        for (size_t ct = 0; ct < cand.tokens.size(); ++ct) {
            if (wanted[ct] && !cand_claimed[ct]) {
                out.push_back(cand.tokens[ct]);
                cand_claimed[ct] = true;
            }
        }
        t = run_end;
    }
    std::string result;
    for (size_t k = 0; k < out.size(); ++k) {
        if (k) result += ' ';
        result += out[k];
    }
    return result;
}

std::optional<RankedCorrection> rank_context(const PhonemePhrase& best_hyp,
                                             const std::vector<ContextCandidate>& candidates,
                                             const PhoneticThresholds& thresholds) {
    if (candidates.empty()) return std::nullopt;

    std::vector<LcsMatch> matches;
    matches.reserve(candidates.size());
    for (const auto& c : candidates)
        matches.push_back(lcs(best_hyp.phonemes, c.phrase.phonemes, thresholds.strip_stress));

    auto passes = [&](size_t idx) {
        const auto& m = matches[idx];
        const size_t cand_len = candidates[idx].phrase.phonemes.size();
        if (cand_len == 0) return false;
        double range_ratio =
            static_cast<double>(m.range_in_hyp) / static_cast<double>(cand_len);
        return m.coverage >= thresholds.min_coverage && range_ratio <= thresholds.range_ratio;
    };
    auto argmax = [&](auto key) {
        size_t best = 0;
        for (size_t k = 1; k < matches.size(); ++k)
            if (key(matches[k]) > key(matches[best])) best = k; // first in order wins ties
        return best;
    };

    size_t j = argmax([](const LcsMatch& m) { return static_cast<double>(m.length); });
    if (!passes(j)) {
        j = argmax([](const LcsMatch& m) { return m.coverage; });
        if (!passes(j)) return std::nullopt;
    }

    RankedCorrection result;
    result.candidate_index = j;
    result.candidate_text = candidates[j].text;
    result.task_id = candidates[j].task_id;
    result.match = matches[j];
    result.rewritten = rewrite(best_hyp, candidates[j].phrase, matches[j].pairs);
    return result;
}

} // namespace asrfix
