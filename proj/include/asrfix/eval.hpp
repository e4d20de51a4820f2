#pragma once

#include "asrfix/dialogue.hpp"
#include "asrfix/g2p.hpp"
#include "asrfix/pipeline.hpp"
#include "asrfix/rerank.hpp"
#include "asrfix/retrieval.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace asrfix {

/// One annotated evaluation turn: the ASR n-best, the gold transcript and
/// target, the dialogue snapshot the turn happened in.
struct AnnotatedTurn {
    NBestList nbest;
    std::string gold_transcript;
    std::string gold_target; // canonical task/option id, may be empty
    std::string intent_label; // "search", "select", or other
    DialogueSnapshot snapshot;
    bool has_error = false;  // best hypothesis != gold after normalization
};

/// Line-delimited JSON, one turn per line.
std::vector<AnnotatedTurn> load_corpus(std::istream& in);
std::vector<AnnotatedTurn> load_corpus_file(const std::string& path);
void save_corpus(const std::vector<AnnotatedTurn>& corpus, std::ostream& out);

enum class Judgement { TP, FP, FN, TN };

/// How a wrong correction proposed on an error turn is booked.
enum class FprConvention {
    WrongCorrectionIsFp, // default: any proposed-but-wrong correction is FP
    WrongCorrectionIsFn, // alternate: wrong correction on an error turn is FN
};

/// A proposed correction is correct when its text normalizes to the gold
/// transcript or its target equals the gold target.
Judgement judge(const CorrectionOutcome& outcome, const AnnotatedTurn& turn,
                FprConvention convention = FprConvention::WrongCorrectionIsFp);

/// Word error rate: word-level edit distance over reference length. Throws
/// InvalidInput when the reference is empty after tokenization.
double wer(const std::string& hypothesis, const std::string& reference);

struct ConfusionCounts {
    size_t tp = 0, fp = 0, fn = 0, tn = 0;
    size_t total() const { return tp + fp + fn + tn; }
};

struct MetricsRow {
    ConfusionCounts counts;
    std::optional<double> precision; // nullopt when the denominator is 0
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> fpr;
};

MetricsRow metrics_from_counts(const ConfusionCounts& counts);

struct WerStats {
    double mean = 0.0;
    double stdev = 0.0;
};

struct MetricsReport {
    size_t corpus_size = 0;
    MetricsRow search;
    MetricsRow selection;
    MetricsRow combined;
    WerStats wer_none;   // best hypothesis as-is
    WerStats wer_engine; // engine output text
};

/// Run the given correction function over every turn, judge, and aggregate.
MetricsReport evaluate(const std::vector<AnnotatedTurn>& corpus,
                       const std::function<CorrectionOutcome(const AnnotatedTurn&)>& correct_fn,
                       FprConvention convention = FprConvention::WrongCorrectionIsFp);

/// Deterministic JSON serialization (byte-identical across runs) and the
/// aligned Prec/Rec/F1/FPR table.
std::string report_to_json(const MetricsReport& report);
std::string report_to_table(const MetricsReport& report);

struct NoiseConfig {
    double corruption_prob = 0.3; // per-token
    size_t nbest_size = 5;
    bool gold_in_nbest = false;   // exactly one hypothesis equals gold
};

struct InjectedNBest {
    NBestList nbest;
    bool gold_present = false;
};

/// Deterministically corrupt a gold transcript into an n-best list: each
/// token flips with corruption_prob to a lexicon word sharing its initial
/// phoneme (spelling perturbation when none exists); alternates are fresh
/// corruptions of the gold.
InjectedNBest inject_errors(const std::string& gold, const Lexicon& lexicon,
                            const NoiseConfig& config, uint64_t seed);

struct CorpusGenConfig {
    size_t turns = 200;
    double error_rate = 0.5;         // fraction of turns that get corrupted
    double select_fraction = 0.5;    // remaining turns use the search intent
    double gold_in_nbest_fraction = 0.5; // of the error turns
    NoiseConfig noise;
};

/// Seeded synthetic corpus over a task catalog: search turns start from a
/// task title with no narrow context, selection turns present three options
/// including the gold one.
std::vector<AnnotatedTurn> generate_corpus(const TaskCatalog& catalog, const Lexicon& lexicon,
                                           const CorpusGenConfig& config, uint64_t seed);

} // namespace asrfix
