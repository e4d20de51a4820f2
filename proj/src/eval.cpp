#include "asrfix/eval.hpp"

#include "asrfix/errors.hpp"
#include "asrfix/text.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace asrfix {

namespace {

nlohmann::ordered_json snapshot_to_json(const DialogueSnapshot& s) {
    nlohmann::ordered_json j;
    j["state"] = to_string(s.state);
    j["presented_options"] = s.presented_options;
    j["system_suggestions"] = s.system_suggestions;
    if (s.active_task)
        j["active_task"] = *s.active_task;
    else
        j["active_task"] = nullptr;
    j["pending_system_question"] = s.pending_system_question;
    j["command_vocabulary"] = s.command_vocabulary;
    return j;
}

DialogueSnapshot snapshot_from_json(const nlohmann::json& j) {
    DialogueSnapshot s;
    if (auto state = dialogue_state_from_string(j.at("state").get<std::string>()))
        s.state = *state;
    else
        throw ParseError("unknown dialogue state: " + j.at("state").get<std::string>());
    s.presented_options = j.value("presented_options", std::vector<std::string>{});
    s.system_suggestions = j.value("system_suggestions", std::vector<std::string>{});
    if (j.contains("active_task") && !j["active_task"].is_null())
        s.active_task = j["active_task"].get<std::string>();
    s.pending_system_question = j.value("pending_system_question", false);
    if (j.contains("command_vocabulary"))
        s.command_vocabulary = j["command_vocabulary"].get<std::vector<std::string>>();
    return s;
}

} // namespace

std::vector<AnnotatedTurn> load_corpus(std::istream& in) {
    std::vector<AnnotatedTurn> corpus;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad corpus record: ") + e.what(), lineno);
        }
        AnnotatedTurn turn;
        turn.nbest.hypotheses = j.at("nbest").get<std::vector<std::string>>();
        turn.gold_transcript = j.at("gold_transcript").get<std::string>();
        turn.gold_target = j.value("gold_target", std::string{});
        turn.intent_label = j.at("intent_label").get<std::string>();
        turn.snapshot = snapshot_from_json(j.at("snapshot"));
        turn.has_error = j.at("has_error").get<bool>();
        bool really_errored = normalize_text(turn.nbest.hypotheses.front()) !=
                              normalize_text(turn.gold_transcript);
        if (turn.has_error != really_errored)
            throw ParseError("has_error flag inconsistent with the texts", lineno);
        corpus.push_back(std::move(turn));
    }
    return corpus;
}

std::vector<AnnotatedTurn> load_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open corpus file: " + path);
    return load_corpus(in);
}

void save_corpus(const std::vector<AnnotatedTurn>& corpus, std::ostream& out) {
    for (const auto& turn : corpus) {
        nlohmann::ordered_json j;
        j["nbest"] = turn.nbest.hypotheses;
        j["gold_transcript"] = turn.gold_transcript;
        j["gold_target"] = turn.gold_target;
        j["intent_label"] = turn.intent_label;
        j["snapshot"] = snapshot_to_json(turn.snapshot);
        j["has_error"] = turn.has_error;
        out << j.dump() << '\n';
    }
}

Judgement judge(const CorrectionOutcome& outcome, const AnnotatedTurn& turn,
                FprConvention convention) {
    if (outcome.kind == OutcomeKind::Corrected) {
        bool text_match = normalize_text(outcome.corrected_text) ==
                          normalize_text(turn.gold_transcript);
        bool target_match = !outcome.target.empty() && !turn.gold_target.empty() &&
                            outcome.target == turn.gold_target;
        if (text_match || target_match) return Judgement::TP;
        if (convention == FprConvention::WrongCorrectionIsFn && turn.has_error)
            return Judgement::FN;
        return Judgement::FP;
    }
    return turn.has_error ? Judgement::FN : Judgement::TN;
}

double wer(const std::string& hypothesis, const std::string& reference) {
    std::vector<std::string> ref = tokenize(reference);
    if (ref.empty()) throw InvalidInput("WER reference is empty");
    std::vector<std::string> hyp = tokenize(hypothesis);
    return static_cast<double>(word_edit_distance(hyp, ref)) /
           static_cast<double>(ref.size());
}

MetricsRow metrics_from_counts(const ConfusionCounts& c) {
    MetricsRow row;
    row.counts = c;
    if (c.tp + c.fp > 0)
        row.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0)
        row.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (row.precision && row.recall) {
        double p = *row.precision, r = *row.recall;
        row.f1 = (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    }
    if (c.fp + c.tn > 0)
        row.fpr = static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
    return row;
}

namespace {

WerStats wer_stats(const std::vector<double>& values) {
    WerStats stats;
    if (values.empty()) return stats;
    double sum = 0.0;
    for (double v : values) sum += v;
    stats.mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - stats.mean) * (v - stats.mean);
    stats.stdev = std::sqrt(var / static_cast<double>(values.size()));
    return stats;
}

} // namespace

MetricsReport evaluate(const std::vector<AnnotatedTurn>& corpus,
                       const std::function<CorrectionOutcome(const AnnotatedTurn&)>& correct_fn,
                       FprConvention convention) {
    if (corpus.empty()) throw InvalidInput("evaluation corpus is empty");

    MetricsReport report;
    report.corpus_size = corpus.size();
    ConfusionCounts search, selection, combined;
    std::vector<double> wer_none, wer_engine;

    for (const auto& turn : corpus) {
        CorrectionOutcome outcome = correct_fn(turn);
        Judgement verdict = judge(outcome, turn, convention);

        auto bump = [&](ConfusionCounts& c) {
            switch (verdict) {
                case Judgement::TP: ++c.tp; break;
                case Judgement::FP: ++c.fp; break;
                case Judgement::FN: ++c.fn; break;
                case Judgement::TN: ++c.tn; break;
            }
        };
        bump(combined);
        if (turn.intent_label == "search") bump(search);
        if (turn.intent_label == "select") bump(selection);

        const std::string& best = turn.nbest.hypotheses.front();
        wer_none.push_back(wer(best, turn.gold_transcript));
        const std::string& engine_text =
            outcome.kind == OutcomeKind::Corrected ? outcome.corrected_text : best;
        wer_engine.push_back(wer(engine_text, turn.gold_transcript));
    }

    report.search = metrics_from_counts(search);
    report.selection = metrics_from_counts(selection);
    report.combined = metrics_from_counts(combined);
    report.wer_none = wer_stats(wer_none);
    report.wer_engine = wer_stats(wer_engine);
    return report;
}

namespace {

nlohmann::ordered_json row_to_json(const MetricsRow& row) {
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    nlohmann::ordered_json j;
    j["tp"] = row.counts.tp;
    j["fp"] = row.counts.fp;
    j["fn"] = row.counts.fn;
    j["tn"] = row.counts.tn;
    j["precision"] = opt(row.precision);
    j["recall"] = opt(row.recall);
    j["f1"] = opt(row.f1);
    j["fpr"] = opt(row.fpr);
    return j;
}

std::string fmt(const std::optional<double>& v) {
    if (!v) return "  n/a";
    std::ostringstream oss;
    oss << std::fixed << std::setprecision(3) << *v;
    return oss.str();
}

} // namespace

std::string report_to_json(const MetricsReport& report) {
    nlohmann::ordered_json j;
    j["corpus_size"] = report.corpus_size;
    j["intents"]["search"] = row_to_json(report.search);
    j["intents"]["selection"] = row_to_json(report.selection);
    j["intents"]["combined"] = row_to_json(report.combined);
    j["wer"]["none"] = {{"mean", report.wer_none.mean}, {"stdev", report.wer_none.stdev}};
    j["wer"]["engine"] = {{"mean", report.wer_engine.mean},
                          {"stdev", report.wer_engine.stdev}};
    return j.dump(2) + "\n";
}

std::string report_to_table(const MetricsReport& report) {
    std::ostringstream out;
    out << "Intent      Prec    Rec     F1      FPR\n";
    auto line = [&](const char* name, const MetricsRow& row) {
        out << std::left << std::setw(12) << name << std::setw(8) << fmt(row.precision)
            << std::setw(8) << fmt(row.recall) << std::setw(8) << fmt(row.f1) << std::setw(8)
            << fmt(row.fpr) << "\n";
    };
    line("search", report.search);
    line("selection", report.selection);
    line("combined", report.combined);
    out << std::fixed << std::setprecision(4) << "WER none   " << report.wer_none.mean
        << " (sd " << report.wer_none.stdev << ")\n"
        << "WER engine " << report.wer_engine.mean << " (sd " << report.wer_engine.stdev
        << ")\n";
    return out.str();
}

namespace {

// Same-initial-phoneme substitute from the lexicon, spelling perturbation
// when the bucket has no alternative.
std::string corrupt_token(const std::string& token, const Lexicon& lexicon,
                          std::mt19937_64& rng) {
    std::string norm = normalize_text(token);
    if (norm.empty()) return token;
    const auto* phones = lexicon.lookup(norm);
    if (phones) {
        const auto& buckets = lexicon.words_by_initial_phoneme();
        auto bucket = buckets.find(phones->front().symbol);
        if (bucket != buckets.end() && bucket->second.size() > 1) {
            for (int attempt = 0; attempt < 8; ++attempt) {
                const std::string& pick =
                    bucket->second[rng() % bucket->second.size()];
                if (pick != norm) return pick;
            }
        }
    }
    // perturb spelling: swap two adjacent letters, or drop one
    std::string out = norm;
    if (out.size() >= 2) {
        size_t pos = rng() % (out.size() - 1);
        if (rng() % 2 == 0)
            std::swap(out[pos], out[pos + 1]);
        else
            out.erase(pos, 1);
        if (!out.empty() && out != norm) return out;
    }
    return norm + norm.substr(0, 1);
}

std::string corrupt_transcript(const std::string& gold, const Lexicon& lexicon,
                               double prob, std::mt19937_64& rng, bool force_one) {
    std::vector<std::string> tokens = tokenize(gold);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    bool any = false;
    for (auto& tok : tokens) {
        if (coin(rng) < prob) {
            tok = corrupt_token(tok, lexicon, rng);
            any = true;
        }
    }
    if (force_one && !any && !tokens.empty()) {
        size_t pos = rng() % tokens.size();
        tokens[pos] = corrupt_token(tokens[pos], lexicon, rng);
    }
    return join(tokens);
}

} // namespace

InjectedNBest inject_errors(const std::string& gold, const Lexicon& lexicon,
                            const NoiseConfig& config, uint64_t seed) {
    if (config.nbest_size == 0 || config.nbest_size > 5)
        throw InvalidInput("n-best size must be between 1 and 5");
    std::mt19937_64 rng(seed);
    std::string gold_norm = normalize_text(gold);

    InjectedNBest out;
    std::string best = corrupt_transcript(gold, lexicon, config.corruption_prob, rng,
                                          /*force_one=*/false);
    out.nbest.hypotheses.push_back(best);

    while (out.nbest.hypotheses.size() < config.nbest_size) {
        bool force = config.gold_in_nbest && best == gold_norm;
        std::string alt = corrupt_transcript(gold, lexicon,
                                             std::max(config.corruption_prob, 0.2), rng, force);
        if (config.gold_in_nbest && best == gold_norm && alt == gold_norm) continue;
        out.nbest.hypotheses.push_back(alt);
    }

    if (config.gold_in_nbest && best != gold_norm) {
        // exactly one hypothesis equals gold
        for (auto& h : out.nbest.hypotheses)
            if (h == gold_norm) h = corrupt_transcript(gold, lexicon, 1.0, rng, true);
        size_t pos = out.nbest.hypotheses.size() == 1
                         ? 0
                         : 1 + rng() % (out.nbest.hypotheses.size() - 1);
        out.nbest.hypotheses[pos] = gold_norm;
    }

    out.gold_present = std::any_of(out.nbest.hypotheses.begin(), out.nbest.hypotheses.end(),
                                   [&](const std::string& h) { return h == gold_norm; });
    return out;
}

std::vector<AnnotatedTurn> generate_corpus(const TaskCatalog& catalog, const Lexicon& lexicon,
                                           const CorpusGenConfig& config, uint64_t seed) {
    if (catalog.empty()) throw InvalidInput("corpus generation needs a non-empty catalog");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::vector<AnnotatedTurn> corpus;
    for (size_t t = 0; t < config.turns; ++t) {
        const TaskEntry& task = catalog[rng() % catalog.size()];
        bool select_turn = coin(rng) < config.select_fraction;
        bool error_turn = coin(rng) < config.error_rate;
        bool gold_in_nbest = error_turn && coin(rng) < config.gold_in_nbest_fraction;

        AnnotatedTurn turn;
        turn.gold_transcript = normalize_text(task.canonical_text);
        turn.gold_target = task.id;
        turn.intent_label = select_turn ? "select" : "search";

        if (select_turn) {
            turn.snapshot.state = DialogueState::Selecting;
            std::vector<std::string> options = {task.canonical_text};
            while (options.size() < 3 && options.size() < catalog.size()) {
                const TaskEntry& other = catalog[rng() % catalog.size()];
                if (std::find(options.begin(), options.end(), other.canonical_text) ==
                    options.end())
                    options.push_back(other.canonical_text);
            }
            // shuffle deterministically so gold is not always option one
            for (size_t i = options.size(); i > 1; --i)
                std::swap(options[i - 1], options[rng() % i]);
            turn.snapshot.presented_options = options;
        } else {
            turn.snapshot.state = DialogueState::Searching;
        }

        if (error_turn) {
            NoiseConfig noise = config.noise;
            noise.gold_in_nbest = gold_in_nbest;
            uint64_t turn_seed = rng();
            InjectedNBest injected = inject_errors(turn.gold_transcript, lexicon, noise,
                                                   turn_seed);
            // re-inject until the best hypothesis really differs from gold
            for (int attempt = 0;
                 attempt < 16 && normalize_text(injected.nbest.hypotheses.front()) ==
                                     normalize_text(turn.gold_transcript);
                 ++attempt) {
                NoiseConfig harder = noise;
                harder.corruption_prob = std::min(1.0, harder.corruption_prob + 0.2);
                injected = inject_errors(turn.gold_transcript, lexicon, harder, rng());
            }
            turn.nbest = injected.nbest;
        } else {
            turn.nbest.hypotheses = {turn.gold_transcript};
        }
        turn.has_error = normalize_text(turn.nbest.hypotheses.front()) !=
                         normalize_text(turn.gold_transcript);
        corpus.push_back(std::move(turn));
    }
    return corpus;
}

} // namespace asrfix
