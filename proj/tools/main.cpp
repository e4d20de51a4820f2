// Command-line front end: build indices, augment catalogs, correct single
// utterances, generate synthetic corpora, and run evaluations.

#include "asrfix/augment.hpp"
#include "asrfix/dialogue.hpp"
#include "asrfix/errors.hpp"
#include "asrfix/eval.hpp"
#include "asrfix/g2p.hpp"
#include "asrfix/pipeline.hpp"
#include "asrfix/retrieval.hpp"
#include "asrfix/text.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

struct RunConfig {
    std::string lexicon_path;
    std::string catalog_path;
    std::string index_path;
    std::string corpus_path;
    std::string report_path;
    int fuzzy_min = 96;
    double cosine_min = 0.8;
    double alpha = 0.5;
    double range_ratio = 1.5;
    double min_coverage = 0.8;
    size_t dim = 256;
    uint64_t seed = 42;
    std::string embed_endpoint; // host:port/path, empty = built-in trigram embedder
    std::string gen_endpoint;
};

void add_threshold_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--fuzzy-min", cfg.fuzzy_min, "Fuzzy match cutoff, integer percent")
        ->capture_default_str();
    cmd->add_option("--cosine-min", cfg.cosine_min, "Indexed-search cosine cutoff")
        ->capture_default_str();
    cmd->add_option("--alpha", cfg.alpha, "Broad retrieval similarity cutoff")
        ->capture_default_str();
    cmd->add_option("--range-ratio", cfg.range_ratio, "Max LCS range / candidate length")
        ->capture_default_str();
    cmd->add_option("--min-coverage", cfg.min_coverage, "Min LCS coverage of a candidate")
        ->capture_default_str();
}

asrfix::PipelineConfig pipeline_config(const RunConfig& cfg) {
    asrfix::PipelineConfig pc;
    pc.rerank.fuzzy_min = cfg.fuzzy_min;
    pc.rerank.cosine_min = cfg.cosine_min;
    pc.phonetic.alpha = cfg.alpha;
    pc.phonetic.range_ratio = cfg.range_ratio;
    pc.phonetic.min_coverage = cfg.min_coverage;
    return pc;
}

std::unique_ptr<asrfix::Embedder> make_embedder(const RunConfig& cfg) {
    if (cfg.embed_endpoint.empty())
        return std::make_unique<asrfix::TrigramEmbedder>(cfg.dim);
    auto slash = cfg.embed_endpoint.find('/');
    auto colon = cfg.embed_endpoint.find(':');
    if (colon == std::string::npos)
        throw asrfix::InvalidInput("embed endpoint must be host:port/path");
    std::string host = cfg.embed_endpoint.substr(0, colon);
    std::string path = slash == std::string::npos ? "/embed" : cfg.embed_endpoint.substr(slash);
    int port = std::stoi(cfg.embed_endpoint.substr(colon + 1));
    return std::make_unique<asrfix::HttpEmbedder>(host, port, path, cfg.dim);
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw asrfix::ParseError("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

int cmd_build_index(const RunConfig& cfg) {
    asrfix::TaskCatalog catalog = asrfix::load_catalog_file(cfg.catalog_path);
    auto embedder = make_embedder(cfg);
    asrfix::SearchIndex index = asrfix::SearchIndex::build(catalog, *embedder);
    index.save_file(cfg.index_path);
    std::cout << "index written to " << cfg.index_path << "\n"
              << "entries: " << index.entries().size() << "\n"
              << "surface forms: " << index.forms().size() << "\n"
              << "dimension: " << index.dim() << "\n";
    return kExitOk;
}

int cmd_augment(const RunConfig& cfg, const std::string& public_path,
                const std::string& table_path, const std::string& out_path,
                double sim_threshold, size_t clusters, size_t k,
                const std::string& checkpoint) {
    asrfix::TaskCatalog catalog = asrfix::load_catalog_file(cfg.catalog_path);
    std::vector<std::string> public_texts =
        public_path.empty() ? std::vector<std::string>{} : read_lines(public_path);

    std::unique_ptr<asrfix::VariationGenerator> generator;
    if (!cfg.gen_endpoint.empty()) {
        auto colon = cfg.gen_endpoint.find(':');
        auto slash = cfg.gen_endpoint.find('/');
        if (colon == std::string::npos)
            throw asrfix::InvalidInput("generator endpoint must be host:port/path");
        generator = std::make_unique<asrfix::HttpGenerator>(
            cfg.gen_endpoint.substr(0, colon),
            std::stoi(cfg.gen_endpoint.substr(colon + 1)),
            slash == std::string::npos ? "/generate" : cfg.gen_endpoint.substr(slash));
    } else if (!table_path.empty()) {
        generator = std::make_unique<asrfix::FileGenerator>(table_path);
    } else {
        generator = std::make_unique<asrfix::TemplateGenerator>();
    }

    auto embedder = make_embedder(cfg);
    asrfix::AugmentConfig ac;
    ac.sim_threshold = sim_threshold;
    ac.n_clusters = clusters;
    ac.k_variations = k;
    ac.generator = generator.get();
    ac.seed = cfg.seed;
    ac.checkpoint_path = checkpoint;

    asrfix::AugmentReport report;
    asrfix::TaskCatalog augmented =
        asrfix::build_augmented_catalog(public_texts, catalog, *embedder, ac, &report);
    std::ofstream out(out_path);
    if (!out) throw asrfix::ParseError("cannot write catalog: " + out_path);
    asrfix::save_catalog(augmented, out);
    std::cout << "augmented catalog written to " << out_path << "\n"
              << "mapped public items: " << report.mapped_public << "\n"
              << "generated variations: " << report.generated << "\n"
              << "dropped duplicates: " << report.dropped << "\n";
    return kExitOk;
}

asrfix::DialogueSnapshot snapshot_from_flags(const std::string& state_name,
                                             const std::vector<std::string>& options,
                                             const std::vector<std::string>& suggestions,
                                             const std::string& active_task,
                                             bool pending_question) {
    asrfix::DialogueSnapshot snap;
    auto state = asrfix::dialogue_state_from_string(state_name);
    if (!state) throw asrfix::InvalidInput("unknown dialogue state: " + state_name);
    snap.state = *state;
    snap.presented_options = options;
    snap.system_suggestions = suggestions;
    if (!active_task.empty()) snap.active_task = active_task;
    snap.pending_system_question = pending_question;
    return snap;
}

int cmd_correct(const RunConfig& cfg, std::vector<std::string> nbest_texts,
                const std::string& state_name, const std::vector<std::string>& options,
                const std::vector<std::string>& suggestions, const std::string& active_task,
                bool pending_question, const std::string& intent_name,
                const std::string& trace_path) {
    asrfix::Lexicon lexicon = asrfix::Lexicon::load_file(cfg.lexicon_path);
    asrfix::SearchIndex index = asrfix::SearchIndex::load_file(cfg.index_path);
    auto embedder = make_embedder(cfg);

    if (nbest_texts.empty()) {
        // read {"nbest": [...]} from standard input
        nlohmann::json j;
        std::cin >> j;
        nbest_texts = j.at("nbest").get<std::vector<std::string>>();
    }
    asrfix::NBestList nbest;
    nbest.hypotheses = nbest_texts;

    asrfix::DialogueSnapshot snap =
        snapshot_from_flags(state_name, options, suggestions, active_task, pending_question);

    asrfix::Intent intent;
    if (intent_name.empty()) {
        intent = asrfix::RuleIntentClassifier{}.classify(nbest.hypotheses.front(), snap);
    } else {
        auto label = asrfix::intent_from_string(intent_name);
        if (!label) throw asrfix::InvalidInput("unknown intent: " + intent_name);
        intent = {*label, 1.0};
    }

    asrfix::CorrectionOutcome outcome =
        asrfix::correct(nbest, snap, intent, &index, embedder.get(), lexicon,
                        pipeline_config(cfg));

    nlohmann::ordered_json out;
    out["kind"] = asrfix::to_string(outcome.kind);
    if (outcome.kind == asrfix::OutcomeKind::Corrected) {
        out["corrected_text"] = outcome.corrected_text;
        out["target"] = outcome.target;
        out["method"] = asrfix::to_string(outcome.method);
        out["score"] = outcome.score;
        out["prompt"] = outcome.prompt;
    }
    if (!outcome.diagnostics.empty()) out["diagnostics"] = outcome.diagnostics;
    std::cout << out.dump(2) << "\n";

    if (!trace_path.empty()) {
        std::ofstream trace(trace_path, std::ios::app);
        trace << asrfix::trace_turn_json(snap, nbest, intent,
                                         asrfix::derive_narrow_context(snap), outcome)
              << "\n";
    }
    return kExitOk;
}

int cmd_gen_corpus(const RunConfig& cfg, const std::string& out_path, size_t turns,
                   double error_rate, double gold_fraction, double corruption_prob,
                   size_t nbest_size) {
    asrfix::TaskCatalog catalog = asrfix::load_catalog_file(cfg.catalog_path);
    asrfix::Lexicon lexicon = asrfix::Lexicon::load_file(cfg.lexicon_path);
    asrfix::CorpusGenConfig gen;
    gen.turns = turns;
    gen.error_rate = error_rate;
    gen.gold_in_nbest_fraction = gold_fraction;
    gen.noise.corruption_prob = corruption_prob;
    gen.noise.nbest_size = nbest_size;
    auto corpus = asrfix::generate_corpus(catalog, lexicon, gen, cfg.seed);
    std::ofstream out(out_path);
    if (!out) throw asrfix::ParseError("cannot write corpus: " + out_path);
    asrfix::save_corpus(corpus, out);
    std::cout << "corpus written to " << out_path << " (" << corpus.size() << " turns)\n";
    return kExitOk;
}

int cmd_eval(const RunConfig& cfg, const std::string& convention_name) {
    asrfix::Lexicon lexicon = asrfix::Lexicon::load_file(cfg.lexicon_path);
    asrfix::SearchIndex index = asrfix::SearchIndex::load_file(cfg.index_path);
    auto embedder = make_embedder(cfg);
    auto corpus = asrfix::load_corpus_file(cfg.corpus_path);
    if (corpus.empty()) throw asrfix::InvalidInput("corpus is empty: " + cfg.corpus_path);

    asrfix::FprConvention convention = asrfix::FprConvention::WrongCorrectionIsFp;
    if (convention_name == "alternate")
        convention = asrfix::FprConvention::WrongCorrectionIsFn;
    else if (convention_name != "default")
        throw asrfix::InvalidInput("fpr convention must be 'default' or 'alternate'");

    asrfix::PipelineConfig pc = pipeline_config(cfg);
    auto correct_fn = [&](const asrfix::AnnotatedTurn& turn) {
        auto label = asrfix::intent_from_string(turn.intent_label);
        asrfix::Intent intent{label.value_or(asrfix::IntentLabel::Other), 1.0};
        return asrfix::correct(turn.nbest, turn.snapshot, intent, &index, embedder.get(),
                               lexicon, pc);
    };
    asrfix::MetricsReport report = asrfix::evaluate(corpus, correct_fn, convention);

    std::string json = asrfix::report_to_json(report);
    if (!cfg.report_path.empty()) {
        std::ofstream out(cfg.report_path);
        if (!out) throw asrfix::ParseError("cannot write report: " + cfg.report_path);
        out << json;
    }
    std::cout << asrfix::report_to_table(report);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ASR error correction engine for goal-oriented dialogue"};
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--embed-endpoint", cfg.embed_endpoint,
                   "External embedding service host:port/path")
        ->envname("ASRFIX_EMBED_ENDPOINT");
    app.add_option("--gen-endpoint", cfg.gen_endpoint,
                   "External variation generator host:port/path")
        ->envname("ASRFIX_GEN_ENDPOINT");
    app.add_option("--dim", cfg.dim, "Embedding dimension")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();

    auto* build = app.add_subcommand("build-index", "Build a search index from a catalog");
    build->add_option("--catalog", cfg.catalog_path, "Task catalog (JSONL)")->required();
    build->add_option("--out", cfg.index_path, "Output index path")->required();

    auto* augment = app.add_subcommand("augment", "Augment a catalog with variations");
    std::string public_path, table_path, aug_out, checkpoint;
    double sim_threshold = 0.5;
    size_t clusters = 1, k = 1;
    augment->add_option("--catalog", cfg.catalog_path, "Private task catalog")->required();
    augment->add_option("--public", public_path, "Public task phrases, one per line");
    augment->add_option("--out", aug_out, "Output catalog path")->required();
    augment->add_option("--generator-table", table_path, "Two-column variation table (TSV)");
    augment->add_option("--sim-threshold", sim_threshold)->capture_default_str();
    augment->add_option("--clusters", clusters)->capture_default_str();
    augment->add_option("-k,--variations", k)->capture_default_str();
    augment->add_option("--checkpoint", checkpoint, "Resumable checkpoint path");

    auto* correct_cmd = app.add_subcommand("correct", "Correct one n-best list");
    std::vector<std::string> nbest_texts, options, suggestions;
    std::string state_name = "searching", active_task, intent_name, trace_path;
    bool pending_question = false;
    correct_cmd->add_option("--index", cfg.index_path, "Search index")->required();
    correct_cmd->add_option("--lexicon", cfg.lexicon_path, "CMUdict lexicon")->required();
    correct_cmd->add_option("--nbest", nbest_texts,
                            "Hypotheses, best first (or stdin JSON when omitted)");
    correct_cmd->add_option("--state", state_name, "Dialogue state")->capture_default_str();
    correct_cmd->add_option("--option", options, "Presented option (repeatable)");
    correct_cmd->add_option("--suggestion", suggestions, "System suggestion (repeatable)");
    correct_cmd->add_option("--active-task", active_task);
    correct_cmd->add_flag("--pending-question", pending_question);
    correct_cmd->add_option("--intent", intent_name,
                            "Force an intent label instead of the rule classifier");
    correct_cmd->add_option("--trace-file", trace_path, "Append a session-trace JSON line");
    add_threshold_flags(correct_cmd, cfg);

    auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic corpus");
    std::string corpus_out;
    size_t turns = 200, nbest_size = 5;
    double error_rate = 0.5, gold_fraction = 0.5, corruption_prob = 0.3;
    gen->add_option("--catalog", cfg.catalog_path)->required();
    gen->add_option("--lexicon", cfg.lexicon_path)->required();
    gen->add_option("--out", corpus_out)->required();
    gen->add_option("--turns", turns)->capture_default_str();
    gen->add_option("--error-rate", error_rate)->capture_default_str();
    gen->add_option("--gold-in-nbest", gold_fraction)->capture_default_str();
    gen->add_option("--corruption-prob", corruption_prob)->capture_default_str();
    gen->add_option("--nbest-size", nbest_size)->capture_default_str();

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a corpus against the engine");
    std::string convention = "default";
    eval_cmd->add_option("--corpus", cfg.corpus_path)->required();
    eval_cmd->add_option("--index", cfg.index_path)->required();
    eval_cmd->add_option("--lexicon", cfg.lexicon_path)->required();
    eval_cmd->add_option("--report", cfg.report_path, "Report JSON output path");
    eval_cmd->add_option("--fpr-convention", convention, "default | alternate")
        ->capture_default_str();
    add_threshold_flags(eval_cmd, cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_build_index(cfg);
        if (augment->parsed())
            return cmd_augment(cfg, public_path, table_path, aug_out, sim_threshold, clusters,
                               k, checkpoint);
        if (correct_cmd->parsed())
            return cmd_correct(cfg, nbest_texts, state_name, options, suggestions,
                               active_task, pending_question, intent_name, trace_path);
        if (gen->parsed())
            return cmd_gen_corpus(cfg, corpus_out, turns, error_rate, gold_fraction,
                                  corruption_prob, nbest_size);
        if (eval_cmd->parsed()) return cmd_eval(cfg, convention);
    } catch (const asrfix::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const asrfix::InvalidInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInput;
}
