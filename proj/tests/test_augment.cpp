#include "asrfix/augment.hpp"
#include "asrfix/errors.hpp"
#include "asrfix/text.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <cstdio>
#include <fstream>
#include <set>

using namespace asrfix;
using testsupport::data_path;

namespace {

TaskCatalog small_catalog() {
    return {
        {"faucet", "fix a bathroom faucet", {"fix a bathroom faucet"}},
        {"guitar", "tune an electric guitar", {"tune an electric guitar"}},
        {"mosquito", "kill mosquitoes", {"kill mosquitoes"}},
    };
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/asrfix_test_" + name) {
        std::remove(path.c_str());
    }
    ~TempFile() { std::remove(path.c_str()); }
};

// generator that always fails, for checkpoint tests
struct FailingGenerator : VariationGenerator {
    std::vector<std::string> generate(const std::string&, size_t) const override {
        throw GenerationError("down for maintenance");
    }
};

} // namespace

TEST_CASE("map_public_to_private maps exact duplicates") {
    TrigramEmbedder emb(256);
    auto map = map_public_to_private({"fix a bathroom faucet"}, small_catalog(), emb, 0.5);
    REQUIRE(map.mapping.size() == 1);
    CHECK(map.mapping.at("fix a bathroom faucet") == "faucet");
    CHECK(map.provenance.at("fix a bathroom faucet") == Provenance::PublicMapped);
}

TEST_CASE("sim_threshold 1.0 drops every inexact match") {
    TrigramEmbedder emb(256);
    auto map = map_public_to_private(
        {"repair the bathroom faucet", "knit a sweater"}, small_catalog(), emb, 1.0);
    CHECK(map.mapping.empty());
}

TEST_CASE("mapping membership equals the exhaustive pairwise cosine oracle") {
    TrigramEmbedder emb(256);
    std::vector<std::string> public_texts = {
        "repair the bathroom faucet", "tune my electric guitar", "kill the mosquitoes",
        "knit a wool sweater", "paint a fence"};
    TaskCatalog catalog = small_catalog();
    const double threshold = 0.45;

    auto map = map_public_to_private(public_texts, catalog, emb, threshold);

    for (const auto& x : public_texts) {
        double best_sim = -2.0;
        std::string best_id;
        for (const auto& entry : catalog) {
            double sim = cosine(emb.embed(x), emb.embed(entry.canonical_text));
            if (sim > best_sim) {
                best_sim = sim;
                best_id = entry.id;
            }
        }
        if (best_sim > threshold) {
            REQUIRE(map.mapping.count(x) == 1);
            CHECK(map.mapping.at(x) == best_id);
        } else {
            CHECK(map.mapping.count(x) == 0);
        }
    }
}

TEST_CASE("cluster_centroids degenerate and determinism cases") {
    TrigramEmbedder emb(256);
    std::vector<std::string> texts = {"fix faucet", "fix sink", "bake bread", "bake cake"};

    auto all = cluster_centroids(texts, emb, texts.size(), 3);
    CHECK(std::set<std::string>(all.begin(), all.end()) ==
          std::set<std::string>(texts.begin(), texts.end()));

    auto a = cluster_centroids(texts, emb, 2, 11);
    auto b = cluster_centroids(texts, emb, 2, 11);
    CHECK(a == b);

    CHECK_THROWS_AS(cluster_centroids(texts, emb, 5, 0), InvalidInput);
    CHECK_THROWS_AS(cluster_centroids(texts, emb, 0, 0), InvalidInput);
}

TEST_CASE("two trigram groups split into one representative each") {
    TrigramEmbedder emb(256);
    std::vector<std::string> texts = {"fix faucet", "fix sink", "bake bread", "bake cake"};
    auto reps = cluster_centroids(texts, emb, 2, 1);
    REQUIRE(reps.size() == 2);
    auto is_fix = [](const std::string& t) { return t.rfind("fix", 0) == 0; };
    CHECK(is_fix(reps[0]) != is_fix(reps[1]));
}

TEST_CASE("template generator produces deterministic paraphrases") {
    TemplateGenerator gen;
    auto once = gen.generate("kill mosquitoes", 1);
    REQUIRE(once.size() == 1);
    CHECK(once == gen.generate("kill mosquitoes", 1));
    CHECK(once[0] != normalize_text("kill mosquitoes"));

    auto many = gen.generate("how to start a computer", 10);
    CHECK(!many.empty());
    for (const auto& v : many) CHECK(v != normalize_text("how to start a computer"));
}

TEST_CASE("file generator reads the variation table") {
    FileGenerator gen(data_path("variations.tsv"));
    auto vars = gen.generate("start a computer", 2);
    REQUIRE(vars.size() == 2);
    CHECK(vars[0] == "boot up computer");

    auto mosquito = gen.generate("kill mosquitoes", 1);
    REQUIRE(mosquito.size() == 1);
    CHECK(mosquito[0] == "exterminate mosquitos");

    // unknown original falls back to the template frames
    auto fallback = gen.generate("sharpen kitchen knives", 1);
    REQUIRE(fallback.size() == 1);
    CHECK(fallback[0] != "sharpen kitchen knives");
}

TEST_CASE("file generator rejects malformed tables") {
    TempFile tmp("bad_table.tsv");
    std::ofstream(tmp.path) << "no tab separator here\n";
    CHECK_THROWS_AS(FileGenerator{tmp.path}, ParseError);
    CHECK_THROWS_AS(FileGenerator{"/nonexistent/table.tsv"}, ParseError);
}

TEST_CASE("generate_variations drops outputs equal to the input") {
    struct EchoGenerator : VariationGenerator {
        std::vector<std::string> generate(const std::string& text, size_t) const override {
            return {text, normalize_text(text), "something else"};
        }
    } echo;
    auto vars = generate_variations("Kill Mosquitoes", 3, echo);
    CHECK(vars == std::vector<std::string>{"something else"});
}

TEST_CASE("empty public set leaves the catalog unchanged") {
    TrigramEmbedder emb(256);
    TemplateGenerator gen;
    AugmentConfig config;
    config.generator = &gen;
    AugmentReport report;
    TaskCatalog out = build_augmented_catalog({}, small_catalog(), emb, config, &report);
    CHECK(out.size() == small_catalog().size());
    CHECK(out[0].surface_forms == small_catalog()[0].surface_forms);
    CHECK(report.mapped_public == 0);
    CHECK(report.generated == 0);
}

TEST_CASE("one mapped item with one cluster and k=2 adds exactly two forms") {
    TrigramEmbedder emb(256);
    TemplateGenerator gen;
    AugmentConfig config;
    config.sim_threshold = 0.5;
    config.n_clusters = 1;
    config.k_variations = 2;
    config.generator = &gen;

    TaskCatalog before = small_catalog();
    size_t forms_before = before[2].surface_forms.size();
    TaskCatalog out = build_augmented_catalog({"kill mosquitoes"}, before, emb, config);

    REQUIRE(out.size() == before.size());
    const TaskEntry& mosquito = out[2];
    CHECK(mosquito.id == "mosquito");
    CHECK(mosquito.surface_forms.size() == forms_before + 2);
    // untouched tasks stay untouched
    CHECK(out[0].surface_forms == before[0].surface_forms);
}

TEST_CASE("augmentation accounting matches the report") {
    TrigramEmbedder emb(256);
    TemplateGenerator gen;
    AugmentConfig config;
    config.sim_threshold = 0.5;
    config.n_clusters = 1;
    config.k_variations = 3;
    config.generator = &gen;
    AugmentReport report;
    TaskCatalog out =
        build_augmented_catalog({"kill mosquitoes"}, small_catalog(), emb, config, &report);
    CHECK(report.mapped_public == 1);
    size_t added = out[2].surface_forms.size() - small_catalog()[2].surface_forms.size();
    CHECK(report.generated == added);
}

TEST_CASE("checkpoint lets an aborted run resume without regenerating") {
    TrigramEmbedder emb(256);
    TempFile tmp("checkpoint.jsonl");

    AugmentConfig config;
    config.sim_threshold = 0.5;
    config.n_clusters = 1;
    config.k_variations = 2;
    config.checkpoint_path = tmp.path;

    FailingGenerator failing;
    config.generator = &failing;
    CHECK_THROWS_AS(
        build_augmented_catalog({"kill mosquitoes"}, small_catalog(), emb, config),
        GenerationError);

    // seed the checkpoint as if a previous run had finished this centroid
    std::ofstream(tmp.path)
        << R"({"centroid":"kill mosquitoes","variations":["swat mosquitoes","zap mosquitoes"]})"
        << "\n";
    TaskCatalog out =
        build_augmented_catalog({"kill mosquitoes"}, small_catalog(), emb, config);
    const auto& forms = out[2].surface_forms;
    CHECK(std::find(forms.begin(), forms.end(), "swat mosquitoes") != forms.end());
    CHECK(std::find(forms.begin(), forms.end(), "zap mosquitoes") != forms.end());
}

TEST_CASE("expand_partial_matches resolves unique tokens, indoor plants example") {
    std::vector<std::string> options = {"how to care for indoor plants",
                                        "how to water indoor plants",
                                        "how to fertilize indoor plants"};
    auto entries = expand_partial_matches(options);

    bool water_found = false;
    for (const auto& e : entries) {
        if (e.text == "water") {
            water_found = true;
            CHECK(e.resolve_to == "how to water indoor plants");
        }
        // shared tokens never become entries
        CHECK(e.text != "indoor");
        CHECK(e.text != "plants");
        CHECK(e.text != "indoor plants");
    }
    CHECK(water_found);
}

TEST_CASE("expand_partial_matches on a single option maps every non-stop ngram to it") {
    auto entries = expand_partial_matches({"how to boil an egg"});
    CHECK(!entries.empty());
    for (const auto& e : entries) CHECK(e.resolve_to == "how to boil an egg");
    bool has_boil = false;
    for (const auto& e : entries)
        if (e.text == "boil") has_boil = true;
    CHECK(has_boil);
    // stop-token-only n-grams are excluded
    for (const auto& e : entries) {
        CHECK(e.text != "how");
        CHECK(e.text != "how to");
        CHECK(e.text != "a");
    }
}

TEST_CASE("expand_partial_matches with identical options yields nothing") {
    CHECK(expand_partial_matches({"boil an egg", "boil an egg"}).empty());
}

TEST_CASE("expand_partial_matches validates the option count") {
    CHECK_THROWS_AS(expand_partial_matches({}), InvalidInput);
    std::vector<std::string> eleven(11, "x");
    for (size_t i = 0; i < eleven.size(); ++i) eleven[i] += std::to_string(i);
    CHECK_THROWS_AS(expand_partial_matches(eleven), InvalidInput);
}

TEST_CASE("inject_result places the engine top at position 3") {
    std::vector<std::string> defaults = {"d1", "d2", "d3", "d4", "d5",
                                         "d6", "d7", "d8", "d9", "d10"};
    auto merged = inject_result(defaults, "t");
    REQUIRE(merged.size() == 10);
    CHECK(merged[0] == "d1");
    CHECK(merged[1] == "d2");
    CHECK(merged[2] == "t");
    CHECK(merged[3] == "d3");
    CHECK(merged[9] == "d9");
}

TEST_CASE("inject_result leaves the list unchanged when already present") {
    std::vector<std::string> defaults = {"engine top", "d2", "d3"};
    CHECK(inject_result(defaults, "Engine Top!") == defaults);
}

TEST_CASE("inject_result short and empty defaults") {
    CHECK(inject_result({}, "t") == std::vector<std::string>{"t"});
    CHECK(inject_result({"d1"}, "t") == std::vector<std::string>{"d1", "t"});
    CHECK(inject_result({"d1", "d2"}, "t") == std::vector<std::string>{"d1", "d2", "t"});
    CHECK(inject_result({"d1", "d2", "d3"}, "t") ==
          std::vector<std::string>{"d1", "d2", "t", "d3"});
}
