#include "asrfix/augment.hpp"

#include "asrfix/errors.hpp"
#include "asrfix/text.hpp"

#include "httplib.h"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace asrfix {

namespace {

const std::set<std::string>& stop_tokens() {
    static const std::set<std::string> stops = {"how", "to", "a", "the", "of", "for"};
    return stops;
}

double sq_distance(const std::vector<float>& a, const std::vector<float>& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double diff = static_cast<double>(a[i]) - b[i];
        d += diff * diff;
    }
    return d;
}

} // namespace

std::vector<std::string> TemplateGenerator::generate(const std::string& text,
                                                     size_t k) const {
    std::string norm = normalize_text(text);
    std::string base = norm;
    for (const char* prefix : {"how to ", "ways to ", "best way to "}) {
        if (base.rfind(prefix, 0) == 0) {
            base = base.substr(std::string(prefix).size());
            break;
        }
    }

    std::vector<std::string> frames;
    frames.push_back(base);
    frames.push_back("how to " + base);
    frames.push_back("ways to " + base);
    frames.push_back("best way to " + base);
    frames.push_back("learn to " + base);
    frames.push_back("steps to " + base);

    // verb synonym on the first token of the base phrase
    static const std::map<std::string, std::string> synonyms = {
        {"start", "boot up"}, {"kill", "exterminate"}, {"make", "create"},
        {"fix", "repair"},    {"clean", "wash"},       {"build", "put together"},
        {"tune", "adjust"},   {"cook", "prepare"},     {"remove", "get rid of"},
    };
    auto tokens = tokenize(base);
    if (!tokens.empty()) {
        auto it = synonyms.find(tokens.front());
        if (it != synonyms.end()) {
            std::string swapped = it->second;
            for (size_t i = 1; i < tokens.size(); ++i) swapped += " " + tokens[i];
            frames.insert(frames.begin() + 1, swapped);
            frames.push_back("how to " + swapped);
        }
    }

    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& f : frames) {
        if (out.size() >= k) break;
        if (f == norm || f.empty()) continue;
        if (seen.insert(f).second) out.push_back(f);
    }
    return out;
}

FileGenerator::FileGenerator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open variation table: " + path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("variation table line is not two tab-separated columns", lineno);
        table_[normalize_text(line.substr(0, tab))].push_back(
            normalize_text(line.substr(tab + 1)));
    }
}

std::vector<std::string> FileGenerator::generate(const std::string& text, size_t k) const {
    std::string norm = normalize_text(text);
    std::vector<std::string> out;
    std::set<std::string> seen;
    auto it = table_.find(norm);
    if (it != table_.end()) {
        for (const auto& v : it->second) {
            if (out.size() >= k) return out;
            if (v != norm && seen.insert(v).second) out.push_back(v);
        }
    }
    if (out.size() < k) {
        for (const auto& v : fallback_.generate(text, k)) {
            if (out.size() >= k) break;
            if (v != norm && seen.insert(v).second) out.push_back(v);
        }
    }
    return out;
}

HttpGenerator::HttpGenerator(std::string host, int port, std::string path,
                             int timeout_seconds)
    : host_(std::move(host)), port_(port), path_(std::move(path)),
      timeout_seconds_(timeout_seconds) {}

std::vector<std::string> HttpGenerator::generate(const std::string& text, size_t k) const {
    httplib::Client client(host_, port_);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    nlohmann::json body = {{"text", text}, {"k", k}};
    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res)
        throw GenerationError("variation service unreachable: " + host_ + ":" +
                              std::to_string(port_));
    if (res->status != 200)
        throw GenerationError("variation service returned status " +
                              std::to_string(res->status));
    try {
        return nlohmann::json::parse(res->body)
            .at("variations")
            .get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw GenerationError(std::string("malformed variation service reply: ") + e.what());
    }
}

VariationMap map_public_to_private(const std::vector<std::string>& public_texts,
                                   const TaskCatalog& private_catalog,
                                   const Embedder& embedder, double sim_threshold) {
    if (public_texts.empty() || private_catalog.empty()) return {};

    std::vector<std::vector<float>> private_vectors;
    private_vectors.reserve(private_catalog.size());
    for (const auto& entry : private_catalog)
        private_vectors.push_back(embedder.embed(entry.canonical_text));

    VariationMap map;
    for (const auto& x : public_texts) {
        std::vector<float> xv = embedder.embed(x);
        size_t best = 0;
        double best_sim = -2.0;
        for (size_t y = 0; y < private_vectors.size(); ++y) {
            double sim = cosine(xv, private_vectors[y]);
            if (sim > best_sim) {
                best_sim = sim;
                best = y;
            }
        }
        if (best_sim > sim_threshold) {
            map.mapping[x] = private_catalog[best].id;
            map.provenance[x] = Provenance::PublicMapped;
        }
    }
    return map;
}

std::vector<std::string> cluster_centroids(const std::vector<std::string>& texts,
                                           const Embedder& embedder, size_t n_clusters,
                                           uint64_t seed) {
    if (n_clusters == 0) throw InvalidInput("n_clusters must be positive");
    if (n_clusters > texts.size())
        throw InvalidInput("n_clusters (" + std::to_string(n_clusters) +
                           ") exceeds the number of texts (" +
                           std::to_string(texts.size()) + ")");

    const size_t n = texts.size();
    std::vector<std::vector<float>> points;
    points.reserve(n);
    for (const auto& t : texts) points.push_back(embedder.embed(t));

    // farthest-first seeding
    std::vector<size_t> init;
    init.push_back(seed % n);
    while (init.size() < n_clusters) {
        size_t farthest = 0;
        double best = -1.0;
        for (size_t p = 0; p < n; ++p) {
            double nearest = std::numeric_limits<double>::max();
            for (size_t c : init) nearest = std::min(nearest, sq_distance(points[p], points[c]));
            if (nearest > best) {
                best = nearest;
                farthest = p;
            }
        }
        init.push_back(farthest);
    }

    std::vector<std::vector<float>> centers;
    for (size_t c : init) centers.push_back(points[c]);

    std::vector<size_t> assignment(n, 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (size_t p = 0; p < n; ++p) {
            size_t best_c = 0;
            double best_d = std::numeric_limits<double>::max();
            for (size_t c = 0; c < centers.size(); ++c) {
                double d = sq_distance(points[p], centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best_c = c;
                }
            }
            if (assignment[p] != best_c) {
                assignment[p] = best_c;
                changed = true;
            }
        }
        for (size_t c = 0; c < centers.size(); ++c) {
            std::vector<double> mean(points[0].size(), 0.0);
            size_t count = 0;
            for (size_t p = 0; p < n; ++p) {
                if (assignment[p] != c) continue;
                for (size_t d = 0; d < mean.size(); ++d) mean[d] += points[p][d];
                ++count;
            }
            if (count == 0) continue; // empty cluster keeps its seed center
            for (size_t d = 0; d < mean.size(); ++d)
                centers[c][d] = static_cast<float>(mean[d] / static_cast<double>(count));
        }
        if (!changed) break;
    }

    // representative = member closest to the cluster mean, seed point when empty
    std::vector<std::string> reps;
    for (size_t c = 0; c < centers.size(); ++c) {
        size_t best_p = init[c];
        double best_d = std::numeric_limits<double>::max();
        for (size_t p = 0; p < n; ++p) {
            if (assignment[p] != c) continue;
            double d = sq_distance(points[p], centers[c]);
            if (d < best_d) {
                best_d = d;
                best_p = p;
            }
        }
        reps.push_back(texts[best_p]);
    }
    return reps;
}

std::vector<std::string> generate_variations(const std::string& centroid_text, size_t k,
                                             const VariationGenerator& generator) {
    std::string norm = normalize_text(centroid_text);
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& v : generator.generate(centroid_text, k)) {
        if (out.size() >= k) break;
        std::string nv = normalize_text(v);
        if (nv.empty() || nv == norm) continue; // identical output is dropped
        if (seen.insert(nv).second) out.push_back(nv);
    }
    return out;
}

namespace {

using Checkpoint = std::map<std::string, std::vector<std::string>>;

Checkpoint load_checkpoint(const std::string& path) {
    Checkpoint done;
    if (path.empty()) return done;
    std::ifstream in(path);
    if (!in) return done;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto record = nlohmann::json::parse(line);
        done[record.at("centroid").get<std::string>()] =
            record.at("variations").get<std::vector<std::string>>();
    }
    return done;
}

void save_checkpoint(const std::string& path, const Checkpoint& done) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::trunc);
    for (const auto& [centroid, variations] : done) {
        nlohmann::ordered_json record;
        record["centroid"] = centroid;
        record["variations"] = variations;
        out << record.dump() << '\n';
    }
}

} // namespace

TaskCatalog build_augmented_catalog(const std::vector<std::string>& public_texts,
                                    const TaskCatalog& private_catalog,
                                    const Embedder& embedder, const AugmentConfig& config,
                                    AugmentReport* report) {
    TaskCatalog out = private_catalog;
    AugmentReport stats;

    VariationMap map =
        map_public_to_private(public_texts, private_catalog, embedder, config.sim_threshold);
    stats.mapped_public = map.mapping.size();

    auto entry_by_id = [&out](const std::string& id) -> TaskEntry& {
        for (auto& e : out)
            if (e.id == id) return e;
        throw BuildError("variation map references unknown task id: " + id);
    };
    auto add_form = [&stats](TaskEntry& entry, const std::string& form, bool generated) {
        if (std::find(entry.surface_forms.begin(), entry.surface_forms.end(), form) !=
            entry.surface_forms.end()) {
            if (generated) ++stats.dropped;
            return;
        }
        entry.surface_forms.push_back(form);
        if (generated) ++stats.generated;
    };

    if (!map.mapping.empty()) {
        std::vector<std::string> mapped_texts;
        for (const auto& [text, id] : map.mapping) {
            add_form(entry_by_id(id), normalize_text(text), /*generated=*/false);
            mapped_texts.push_back(text);
        }

        std::vector<std::string> centroids =
            cluster_centroids(mapped_texts, embedder, config.n_clusters, config.seed);

        if (!config.generator)
            throw InvalidInput("augmentation requires a variation generator");

        Checkpoint done = load_checkpoint(config.checkpoint_path);
        for (const auto& centroid : centroids) {
            std::vector<std::string> variations;
            auto cached = done.find(centroid);
            if (cached != done.end()) {
                variations = cached->second;
            } else {
                try {
                    variations =
                        generate_variations(centroid, config.k_variations, *config.generator);
                } catch (const GenerationError&) {
                    save_checkpoint(config.checkpoint_path, done);
                    throw;
                }
                done[centroid] = variations;
            }
            // every variation inherits the canonical target of its centroid
            TaskEntry& target = entry_by_id(map.mapping.at(centroid));
            for (const auto& v : variations) add_form(target, v, /*generated=*/true);
        }
        save_checkpoint(config.checkpoint_path, done);
    }

    if (report) *report = stats;
    return out;
}

std::vector<ContextEntry> expand_partial_matches(const std::vector<std::string>& options) {
    if (options.empty() || options.size() > 10)
        throw InvalidInput("expand_partial_matches expects 1-10 options");

    std::vector<std::vector<std::string>> tokenized;
    tokenized.reserve(options.size());
    for (const auto& o : options) tokenized.push_back(tokenize(o));

    auto contains_ngram = [](const std::vector<std::string>& tokens,
                             const std::vector<std::string>& ngram) {
        if (ngram.size() > tokens.size()) return false;
        for (size_t s = 0; s + ngram.size() <= tokens.size(); ++s)
            if (std::equal(ngram.begin(), ngram.end(), tokens.begin() + s)) return true;
        return false;
    };

    std::vector<ContextEntry> entries;
    std::set<std::string> seen;
    for (size_t o = 0; o < options.size(); ++o) {
        const auto& tokens = tokenized[o];
        for (size_t len = 1; len <= tokens.size(); ++len) {
            for (size_t s = 0; s + len <= tokens.size(); ++s) {
                std::vector<std::string> ngram(tokens.begin() + s, tokens.begin() + s + len);
                if (std::all_of(ngram.begin(), ngram.end(), [](const std::string& t) {
                        return stop_tokens().count(t) > 0;
                    }))
                    continue;
                size_t owners = 0;
                for (const auto& other : tokenized)
                    if (contains_ngram(other, ngram)) ++owners;
                if (owners != 1) continue;
                std::string text = join(ngram);
                if (!seen.insert(text).second) continue;
                entries.push_back({text, options[o], ""});
            }
        }
    }
    return entries;
}

std::vector<std::string> inject_result(const std::vector<std::string>& default_results,
                                       const std::string& engine_top) {
    constexpr size_t kCap = 10;
    std::string norm_top = normalize_text(engine_top);
    std::vector<std::string> merged = default_results;
    bool already_present =
        std::any_of(merged.begin(), merged.end(),
                    [&](const std::string& r) { return normalize_text(r) == norm_top; });
    if (!already_present)
        merged.insert(merged.begin() + static_cast<ptrdiff_t>(std::min<size_t>(2, merged.size())),
                      engine_top);
    if (merged.size() > kCap) merged.resize(kCap);
    return merged;
}

} // namespace asrfix
