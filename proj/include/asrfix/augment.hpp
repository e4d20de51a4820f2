#pragma once

#include "asrfix/context.hpp"
#include "asrfix/embedder.hpp"
#include "asrfix/retrieval.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace asrfix {

enum class Provenance { Original, PublicMapped, Generated };

/// Surface text -> canonical task id, with per-key provenance.
struct VariationMap {
    std::map<std::string, std::string> mapping;
    std::map<std::string, Provenance> provenance;
};

/// Produces k paraphrases of a task phrase. Offline only; the correction
/// pipeline never calls this.
class VariationGenerator {
public:
    virtual ~VariationGenerator() = default;
    virtual std::vector<std::string> generate(const std::string& text, size_t k) const = 0;
};

/// Built-in paraphrase frames ("how to X" <-> "X" <-> "ways to X" <-> "best
/// way to X") plus a small verb synonym table. Deterministic.
class TemplateGenerator : public VariationGenerator {
public:
    std::vector<std::string> generate(const std::string& text, size_t k) const override;
};

/// Two-column (original TAB variation) table read from disk. Variations for
/// an unknown original fall back to the template generator.
class FileGenerator : public VariationGenerator {
public:
    explicit FileGenerator(const std::string& path);
    std::vector<std::string> generate(const std::string& text, size_t k) const override;

private:
    std::map<std::string, std::vector<std::string>> table_;
    TemplateGenerator fallback_;
};

/// Client for POST {"text":..., "k":n} -> {"variations":[...]}. Throws
/// GenerationError on failure.
class HttpGenerator : public VariationGenerator {
public:
    HttpGenerator(std::string host, int port, std::string path, int timeout_seconds = 10);
    std::vector<std::string> generate(const std::string& text, size_t k) const override;

private:
    std::string host_;
    int port_;
    std::string path_;
    int timeout_seconds_;
};

struct AugmentConfig {
    double sim_threshold = 0.5;
    size_t n_clusters = 1;
    size_t k_variations = 1;
    const VariationGenerator* generator = nullptr;
    uint64_t seed = 0;
    /// When set, completed centroids are checkpointed here so an aborted run
    /// can resume without regenerating.
    std::string checkpoint_path;
};

/// Pair every public text with its nearest private task by cosine and keep
/// the pair when the similarity strictly exceeds sim_threshold.
VariationMap map_public_to_private(const std::vector<std::string>& public_texts,
                                   const TaskCatalog& private_catalog,
                                   const Embedder& embedder, double sim_threshold);

/// Seeded k-means over embeddings (farthest-first init, at most 100
/// iterations); the representative of each cluster is the member closest to
/// its mean. Throws InvalidInput when n_clusters > |texts|.
std::vector<std::string> cluster_centroids(const std::vector<std::string>& texts,
                                           const Embedder& embedder, size_t n_clusters,
                                           uint64_t seed);

/// Up to k texts distinct from the input; generator outputs equal to the
/// input are dropped.
std::vector<std::string> generate_variations(const std::string& centroid_text, size_t k,
                                             const VariationGenerator& generator);

struct AugmentReport {
    size_t mapped_public = 0;
    size_t generated = 0;
    size_t dropped = 0; // duplicates of existing surface forms or of the input
};

/// Full offline loop: map public to private, cluster the mapped texts,
/// generate variations per centroid, and attach every new surface form to
/// the canonical task its centroid maps to.
TaskCatalog build_augmented_catalog(const std::vector<std::string>& public_texts,
                                    const TaskCatalog& private_catalog,
                                    const Embedder& embedder, const AugmentConfig& config,
                                    AugmentReport* report = nullptr);

/// Every contiguous token n-gram that occurs in exactly one option (and is
/// not made of stop tokens alone) becomes an entry resolving to that option.
std::vector<ContextEntry> expand_partial_matches(const std::vector<std::string>& options);

/// Place engine_top at position 3 (1-based) of the default result list, or
/// at the end when there are fewer than 2 defaults; if it is already present
/// the list is returned unchanged. Output is capped at 10.
std::vector<std::string> inject_result(const std::vector<std::string>& default_results,
                                       const std::string& engine_top);

} // namespace asrfix
