#pragma once

#include "asrfix/embedder.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace asrfix {

/// One canonical task and every surface form that resolves to it. The
/// canonical text is always among the surface forms.
struct TaskEntry {
    std::string id;
    std::string canonical_text;
    std::vector<std::string> surface_forms;
};

using TaskCatalog = std::vector<TaskEntry>;

/// Line-delimited JSON, one record per task: {"id", "title", "surface_forms"}.
TaskCatalog load_catalog(std::istream& in);
TaskCatalog load_catalog_file(const std::string& path);
void save_catalog(const TaskCatalog& catalog, std::ostream& out);

struct ScoredResult {
    std::string entry_id;
    std::string surface_form;
    double score = 0.0;
};

/// Immutable index over task surface forms: token-overlap inverted index for
/// candidate generation, unit embedding vectors for cosine scoring.
class SearchIndex {
public:
    struct Form {
        uint32_t entry = 0;
        std::string text;
    };

    /// Embed every surface form and index its tokens. Throws BuildError on
    /// duplicate ids or an empty catalog.
    static SearchIndex build(const TaskCatalog& catalog, const Embedder& embedder);

    /// Binary persisted form; little-endian throughout, float32 vectors.
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static SearchIndex load(std::istream& in);
    static SearchIndex load_file(const std::string& path);

    /// Token-overlap candidates scored by cosine(embed(query), vector).
    /// Results with score >= threshold, non-increasing, tie-broken by entry
    /// id, at most k. Throws InvalidInput on an empty query.
    std::vector<ScoredResult> search(const Embedder& embedder, const std::string& query,
                                     double threshold, size_t k = 10) const;

    size_t dim() const { return dim_; }
    const std::vector<TaskEntry>& entries() const { return entries_; }
    const std::vector<Form>& forms() const { return forms_; }

private:
    size_t dim_ = 0;
    std::vector<TaskEntry> entries_;
    std::vector<Form> forms_;
    std::vector<std::vector<float>> vectors_; // unit vector per form
    std::map<std::string, std::vector<uint32_t>> postings_;
};

} // namespace asrfix
