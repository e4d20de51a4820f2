#include "asrfix/retrieval.hpp"

#include "asrfix/errors.hpp"
#include "asrfix/text.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace asrfix {

namespace {

constexpr char kMagic[8] = {'A', 'S', 'R', 'X', 'I', 'D', 'X', '1'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& out, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw ParseError("truncated index file");
    return static_cast<uint32_t>(b[0]) | static_cast<uint32_t>(b[1]) << 8 |
           static_cast<uint32_t>(b[2]) << 16 | static_cast<uint32_t>(b[3]) << 24;
}

void write_f32(std::ostream& out, float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    write_u32(out, bits);
}

float read_f32(std::istream& in) {
    uint32_t bits = read_u32(in);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

void write_string(std::ostream& out, const std::string& s) {
    write_u32(out, static_cast<uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
    uint32_t len = read_u32(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) throw ParseError("truncated index file");
    return s;
}

} // namespace

TaskCatalog load_catalog(std::istream& in) {
    TaskCatalog catalog;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad catalog record: ") + e.what(), lineno);
        }
        TaskEntry entry;
        entry.id = record.at("id").get<std::string>();
        entry.canonical_text = record.at("title").get<std::string>();
        if (record.contains("surface_forms"))
            entry.surface_forms = record["surface_forms"].get<std::vector<std::string>>();
        if (std::find(entry.surface_forms.begin(), entry.surface_forms.end(),
                      entry.canonical_text) == entry.surface_forms.end())
            entry.surface_forms.insert(entry.surface_forms.begin(), entry.canonical_text);
        catalog.push_back(std::move(entry));
    }
    return catalog;
}

TaskCatalog load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open catalog file: " + path);
    return load_catalog(in);
}

void save_catalog(const TaskCatalog& catalog, std::ostream& out) {
    for (const auto& entry : catalog) {
        nlohmann::ordered_json record;
        record["id"] = entry.id;
        record["title"] = entry.canonical_text;
        record["surface_forms"] = entry.surface_forms;
        out << record.dump() << '\n';
    }
}

SearchIndex SearchIndex::build(const TaskCatalog& catalog, const Embedder& embedder) {
    if (catalog.empty()) throw BuildError("cannot build an index over an empty catalog");

    SearchIndex index;
    index.dim_ = embedder.dim();
    index.entries_ = catalog;

    std::unordered_set<std::string> seen_ids;
    for (uint32_t e = 0; e < index.entries_.size(); ++e) {
        auto& entry = index.entries_[e];
        if (!seen_ids.insert(entry.id).second)
            throw BuildError("duplicate task id in catalog: " + entry.id);
        if (std::find(entry.surface_forms.begin(), entry.surface_forms.end(),
                      entry.canonical_text) == entry.surface_forms.end())
            entry.surface_forms.insert(entry.surface_forms.begin(), entry.canonical_text);
        for (const auto& form : entry.surface_forms) {
            if (form.empty()) throw BuildError("empty surface form in task " + entry.id);
            uint32_t form_idx = static_cast<uint32_t>(index.forms_.size());
            index.forms_.push_back({e, form});
            index.vectors_.push_back(embedder.embed(form));
            for (const auto& tok : tokenize(form)) {
                auto& posting = index.postings_[tok];
                if (posting.empty() || posting.back() != form_idx)
                    posting.push_back(form_idx);
            }
        }
    }
    return index;
}

std::vector<ScoredResult> SearchIndex::search(const Embedder& embedder,
                                              const std::string& query, double threshold,
                                              size_t k) const {
    std::vector<std::string> tokens = tokenize(query);
    if (tokens.empty()) throw InvalidInput("empty search query");
    if (embedder.dim() != dim_)
        throw RetrievalError("embedder dimension " + std::to_string(embedder.dim()) +
                             " does not match index dimension " + std::to_string(dim_));

    std::set<uint32_t> candidates;
    for (const auto& tok : tokens) {
        auto it = postings_.find(tok);
        if (it != postings_.end())
            candidates.insert(it->second.begin(), it->second.end());
    }
    if (candidates.empty()) // lexical recall fallback: score everything
        for (uint32_t f = 0; f < forms_.size(); ++f) candidates.insert(f);

    std::vector<float> qv = embedder.embed(query);
    std::vector<std::pair<double, uint32_t>> scored;
    for (uint32_t f : candidates) {
        double score = cosine(qv, vectors_[f]);
        if (score >= threshold) scored.emplace_back(score, f);
    }
    std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        const auto& ea = entries_[forms_[a.second].entry].id;
        const auto& eb = entries_[forms_[b.second].entry].id;
        if (ea != eb) return ea < eb;
        return a.second < b.second;
    });

    std::vector<ScoredResult> results;
    std::set<std::pair<uint32_t, std::string>> seen;
    for (const auto& [score, f] : scored) {
        if (results.size() >= k) break;
        if (!seen.insert({forms_[f].entry, forms_[f].text}).second) continue;
        results.push_back({entries_[forms_[f].entry].id, forms_[f].text, score});
    }
    return results;
}

void SearchIndex::save(std::ostream& out) const {
    out.write(kMagic, 8);
    write_u32(out, kVersion);
    write_u32(out, static_cast<uint32_t>(dim_));
    write_u32(out, static_cast<uint32_t>(entries_.size()));
    write_u32(out, static_cast<uint32_t>(forms_.size()));
    write_u32(out, static_cast<uint32_t>(postings_.size()));
    for (const auto& entry : entries_) {
        write_string(out, entry.id);
        write_string(out, entry.canonical_text);
        write_u32(out, static_cast<uint32_t>(entry.surface_forms.size()));
        for (const auto& form : entry.surface_forms) write_string(out, form);
    }
    for (const auto& form : forms_) {
        write_u32(out, form.entry);
        write_string(out, form.text);
    }
    for (const auto& vec : vectors_)
        for (float x : vec) write_f32(out, x);
    for (const auto& [token, posting] : postings_) {
        write_string(out, token);
        write_u32(out, static_cast<uint32_t>(posting.size()));
        for (uint32_t f : posting) write_u32(out, f);
    }
}

void SearchIndex::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write index file: " + path);
    save(out);
}

SearchIndex SearchIndex::load(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw ParseError("not an index file (bad magic)");
    uint32_t version = read_u32(in);
    if (version != kVersion)
        throw ParseError("unsupported index version " + std::to_string(version));

    SearchIndex index;
    index.dim_ = read_u32(in);
    uint32_t n_entries = read_u32(in);
    uint32_t n_forms = read_u32(in);
    uint32_t n_tokens = read_u32(in);
    for (uint32_t e = 0; e < n_entries; ++e) {
        TaskEntry entry;
        entry.id = read_string(in);
        entry.canonical_text = read_string(in);
        uint32_t n = read_u32(in);
        for (uint32_t s = 0; s < n; ++s) entry.surface_forms.push_back(read_string(in));
        index.entries_.push_back(std::move(entry));
    }
    for (uint32_t f = 0; f < n_forms; ++f) {
        Form form;
        form.entry = read_u32(in);
        form.text = read_string(in);
        index.forms_.push_back(std::move(form));
    }
    for (uint32_t f = 0; f < n_forms; ++f) {
        std::vector<float> vec(index.dim_);
        for (auto& x : vec) x = read_f32(in);
        index.vectors_.push_back(std::move(vec));
    }
    for (uint32_t t = 0; t < n_tokens; ++t) {
        std::string token = read_string(in);
        uint32_t count = read_u32(in);
        std::vector<uint32_t> posting(count);
        for (auto& f : posting) f = read_u32(in);
        index.postings_.emplace(std::move(token), std::move(posting));
    }
    return index;
}

SearchIndex SearchIndex::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open index file: " + path);
    return load(in);
}

} // namespace asrfix
