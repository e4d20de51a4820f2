#pragma once

#include <memory>
#include <string>
#include <vector>

namespace asrfix {

/// Text-to-unit-vector contract. Implementations must be deterministic and
/// return L2-normalized vectors of a fixed dimension.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual size_t dim() const = 0;
    virtual std::vector<float> embed(const std::string& text) const = 0;
};

/// Default embedder: character trigrams of the normalized text hashed into
/// fixed buckets with term-frequency weights, L2-normalized. Needs no model
/// and never fails.
class TrigramEmbedder : public Embedder {
public:
    explicit TrigramEmbedder(size_t dim = 256) : dim_(dim) {}
    size_t dim() const override { return dim_; }
    std::vector<float> embed(const std::string& text) const override;

private:
    size_t dim_;
};

/// Client for an external embedding service speaking
/// POST {"texts": [...]} -> {"vectors": [[...], ...]}. Throws RetrievalError
/// on transport failures, timeouts, or malformed replies.
class HttpEmbedder : public Embedder {
public:
    HttpEmbedder(std::string host, int port, std::string path, size_t dim,
                 int timeout_seconds = 5);
    size_t dim() const override { return dim_; }
    std::vector<float> embed(const std::string& text) const override;

private:
    std::string host_;
    int port_;
    std::string path_;
    size_t dim_;
    int timeout_seconds_;
};

/// Cosine similarity dot(u,v)/(|u||v|). Throws InvalidInput on dimension
/// mismatch or a zero vector.
double cosine(const std::vector<float>& u, const std::vector<float>& v);

} // namespace asrfix
