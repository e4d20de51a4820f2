#include "asrfix/embedder.hpp"

#include "asrfix/errors.hpp"
#include "asrfix/text.hpp"

#include "httplib.h"
#include "json.hpp"

#include <cmath>
#include <cstdint>

namespace asrfix {

namespace {

// FNV-1a, 32-bit; stable across platforms.
uint32_t fnv1a(const std::string& s) {
    uint32_t h = 2166136261u;
    for (unsigned char c : s) {
        h ^= c;
        h *= 16777619u;
    }
    return h;
}

void l2_normalize(std::vector<float>& v) {
    double norm = 0.0;
    for (float x : v) norm += static_cast<double>(x) * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (float& x : v) x = static_cast<float>(x / norm);
}

} // namespace

std::vector<float> TrigramEmbedder::embed(const std::string& text) const {
    std::vector<float> v(dim_, 0.0f);
    std::string norm = normalize_text(text);
    if (norm.size() < 3) {
        if (!norm.empty()) v[fnv1a(norm) % dim_] += 1.0f;
    } else {
        for (size_t i = 0; i + 3 <= norm.size(); ++i)
            v[fnv1a(norm.substr(i, 3)) % dim_] += 1.0f;
    }
    l2_normalize(v);
    return v;
}

HttpEmbedder::HttpEmbedder(std::string host, int port, std::string path, size_t dim,
                           int timeout_seconds)
    : host_(std::move(host)), port_(port), path_(std::move(path)), dim_(dim),
      timeout_seconds_(timeout_seconds) {}

std::vector<float> HttpEmbedder::embed(const std::string& text) const {
    httplib::Client client(host_, port_);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);

    nlohmann::json body = {{"texts", {text}}};
    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res)
        throw RetrievalError("embedding service unreachable: " + host_ + ":" +
                             std::to_string(port_));
    if (res->status != 200)
        throw RetrievalError("embedding service returned status " +
                             std::to_string(res->status));
    try {
        auto json = nlohmann::json::parse(res->body);
        auto vectors = json.at("vectors");
        if (!vectors.is_array() || vectors.empty())
            throw RetrievalError("embedding service reply has no vectors");
        std::vector<float> v = vectors[0].get<std::vector<float>>();
        if (v.size() != dim_)
            throw RetrievalError("embedding service dimension mismatch: got " +
                                 std::to_string(v.size()) + ", expected " +
                                 std::to_string(dim_));
        l2_normalize(v);
        return v;
    } catch (const nlohmann::json::exception& e) {
        throw RetrievalError(std::string("malformed embedding service reply: ") + e.what());
    }
}

double cosine(const std::vector<float>& u, const std::vector<float>& v) {
    if (u.size() != v.size())
        throw InvalidInput("cosine: dimension mismatch");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
        dot += static_cast<double>(u[i]) * v[i];
        nu += static_cast<double>(u[i]) * u[i];
        nv += static_cast<double>(v[i]) * v[i];
    }
    if (nu == 0.0 || nv == 0.0)
        throw InvalidInput("cosine: zero vector has no defined similarity");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

} // namespace asrfix
