#include "ragseed/embedding.hpp"

#include "ragseed/errors.hpp"
#include "ragseed/http.hpp"
#include "ragseed/util.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace ragseed {

std::string EmbeddingProviderConfig::fingerprint() const {
    if (kind == ProviderKind::DeterministicOffline) {
        return "offline:fnv1a64:d" + std::to_string(dimension);
    }
    return "remote:" + model_name + ":d" + std::to_string(dimension);
}

namespace {

void check_remote_fields(const EmbeddingProviderConfig& p) {
    if (p.endpoint_url.empty() || p.model_name.empty()) {
        throw ConfigError("remote embedding provider requires endpoint_url and model_name");
    }
}

EmbeddingVector embed_offline(const std::string& text, std::size_t dim) {
    std::vector<double> buckets(dim, 0.0);
    for (const auto& tok : whitespace_tokens(text)) {
        buckets[fnv1a64(tok) % dim] += 1.0;
    }
    double norm_sq = 0.0;
    for (double v : buckets) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    if (norm > 0.0) {
        for (double& v : buckets) v /= norm;
    }
    return EmbeddingVector{std::move(buckets)};
}

EmbeddingVector embed_remote(const std::string& text,
                             const EmbeddingProviderConfig& p) {
    check_remote_fields(p);
    nlohmann::json body = {{"model", p.model_name}, {"input", text}};
    const std::string reply = http_post_json(
        resolve_endpoint(p.endpoint_url, kEmbedBaseUrlEnv), body.dump(),
        bearer_from_env(kEmbedApiKeyEnv));

    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(reply);
        auto vec = parsed.at("data").at(0).at("embedding").get<std::vector<double>>();
        if (vec.size() != p.dimension) {
            throw ConfigError("embedding endpoint returned dimension " +
                              std::to_string(vec.size()) + ", configured " +
                              std::to_string(p.dimension));
        }
        return EmbeddingVector{std::move(vec)};
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("malformed embedding response: ") + e.what(),
                            /*retryable=*/false);
    }
}

} // namespace

EmbeddingVector embed_text(const std::string& text,
                           const EmbeddingProviderConfig& provider) {
    if (text.empty()) throw ArgumentError("embed_text: text is empty");
    if (provider.dimension < 1) throw ConfigError("embedding dimension must be >= 1");
    if (provider.kind == ProviderKind::DeterministicOffline) {
        return embed_offline(text, provider.dimension);
    }
    return embed_remote(text, provider);
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw ArgumentError("cosine_similarity: dimension mismatch (" +
                            std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) +
                            ")");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw ArgumentError("cosine_similarity: undefined for a zero vector");
    }
    double sim = dot / (std::sqrt(na) * std::sqrt(nb));
    if (sim > 1.0) sim = 1.0;
    if (sim < -1.0) sim = -1.0;
    return sim;
}

} // namespace ragseed
