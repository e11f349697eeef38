#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ragseed {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
};

enum class ProviderKind { Remote, DeterministicOffline };

/// Which embedder to use. The remote kind speaks the usual embeddings wire
/// shape ({model, input} -> {data: [{embedding}]}); the offline kind is a
/// hash-bucketed token counter, reproducible with no network.
struct EmbeddingProviderConfig {
    ProviderKind kind = ProviderKind::DeterministicOffline;
    std::string endpoint_url;  // remote only
    std::string model_name;    // remote only
    std::size_t dimension = 1536;

    /// Identifies the embedder for store compatibility checks.
    std::string fingerprint() const;
};

/// Embeds one text with the configured provider. The offline provider hashes
/// each whitespace token into one of `dimension` buckets, counts, and
/// normalizes the count vector to unit length.
EmbeddingVector embed_text(const std::string& text,
                           const EmbeddingProviderConfig& provider);

/// dot(a,b) / (|a|*|b|). Throws on dimension mismatch or a zero vector.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

/// Name of the environment variable holding the embedding API credential.
inline constexpr const char* kEmbedApiKeyEnv = "RAGSEED_EMBED_API_KEY";
/// Optional base-URL override for the embedding endpoint.
inline constexpr const char* kEmbedBaseUrlEnv = "RAGSEED_EMBED_BASE_URL";

} // namespace ragseed
