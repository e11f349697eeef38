#pragma once

#include "ragseed/corpus.hpp"
#include "ragseed/embedding.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ragseed {

struct StoreEntry {
    Chunk chunk;
    EmbeddingVector vector;
};

/// Immutable once built. Entries are kept in (doc_id, chunk index) order so
/// builds and tie-breaks are deterministic.
struct VectorStore {
    std::vector<StoreEntry> entries;
    std::size_t dimension = 0;
    std::string provider_fingerprint;
};

struct ScoredChunk {
    Chunk chunk;
    double score = 0.0;  // cosine similarity in [-1, 1]
    std::size_t rank = 0;  // 1-based
};

/// Embeds every chunk and assembles the store, entries sorted doc-major,
/// index-minor. An embed failure aborts the build naming the chunk.
VectorStore build_index(const std::vector<Chunk>& chunks,
                        const EmbeddingProviderConfig& provider);

/// Exact top-k by cosine similarity: embeds the query, scores every entry,
/// returns min(k, entries) results sorted by score descending, ties broken
/// by store entry order.
std::vector<ScoredChunk> retrieve(const VectorStore& store, const std::string& query,
                                  std::size_t k,
                                  const EmbeddingProviderConfig& provider);

/// Index file: one JSON header record {dimension, provider_fingerprint,
/// entry_count}, then one record per entry {doc_id, chunk_index, text, vector}.
std::string store_to_jsonl(const VectorStore& store);
VectorStore store_from_jsonl(const std::string& text);

void save_store(const VectorStore& store, const std::string& path);
VectorStore load_store(const std::string& path);

/// "<doc_id>#<index>", used in transcripts and observations.
std::string chunk_id(const Chunk& chunk);

} // namespace ragseed
