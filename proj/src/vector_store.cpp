#include "ragseed/vector_store.hpp"

#include "ragseed/errors.hpp"
#include "ragseed/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace ragseed {

std::string chunk_id(const Chunk& chunk) {
    return chunk.doc_id + "#" + std::to_string(chunk.index);
}

VectorStore build_index(const std::vector<Chunk>& chunks,
                        const EmbeddingProviderConfig& provider) {
    if (chunks.empty()) throw ArgumentError("build_index: no chunks");

    std::vector<const Chunk*> ordered;
    ordered.reserve(chunks.size());
    for (const auto& ch : chunks) ordered.push_back(&ch);
    std::stable_sort(ordered.begin(), ordered.end(), [](const Chunk* a, const Chunk* b) {
        return a->doc_id != b->doc_id ? a->doc_id < b->doc_id : a->index < b->index;
    });

    VectorStore store;
    store.dimension = provider.dimension;
    store.provider_fingerprint = provider.fingerprint();
    store.entries.reserve(ordered.size());
    for (const Chunk* ch : ordered) {
        try {
            store.entries.push_back({*ch, embed_text(ch->text, provider)});
        } catch (const Error& e) {
            throw ProviderError("build_index: embedding chunk " + chunk_id(*ch) +
                                    " failed: " + e.what(),
                                /*retryable=*/false);
        }
    }
    return store;
}

std::vector<ScoredChunk> retrieve(const VectorStore& store, const std::string& query,
                                  std::size_t k,
                                  const EmbeddingProviderConfig& provider) {
    if (store.entries.empty()) throw ArgumentError("retrieve: store is empty");
    if (k < 1) throw ArgumentError("retrieve: k must be positive");
    if (provider.fingerprint() != store.provider_fingerprint) {
        throw ConfigError("retrieve: provider fingerprint '" + provider.fingerprint() +
                          "' does not match store '" + store.provider_fingerprint + "'");
    }

    const EmbeddingVector q = embed_text(query, provider);

    std::vector<std::pair<double, std::size_t>> scored;  // (score, entry position)
    scored.reserve(store.entries.size());
    for (std::size_t i = 0; i < store.entries.size(); ++i) {
        scored.emplace_back(cosine_similarity(q, store.entries[i].vector), i);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    const std::size_t n = std::min(k, scored.size());
    std::vector<ScoredChunk> out;
    out.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        out.push_back({store.entries[scored[r].second].chunk, scored[r].first, r + 1});
    }
    return out;
}

std::string store_to_jsonl(const VectorStore& store) {
    nlohmann::json header = {
        {"dimension", store.dimension},
        {"provider_fingerprint", store.provider_fingerprint},
        {"entry_count", store.entries.size()},
    };
    std::string out = header.dump();
    out += '\n';
    for (const auto& entry : store.entries) {
        nlohmann::json rec = {
            {"doc_id", entry.chunk.doc_id},
            {"chunk_index", entry.chunk.index},
            {"text", entry.chunk.text},
            {"vector", entry.vector.values},
        };
        out += rec.dump();
        out += '\n';
    }
    return out;
}

VectorStore store_from_jsonl(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw IoError("index file is empty");

    VectorStore store;
    std::size_t declared = 0;
    try {
        nlohmann::json header = nlohmann::json::parse(lines[0]);
        store.dimension = header.at("dimension").get<std::size_t>();
        store.provider_fingerprint = header.at("provider_fingerprint").get<std::string>();
        declared = header.at("entry_count").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("index header is invalid: ") + e.what());
    }

    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        try {
            nlohmann::json rec = nlohmann::json::parse(lines[i]);
            StoreEntry entry;
            entry.chunk.doc_id = rec.at("doc_id").get<std::string>();
            entry.chunk.index = rec.at("chunk_index").get<std::size_t>();
            entry.chunk.text = rec.at("text").get<std::string>();
            entry.chunk.token_count = whitespace_tokens(entry.chunk.text).size();
            entry.chunk.char_span = {0, entry.chunk.text.size()};
            entry.vector.values = rec.at("vector").get<std::vector<double>>();
            if (entry.vector.dim() != store.dimension) {
                throw IoError("index entry " + std::to_string(i) + " has dimension " +
                              std::to_string(entry.vector.dim()) + ", header says " +
                              std::to_string(store.dimension));
            }
            store.entries.push_back(std::move(entry));
        } catch (const nlohmann::json::exception& e) {
            throw IoError("index line " + std::to_string(i + 1) + " is invalid: " +
                          e.what());
        }
    }
    if (store.entries.size() != declared) {
        throw IoError("index declares " + std::to_string(declared) + " entries, found " +
                      std::to_string(store.entries.size()));
    }
    return store;
}

void save_store(const VectorStore& store, const std::string& path) {
    write_file(path, store_to_jsonl(store));
}

VectorStore load_store(const std::string& path) {
    return store_from_jsonl(read_file(path));
}

} // namespace ragseed
