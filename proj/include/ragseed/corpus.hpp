#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ragseed {

/// One raw specification document, as read from disk.
struct RawDocument {
    std::string id;
    std::string text;
    std::string source_path;
};

/// Line-based cleaning rules for RFC-style plain text.
///
/// strip_page_furniture removes "[Page N]" footer lines, form-feed page-break
/// lines, and the running header line that follows a page break.
/// drop_sections holds case-insensitive regexes matched against section
/// heading lines (non-blank lines with no leading whitespace); a match deletes
/// the heading and everything up to the next heading.
/// collapse_blank_runs reduces runs of two or more blank lines to one.
struct CleaningRules {
    bool strip_page_furniture = false;
    std::vector<std::string> drop_sections;
    bool collapse_blank_runs = false;

    /// Default rule set for RFC text: page furniture plus front matter
    /// (table of contents, introduction, status, acknowledgements).
    static CleaningRules rfc_defaults();
};

/// A deletion made by clean(): byte offsets into the raw text (terminator
/// included) and the name of the rule that removed the span.
struct RemovedSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string rule;
};

struct CleanDocument {
    std::string id;
    std::string text;
    std::vector<RemovedSpan> removed_spans;
};

struct CharSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    bool operator==(const CharSpan&) const = default;
};

/// One retrieval unit. `text` may carry a character overlap prefix copied
/// from the previous chunk; token_count and char_span describe only the body
/// (the part owned by this chunk, offsets into the clean text).
struct Chunk {
    std::string doc_id;
    std::size_t index = 0;
    std::string text;
    std::size_t token_count = 0;
    CharSpan char_span;
};

/// Removes every line matched by the enabled rules, preserving the rest in
/// order. removed_spans records each deletion; applying the spans to the raw
/// text reproduces the clean text byte for byte.
CleanDocument clean(const RawDocument& raw, const CleaningRules& rules);

/// Splits the clean text into chunks of up to chunk_size whitespace tokens.
/// Every chunk after the first is prefixed with the final `overlap` characters
/// of the previous chunk's text; the prefix is excluded from token_count and
/// char_span. The last chunk may be short. An empty document yields no chunks.
std::vector<Chunk> chunk(const CleanDocument& doc, std::size_t chunk_size,
                         std::size_t overlap);

/// Line-delimited corpus file: one JSON record per chunk.
std::string corpus_to_jsonl(const std::vector<Chunk>& chunks);
std::vector<Chunk> corpus_from_jsonl(const std::string& text);

} // namespace ragseed
