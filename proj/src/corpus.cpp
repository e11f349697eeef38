#include "ragseed/corpus.hpp"

#include "ragseed/errors.hpp"
#include "ragseed/util.hpp"

#include <nlohmann/json.hpp>

#include <regex>

namespace ragseed {

namespace {

struct Line {
    std::size_t raw_start;   // offset of first byte in the raw text
    std::size_t raw_end;     // offset one past the terminator
    std::string content;     // without terminator
    std::string removed_by;  // empty while the line survives
};

std::vector<Line> split_raw_lines(const std::string& text) {
    std::vector<Line> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            if (i == text.size() && i == start) break; // no trailing fragment
            std::size_t content_end = i;
            if (content_end > start && text[content_end - 1] == '\r') --content_end;
            Line ln;
            ln.raw_start = start;
            ln.raw_end = (i == text.size()) ? i : i + 1;
            ln.content = text.substr(start, content_end - start);
            lines.push_back(std::move(ln));
            start = i + 1;
        }
    }
    return lines;
}

bool is_blank(const std::string& s) {
    return trim(s).empty();
}

bool has_form_feed(const std::string& s) {
    return s.find('\f') != std::string::npos;
}

bool is_heading(const std::string& s) {
    return !s.empty() && !std::isspace(static_cast<unsigned char>(s[0]));
}

const std::regex& page_footer_re() {
    static const std::regex re(R"(\[Page [0-9]+\]\s*$)");
    return re;
}

void strip_page_furniture_pass(std::vector<Line>& lines) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!lines[i].removed_by.empty()) continue;
        if (std::regex_search(lines[i].content, page_footer_re())) {
            lines[i].removed_by = "page-furniture";
        } else if (has_form_feed(lines[i].content)) {
            lines[i].removed_by = "page-furniture";
            // the running header sits on the first non-blank of the next two lines
            for (std::size_t j = i + 1; j < lines.size() && j <= i + 2; ++j) {
                if (is_blank(lines[j].content)) continue;
                lines[j].removed_by = "page-furniture";
                break;
            }
        }
    }
}

void drop_sections_pass(std::vector<Line>& lines,
                        const std::vector<std::string>& patterns) {
    std::vector<std::pair<std::regex, std::string>> compiled;
    compiled.reserve(patterns.size());
    for (const auto& p : patterns) {
        try {
            compiled.emplace_back(std::regex(p, std::regex::icase), p);
        } catch (const std::regex_error& e) {
            throw ConfigError("invalid drop_sections pattern '" + p + "': " + e.what());
        }
    }
    if (compiled.empty()) return;

    bool dropping = false;
    std::string active_rule;
    for (auto& ln : lines) {
        if (!ln.removed_by.empty()) continue;
        if (is_heading(ln.content)) {
            dropping = false;
            for (const auto& [re, pat] : compiled) {
                if (std::regex_search(ln.content, re)) {
                    dropping = true;
                    active_rule = "drop-section:" + pat;
                    break;
                }
            }
        }
        if (dropping) ln.removed_by = active_rule;
    }
}

void collapse_blank_runs_pass(std::vector<Line>& lines) {
    std::size_t surviving_blanks = 0;
    for (auto& ln : lines) {
        if (!ln.removed_by.empty()) continue;
        if (is_blank(ln.content)) {
            ++surviving_blanks;
            if (surviving_blanks >= 2) ln.removed_by = "blank-run";
        } else {
            surviving_blanks = 0;
        }
    }
}

} // namespace

CleaningRules CleaningRules::rfc_defaults() {
    CleaningRules rules;
    rules.strip_page_furniture = true;
    rules.drop_sections = {
        R"(^Table of Contents\b)",
        R"(^Status of this Memo\b)",
        R"(^[0-9]+(\.[0-9]+)*\s+Introduction\b)",
        R"(^(Full )?Copyright\b)",
        R"(^Acknowledg)",
    };
    rules.collapse_blank_runs = true;
    return rules;
}

CleanDocument clean(const RawDocument& raw, const CleaningRules& rules) {
    if (raw.text.empty()) throw ArgumentError("clean: document text is empty");

    auto lines = split_raw_lines(raw.text);
    if (rules.strip_page_furniture) strip_page_furniture_pass(lines);
    drop_sections_pass(lines, rules.drop_sections);
    if (rules.collapse_blank_runs) collapse_blank_runs_pass(lines);

    CleanDocument doc;
    doc.id = raw.id;
    for (const auto& ln : lines) {
        if (ln.removed_by.empty()) {
            doc.text.append(raw.text, ln.raw_start, ln.raw_end - ln.raw_start);
        } else if (!doc.removed_spans.empty() &&
                   doc.removed_spans.back().end == ln.raw_start &&
                   doc.removed_spans.back().rule == ln.removed_by) {
            doc.removed_spans.back().end = ln.raw_end;
        } else {
            doc.removed_spans.push_back({ln.raw_start, ln.raw_end, ln.removed_by});
        }
    }
    return doc;
}

std::vector<Chunk> chunk(const CleanDocument& doc, std::size_t chunk_size,
                         std::size_t overlap) {
    if (chunk_size < 1) throw ArgumentError("chunk: chunk_size must be >= 1");

    const auto spans = token_spans(doc.text);
    std::vector<Chunk> chunks;
    if (spans.empty()) return chunks;

    const std::size_t n_chunks = (spans.size() + chunk_size - 1) / chunk_size;
    chunks.reserve(n_chunks);
    for (std::size_t c = 0; c < n_chunks; ++c) {
        const std::size_t first = c * chunk_size;
        const std::size_t last = std::min(first + chunk_size, spans.size()) - 1;

        Chunk ch;
        ch.doc_id = doc.id;
        ch.index = c;
        ch.token_count = last - first + 1;
        ch.char_span = {spans[first].first, spans[last].second};
        std::string body =
            doc.text.substr(ch.char_span.start, ch.char_span.end - ch.char_span.start);

        const bool full = ch.token_count == chunk_size;
        if (full && overlap >= body.size()) {
            throw ArgumentError(
                "chunk: overlap (" + std::to_string(overlap) +
                ") must be smaller than every full chunk; chunk " + std::to_string(c) +
                " of '" + doc.id + "' has only " + std::to_string(body.size()) +
                " characters");
        }

        if (c == 0 || overlap == 0) {
            ch.text = std::move(body);
        } else {
            const std::string& prev = chunks.back().text;
            const std::size_t take = std::min(overlap, prev.size());
            ch.text = prev.substr(prev.size() - take) + body;
        }
        chunks.push_back(std::move(ch));
    }
    return chunks;
}

std::string corpus_to_jsonl(const std::vector<Chunk>& chunks) {
    std::string out;
    for (const auto& ch : chunks) {
        nlohmann::json rec = {
            {"doc_id", ch.doc_id},
            {"index", ch.index},
            {"text", ch.text},
            {"token_count", ch.token_count},
            {"char_span", {ch.char_span.start, ch.char_span.end}},
        };
        out += rec.dump();
        out += '\n';
    }
    return out;
}

std::vector<Chunk> corpus_from_jsonl(const std::string& text) {
    std::vector<Chunk> chunks;
    std::size_t line_no = 0;
    for (const auto& line : split_lines(text)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
            Chunk ch;
            ch.doc_id = rec.at("doc_id").get<std::string>();
            ch.index = rec.at("index").get<std::size_t>();
            ch.text = rec.at("text").get<std::string>();
            ch.token_count = rec.at("token_count").get<std::size_t>();
            ch.char_span = {rec.at("char_span").at(0).get<std::size_t>(),
                            rec.at("char_span").at(1).get<std::size_t>()};
            chunks.push_back(std::move(ch));
        } catch (const nlohmann::json::exception& e) {
            throw IoError("corpus line " + std::to_string(line_no) +
                          " is not a valid chunk record: " + e.what());
        }
    }
    return chunks;
}

} // namespace ragseed
