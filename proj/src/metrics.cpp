#include "ragseed/metrics.hpp"

#include "ragseed/util.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ragseed {

TokenSequence tokenize_packet(const std::string& raw, TokenSource source) {
    if (!is_valid_utf8(raw)) {
        throw TokenizationError("packet is not valid UTF-8");
    }
    std::string normalized;
    normalized.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == '\r') {
            normalized.push_back('\n');
            if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
        } else {
            normalized.push_back(raw[i]);
        }
    }
    return TokenSequence{whitespace_tokens(normalized), source};
}

namespace {

using NGram = std::vector<std::string>;

std::map<NGram, std::size_t> ngram_counts(const std::vector<std::string>& tokens,
                                          std::size_t n) {
    std::map<NGram, std::size_t> counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        counts[NGram(tokens.begin() + i, tokens.begin() + i + n)] += 1;
    }
    return counts;
}

std::size_t clipped_matches(const std::vector<std::string>& cand,
                            const std::vector<std::string>& ref, std::size_t n) {
    const auto cand_counts = ngram_counts(cand, n);
    const auto ref_counts = ngram_counts(ref, n);
    std::size_t matches = 0;
    for (const auto& [gram, count] : cand_counts) {
        const auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matches += std::min(count, it->second);
    }
    return matches;
}

} // namespace

double bleu(const TokenSequence& candidate, const TokenSequence& reference,
            std::size_t max_n, bool smoothing) {
    if (reference.tokens.empty()) throw ArgumentError("bleu: reference is empty");
    if (max_n < 1 || max_n > 4) throw ArgumentError("bleu: max_n must be in [1, 4]");
    const auto& cand = candidate.tokens;
    const auto& ref = reference.tokens;
    if (cand.empty()) return 0.0;

    const std::size_t effective_n = std::min(max_n, cand.size());
    double log_sum = 0.0;
    for (std::size_t n = 1; n <= effective_n; ++n) {
        std::size_t hits = clipped_matches(cand, ref, n);
        const std::size_t total = cand.size() - n + 1;
        if (hits == 0) {
            if (!smoothing || n == 1) return 0.0;
            hits = 1;
        }
        log_sum += std::log(static_cast<double>(hits) / static_cast<double>(total));
    }
    const double geo_mean = std::exp(log_sum / static_cast<double>(effective_n));

    const double ratio =
        static_cast<double>(ref.size()) / static_cast<double>(cand.size());
    const double brevity = std::min(1.0, std::exp(1.0 - ratio));
    return geo_mean * brevity;
}

double rouge(const TokenSequence& candidate, const TokenSequence& reference,
             RougeVariant variant) {
    const auto& cand = candidate.tokens;
    const auto& ref = reference.tokens;
    if (ref.empty()) throw ArgumentError("rouge: reference is empty");

    if (variant.kind == RougeVariant::Kind::Lcs) {
        // LCS recall via the classic DP table
        const std::size_t nc = cand.size(), nr = ref.size();
        std::vector<std::size_t> prev(nr + 1, 0), cur(nr + 1, 0);
        for (std::size_t i = 1; i <= nc; ++i) {
            for (std::size_t j = 1; j <= nr; ++j) {
                cur[j] = cand[i - 1] == ref[j - 1] ? prev[j - 1] + 1
                                                   : std::max(prev[j], cur[j - 1]);
            }
            std::swap(prev, cur);
        }
        return static_cast<double>(prev[nr]) / static_cast<double>(nr);
    }

    const std::size_t n = variant.n;
    if (n < 1) throw ArgumentError("rouge: n must be >= 1");
    if (ref.size() < n) {
        throw ArgumentError("rouge: reference shorter than n (" +
                            std::to_string(ref.size()) + " < " + std::to_string(n) + ")");
    }
    const std::size_t hits = clipped_matches(cand, ref, n);
    const std::size_t ref_total = ref.size() - n + 1;
    return static_cast<double>(hits) / static_cast<double>(ref_total);
}

double wer(const TokenSequence& candidate, const TokenSequence& reference) {
    const auto& cand = candidate.tokens;
    const auto& ref = reference.tokens;
    if (ref.empty()) throw ArgumentError("wer: reference is empty");

    // word-level Levenshtein, unit costs, two rolling rows
    const std::size_t nc = cand.size(), nr = ref.size();
    std::vector<std::size_t> prev(nr + 1), cur(nr + 1);
    for (std::size_t j = 0; j <= nr; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= nc; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= nr; ++j) {
            const std::size_t sub = prev[j - 1] + (cand[i - 1] == ref[j - 1] ? 0 : 1);
            cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return static_cast<double>(prev[nr]) / static_cast<double>(nr);
}

} // namespace ragseed
