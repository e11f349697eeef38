#pragma once

#include "ragseed/errors.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ragseed {

enum class TokenSource { Candidate, Reference };

/// Whitespace tokens of one packet. Only candidates may be empty.
struct TokenSequence {
    std::vector<std::string> tokens;
    TokenSource source = TokenSource::Candidate;
};

class TokenizationError : public Error {
public:
    using Error::Error;
};

/// Normalizes CRLF and lone CR to LF, then splits on whitespace runs.
/// Header-name colons stay attached ("CSeq:" is one token). Throws
/// TokenizationError on non-UTF-8 input.
TokenSequence tokenize_packet(const std::string& raw,
                              TokenSource source = TokenSource::Candidate);

/// Geometric mean of modified n-gram precisions times the brevity penalty
/// min(1, exp(1 - |ref|/|cand|)). With smoothing, a zero match count for
/// n >= 2 is replaced by 1 before division. A candidate shorter than max_n
/// caps the effective order at its length. Empty candidate scores 0.
double bleu(const TokenSequence& candidate, const TokenSequence& reference,
            std::size_t max_n = 4, bool smoothing = true);

struct RougeVariant {
    enum class Kind { NGram, Lcs } kind = Kind::NGram;
    std::size_t n = 1;  // NGram only

    static RougeVariant ngram(std::size_t n) { return {Kind::NGram, n}; }
    static RougeVariant lcs() { return {Kind::Lcs, 0}; }
};

/// Recall-oriented overlap: clipped n-gram matches over reference n-gram
/// count, or LCS length over reference length for the L variant.
double rouge(const TokenSequence& candidate, const TokenSequence& reference,
             RougeVariant variant = RougeVariant::ngram(1));

/// Word-level Levenshtein distance (unit costs) divided by reference length.
/// Not clamped at 1.
double wer(const TokenSequence& candidate, const TokenSequence& reference);

struct MetricScores {
    double bleu = 0.0;
    double rouge = 0.0;
    double wer = 0.0;
};

} // namespace ragseed
