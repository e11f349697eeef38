#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ragseed/errors.hpp"
#include "ragseed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace ragseed;

namespace {

TokenSequence cand(std::vector<std::string> tokens) {
    return TokenSequence{std::move(tokens), TokenSource::Candidate};
}

TokenSequence ref(std::vector<std::string> tokens) {
    return TokenSequence{std::move(tokens), TokenSource::Reference};
}

// Memoized recursive edit distance, written independently of the rolling-row
// implementation under test.
std::size_t edit_distance_rec(const std::vector<std::string>& a,
                              const std::vector<std::string>& b, std::size_t i,
                              std::size_t j,
                              std::map<std::pair<std::size_t, std::size_t>,
                                       std::size_t>& memo) {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    const auto key = std::make_pair(i, j);
    const auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::size_t best = edit_distance_rec(a, b, i + 1, j + 1, memo) +
                       (a[i] == b[j] ? 0 : 1);
    best = std::min(best, edit_distance_rec(a, b, i + 1, j, memo) + 1);
    best = std::min(best, edit_distance_rec(a, b, i, j + 1, memo) + 1);
    memo[key] = best;
    return best;
}

std::size_t edit_distance_oracle(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    return edit_distance_rec(a, b, 0, 0, memo);
}

// Positional n-gram scan: for each candidate n-gram position, greedily pair it
// with an unused reference position holding the same n-gram. The pair count
// equals the clipped match count.
std::size_t clipped_matches_oracle(const std::vector<std::string>& c,
                                   const std::vector<std::string>& r,
                                   std::size_t n) {
    if (c.size() < n || r.size() < n) return 0;
    std::vector<bool> used(r.size() - n + 1, false);
    std::size_t matches = 0;
    for (std::size_t i = 0; i + n <= c.size(); ++i) {
        for (std::size_t j = 0; j + n <= r.size(); ++j) {
            if (used[j]) continue;
            if (std::equal(c.begin() + i, c.begin() + i + n, r.begin() + j)) {
                used[j] = true;
                ++matches;
                break;
            }
        }
    }
    return matches;
}

double bleu_oracle(const std::vector<std::string>& c,
                   const std::vector<std::string>& r, std::size_t max_n,
                   bool smoothing) {
    if (c.empty()) return 0.0;
    const std::size_t effective_n = std::min(max_n, c.size());
    double product = 1.0;
    for (std::size_t n = 1; n <= effective_n; ++n) {
        std::size_t hits = clipped_matches_oracle(c, r, n);
        if (hits == 0) {
            if (!smoothing || n == 1) return 0.0;
            hits = 1;
        }
        product *= static_cast<double>(hits) /
                   static_cast<double>(c.size() - n + 1);
    }
    const double geo = std::pow(product, 1.0 / static_cast<double>(effective_n));
    const double ratio = static_cast<double>(r.size()) / static_cast<double>(c.size());
    return geo * std::min(1.0, std::exp(1.0 - ratio));
}

std::size_t lcs_oracle(const std::vector<std::string>& a,
                       const std::vector<std::string>& b, std::size_t i,
                       std::size_t j,
                       std::map<std::pair<std::size_t, std::size_t>,
                                std::size_t>& memo) {
    if (i == a.size() || j == b.size()) return 0;
    const auto key = std::make_pair(i, j);
    const auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::size_t best;
    if (a[i] == b[j]) {
        best = lcs_oracle(a, b, i + 1, j + 1, memo) + 1;
    } else {
        best = std::max(lcs_oracle(a, b, i + 1, j, memo),
                        lcs_oracle(a, b, i, j + 1, memo));
    }
    memo[key] = best;
    return best;
}

} // namespace

TEST_CASE("tokenize_packet splits on whitespace and keeps header colons") {
    const auto seq = tokenize_packet("PLAY rtsp://s/1 RTSP/1.0\r\nCSeq: 4\r\n\r\n");
    CHECK(seq.tokens == std::vector<std::string>{"PLAY", "rtsp://s/1", "RTSP/1.0",
                                                 "CSeq:", "4"});
    CHECK(seq.source == TokenSource::Candidate);
    CHECK(tokenize_packet("x", TokenSource::Reference).source ==
          TokenSource::Reference);
}

TEST_CASE("tokenize_packet normalizes CRLF, CR, and LF identically") {
    const auto crlf = tokenize_packet("a\r\nb c");
    const auto lf = tokenize_packet("a\nb c");
    const auto cr = tokenize_packet("a\rb c");
    CHECK(crlf.tokens == lf.tokens);
    CHECK(cr.tokens == lf.tokens);
    CHECK(lf.tokens == std::vector<std::string>{"a", "b", "c"});
    CHECK(tokenize_packet("").tokens.empty());
    CHECK(tokenize_packet(" \t \r\n ").tokens.empty());
}

TEST_CASE("tokenize_packet rejects non-UTF-8 input") {
    CHECK_THROWS_AS(tokenize_packet(std::string("\xff\xfe", 2)), TokenizationError);
    CHECK_THROWS_AS(tokenize_packet(std::string("ok \xc0\xaf", 5)), TokenizationError);
    // multi-byte UTF-8 passes through
    CHECK(tokenize_packet("caf\xc3\xa9 bar").tokens.size() == 2);
}

TEST_CASE("bleu scores identity as 1") {
    const auto x = cand({"SETUP", "rtsp://x", "RTSP/1.0", "CSeq:", "1"});
    const auto y = ref({"SETUP", "rtsp://x", "RTSP/1.0", "CSeq:", "1"});
    CHECK(bleu(x, y) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bleu hand-computed values") {
    // p1 = 1, p2 = 1/2, equal lengths: sqrt(0.5)
    CHECK(bleu(cand({"a", "b", "c"}), ref({"b", "c", "a"}), 2) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    // short candidate: brevity penalty exp(1 - 2/1) = exp(-1)
    CHECK(bleu(cand({"a"}), ref({"a", "b"})) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    // clipping: "a a a" vs "a b" gives p1 = 1/3, candidate longer so brevity 1
    CHECK(bleu(cand({"a", "a", "a"}), ref({"a", "b"}), 1) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // smoothing substitutes 1 for the zero trigram count
    CHECK(bleu(cand({"a", "b", "c"}), ref({"b", "c", "a"}), 3, true) ==
          doctest::Approx(std::pow(0.5, 1.0 / 3.0)).epsilon(1e-12));
    CHECK(bleu(cand({"a", "b", "c"}), ref({"b", "c", "a"}), 3, false) == 0.0);
    // zero unigram overlap is 0 regardless of smoothing
    CHECK(bleu(cand({"x", "y"}), ref({"a", "b"}), 4, true) == 0.0);
}

TEST_CASE("bleu caps the order at the candidate length") {
    // single shared token: effective order 1, p1 = 1, lengths equal
    CHECK(bleu(cand({"a"}), ref({"a"}), 4) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bleu edge cases and argument errors") {
    CHECK(bleu(cand({}), ref({"a"})) == 0.0);
    CHECK_THROWS_AS(bleu(cand({"a"}), ref({})), ArgumentError);
    CHECK_THROWS_AS(bleu(cand({"a"}), ref({"a"}), 0), ArgumentError);
    CHECK_THROWS_AS(bleu(cand({"a"}), ref({"a"}), 5), ArgumentError);
}

TEST_CASE("rouge n-gram recall hand values") {
    CHECK(rouge(cand({"a", "b"}), ref({"a", "b", "c"})) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(rouge(cand({"a", "b", "c"}), ref({"a", "b", "d"}), RougeVariant::ngram(2)) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // candidate-side clipping: one "a" can only match one reference "a"
    CHECK(rouge(cand({"a"}), ref({"a", "a"})) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rouge(cand({}), ref({"a", "b"})) == 0.0);
    CHECK(rouge(cand({"a", "b"}), ref({"a", "b"})) == doctest::Approx(1.0));
}

TEST_CASE("rouge LCS variant") {
    CHECK(rouge(cand({"a", "x", "b", "y", "c"}), ref({"a", "b", "c", "d"}),
                RougeVariant::lcs()) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(rouge(cand({"a", "b"}), ref({"a", "b"}), RougeVariant::lcs()) ==
          doctest::Approx(1.0));
    CHECK(rouge(cand({}), ref({"a"}), RougeVariant::lcs()) == 0.0);
}

TEST_CASE("rouge argument errors") {
    CHECK_THROWS_AS(rouge(cand({"a"}), ref({})), ArgumentError);
    CHECK_THROWS_AS(rouge(cand({"a"}), ref({"a"}), RougeVariant::ngram(2)),
                    ArgumentError);  // reference shorter than n
    CHECK_THROWS_AS(rouge(cand({"a"}), ref({"a"}), RougeVariant::ngram(0)),
                    ArgumentError);
}

TEST_CASE("wer hand values, including scores above 1") {
    CHECK(wer(cand({"a", "b", "c"}), ref({"a", "b", "c"})) == 0.0);
    CHECK(wer(cand({"a", "x", "c"}), ref({"a", "b", "c"})) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(wer(cand({"a", "b", "c", "d"}), ref({"a", "b", "c"})) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(wer(cand({"a", "b"}), ref({"a", "b", "c"})) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // unclamped: 1 substitution + 3 insertions against a 1-token reference
    CHECK(wer(cand({"x", "y", "z", "w"}), ref({"a"})) ==
          doctest::Approx(4.0).epsilon(1e-12));
    CHECK(wer(cand({}), ref({"a", "b"})) == doctest::Approx(1.0));
    CHECK_THROWS_AS(wer(cand({"a"}), ref({})), ArgumentError);
}

TEST_CASE("metrics agree with independent oracles on random token pairs") {
    std::mt19937 rng(7);
    const std::vector<std::string> alphabet = {"aa", "bb", "cc", "dd"};
    std::uniform_int_distribution<std::size_t> len(0, 6);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<std::size_t> order(1, 4);

    for (int round = 0; round < 5000; ++round) {
        std::vector<std::string> c, r;
        const std::size_t nc = len(rng);
        std::size_t nr = len(rng);
        if (nr == 0) nr = 1;  // references must be non-empty
        for (std::size_t i = 0; i < nc; ++i) c.push_back(alphabet[pick(rng)]);
        for (std::size_t i = 0; i < nr; ++i) r.push_back(alphabet[pick(rng)]);

        const auto cs = cand(c);
        const auto rs = ref(r);

        const double expected_wer =
            static_cast<double>(edit_distance_oracle(c, r)) /
            static_cast<double>(r.size());
        REQUIRE(wer(cs, rs) == doctest::Approx(expected_wer).epsilon(1e-12));

        const std::size_t n = order(rng);
        REQUIRE(bleu(cs, rs, n, true) ==
                doctest::Approx(bleu_oracle(c, r, n, true)).epsilon(1e-9));
        REQUIRE(bleu(cs, rs, n, false) ==
                doctest::Approx(bleu_oracle(c, r, n, false)).epsilon(1e-9));

        if (r.size() >= n) {
            const double expected_rouge =
                static_cast<double>(clipped_matches_oracle(c, r, n)) /
                static_cast<double>(r.size() - n + 1);
            REQUIRE(rouge(cs, rs, RougeVariant::ngram(n)) ==
                    doctest::Approx(expected_rouge).epsilon(1e-9));
        }

        std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
        const double expected_lcs =
            static_cast<double>(lcs_oracle(c, r, 0, 0, memo)) /
            static_cast<double>(r.size());
        REQUIRE(rouge(cs, rs, RougeVariant::lcs()) ==
                doctest::Approx(expected_lcs).epsilon(1e-9));
    }
}

TEST_CASE("metric ranges and invariants hold on random pairs") {
    std::mt19937 rng(99);
    const std::vector<std::string> alphabet = {"p", "q", "r"};
    std::uniform_int_distribution<std::size_t> len(1, 8);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);

    for (int round = 0; round < 2000; ++round) {
        std::vector<std::string> c, r;
        for (std::size_t i = 0, n = len(rng); i < n; ++i)
            c.push_back(alphabet[pick(rng)]);
        for (std::size_t i = 0, n = len(rng); i < n; ++i)
            r.push_back(alphabet[pick(rng)]);
        const auto cs = cand(c);
        const auto rs = ref(r);

        const double b = bleu(cs, rs);
        REQUIRE(b >= 0.0);
        REQUIRE(b <= 1.0 + 1e-12);
        const double g1 = rouge(cs, rs);
        REQUIRE(g1 >= 0.0);
        REQUIRE(g1 <= 1.0 + 1e-12);
        const double gl = rouge(cs, rs, RougeVariant::lcs());
        REQUIRE(gl >= 0.0);
        REQUIRE(gl <= 1.0 + 1e-12);
        REQUIRE(wer(cs, rs) >= 0.0);

        // identity is a fixed point
        REQUIRE(bleu(cand(c), ref(c)) == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(rouge(cand(c), ref(c)) == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(wer(cand(c), ref(c)) == 0.0);
    }
}
