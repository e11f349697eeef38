#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ragseed/util.hpp"

#include <random>
#include <string>

using namespace ragseed;

TEST_CASE("base64 encodes the RFC 4648 vectors") {
    CHECK(base64_encode("") == "");
    CHECK(base64_encode("f") == "Zg==");
    CHECK(base64_encode("fo") == "Zm8=");
    CHECK(base64_encode("foo") == "Zm9v");
    CHECK(base64_encode("foob") == "Zm9vYg==");
    CHECK(base64_encode("fooba") == "Zm9vYmE=");
    CHECK(base64_encode("foobar") == "Zm9vYmFy");
}

TEST_CASE("base64 decodes its own output for random byte strings") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<std::size_t> len(0, 64);
    for (int round = 0; round < 500; ++round) {
        std::string bytes(len(rng), '\0');
        for (auto& ch : bytes) ch = static_cast<char>(byte(rng));
        std::string back;
        REQUIRE(base64_decode(base64_encode(bytes), back));
        CHECK(back == bytes);
    }
}

TEST_CASE("base64 decode rejects malformed input") {
    std::string out;
    CHECK_FALSE(base64_decode("Zg=", out));      // short padding
    CHECK_FALSE(base64_decode("Zg===", out));    // long padding
    CHECK_FALSE(base64_decode("Z!g=", out));     // bad character
    CHECK_FALSE(base64_decode("Zg==X", out));    // trailing garbage
    CHECK_FALSE(base64_decode("====", out));     // padding only
    CHECK_FALSE(base64_decode("Zm9vYg", out));   // missing padding
    CHECK(base64_decode("", out));               // empty is the empty string
    CHECK(out.empty());
}

TEST_CASE("fnv1a64 matches the published constants") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("is_valid_utf8 accepts well-formed sequences") {
    CHECK(is_valid_utf8(""));
    CHECK(is_valid_utf8("plain ascii"));
    CHECK(is_valid_utf8("h\xC3\xA9llo"));          // two-byte
    CHECK(is_valid_utf8("\xE2\x82\xAC"));          // three-byte
    CHECK(is_valid_utf8("\xF0\x9F\x98\x80"));      // four-byte
}

TEST_CASE("is_valid_utf8 rejects malformed sequences") {
    CHECK_FALSE(is_valid_utf8("\x80"));              // stray continuation
    CHECK_FALSE(is_valid_utf8("\xC3"));              // truncated
    CHECK_FALSE(is_valid_utf8("\xC0\xAF"));          // overlong
    CHECK_FALSE(is_valid_utf8("\xED\xA0\x80"));      // surrogate
    CHECK_FALSE(is_valid_utf8("\xF4\x90\x80\x80"));  // above U+10FFFF
    CHECK_FALSE(is_valid_utf8("\xFF"));
    CHECK_FALSE(is_valid_utf8("ok\xC3text"));        // continuation missing
}

TEST_CASE("format_percent renders two half-up decimals") {
    CHECK(format_percent(0.8175) == "81.75%");
    CHECK(format_percent(0.0) == "0.00%");
    CHECK(format_percent(1.0) == "100.00%");
    CHECK(format_percent(0.5) == "50.00%");
    CHECK(format_percent(0.055) == "5.50%");
    CHECK(format_percent(0.12344) == "12.34%");
    CHECK(format_percent(0.12345) == "12.35%");   // half-up, not banker's
    CHECK(format_percent(0.99995) == "100.00%");  // carry across the point
    CHECK(format_percent(-0.1) == "-10.00%");
    CHECK(format_percent(-0.0000001) == "0.00%"); // no negative zero
}

TEST_CASE("format_percent rounds decimal ties that floats store a hair low") {
    // 0.14805 * 100 is stored as 14.80499…; the decimal reading is a tie and
    // must round up.
    CHECK(format_percent(0.14805) == "14.81%");
    CHECK(format_percent(0.23445) == "23.45%");
}

TEST_CASE("whitespace_tokens and token_spans agree on offsets") {
    const std::string text = "  alpha\tbeta\n gamma ";
    const auto tokens = whitespace_tokens(text);
    REQUIRE(tokens == std::vector<std::string>{"alpha", "beta", "gamma"});
    const auto spans = token_spans(text);
    REQUIRE(spans.size() == tokens.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        CHECK(text.substr(spans[i].first, spans[i].second - spans[i].first) == tokens[i]);
    }
    CHECK(whitespace_tokens("").empty());
    CHECK(whitespace_tokens(" \t\n ").empty());
}

TEST_CASE("split_lines strips both separators") {
    const auto lines = split_lines("a\nb\r\nc");
    REQUIRE(lines == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_lines("").empty());
    CHECK(split_lines("one") == std::vector<std::string>{"one"});
    CHECK(split_lines("x\n") == std::vector<std::string>{"x"});
}

TEST_CASE("trim and iequals behave") {
    CHECK(trim("  a b \t") == "a b");
    CHECK(trim("") == "");
    CHECK(trim(" \n ") == "");
    CHECK(iequals("CSeq", "cseq"));
    CHECK(iequals("", ""));
    CHECK_FALSE(iequals("CSeq", "CSeq2"));
}
