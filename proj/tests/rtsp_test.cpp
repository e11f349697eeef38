#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ragseed/errors.hpp"
#include "ragseed/rtsp.hpp"

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace ragseed;

namespace {

RtspRequest make_request(RtspMethod method, std::int64_t cseq,
                         std::vector<Header> extra = {},
                         std::optional<std::string> body = std::nullopt) {
    RtspRequest req;
    req.method = method;
    req.uri = "rtsp://server.example.com/stream";
    req.headers.push_back({"CSeq", std::to_string(cseq)});
    for (auto& h : extra) req.headers.push_back(std::move(h));
    if (body) {
        req.headers.push_back({"Content-Length", std::to_string(body->size())});
        req.body = std::move(body);
    }
    return req;
}

// Independent fold for the oracle below: walks the sequence recursively and
// never consults transition()/validate_sequence().
struct SimResult {
    bool valid;
    std::size_t failures_at;
};

bool simulate(const std::vector<RtspMethod>& methods, std::size_t i, SessionState state,
              std::size_t* failing_index) {
    if (i == methods.size()) return true;
    const RtspMethod m = methods[i];
    SessionState next = state;
    bool ok = false;
    switch (m) {
        case RtspMethod::Setup:
            ok = state == SessionState::Init;
            next = SessionState::Ready;
            break;
        case RtspMethod::Play:
            ok = state == SessionState::Ready;
            next = SessionState::Playing;
            break;
        case RtspMethod::Record:
            ok = state == SessionState::Ready;
            next = SessionState::Recording;
            break;
        case RtspMethod::Pause:
            ok = state == SessionState::Playing || state == SessionState::Recording;
            next = SessionState::Ready;
            break;
        case RtspMethod::Teardown:
            ok = true;
            next = SessionState::Init;
            break;
        default:  // neutral methods
            ok = true;
            next = state;
            break;
    }
    if (!ok) {
        *failing_index = i;
        return false;
    }
    return simulate(methods, i + 1, next, failing_index);
}

} // namespace

TEST_CASE("method names round-trip through the token lookup") {
    CHECK(evaluation_methods().size() == 10);
    CHECK(all_methods().size() == 11);
    CHECK(method_name(RtspMethod::GetParameter) == "GET_PARAMETER");
    CHECK(method_name(RtspMethod::Describe) == "DESCRIBE");
    for (const auto m : all_methods()) {
        const auto back = method_from_token(method_name(m));
        REQUIRE(back.has_value());
        CHECK(*back == m);
    }
    CHECK_FALSE(method_from_token("FOO").has_value());
    CHECK_FALSE(method_from_token("describe").has_value());  // tokens are uppercase
}

TEST_CASE("evaluation methods are in the fixed report row order") {
    const std::vector<RtspMethod> expected = {
        RtspMethod::Describe,     RtspMethod::Setup,        RtspMethod::Play,
        RtspMethod::Pause,        RtspMethod::Teardown,     RtspMethod::GetParameter,
        RtspMethod::SetParameter, RtspMethod::Announce,     RtspMethod::Record,
        RtspMethod::Redirect,
    };
    CHECK(evaluation_methods() == expected);
}

TEST_CASE("parse_request handles the canonical DESCRIBE example") {
    const auto req =
        parse_request("DESCRIBE rtsp://example.com/media.mp4 RTSP/1.0\r\nCSeq: 2\r\n\r\n");
    CHECK(req.method == RtspMethod::Describe);
    CHECK(req.uri == "rtsp://example.com/media.mp4");
    CHECK(req.version == "RTSP/1.0");
    CHECK(cseq_value(req) == 2);
    CHECK_FALSE(req.body.has_value());
}

TEST_CASE("parse_request tolerates lone LF and trims header values") {
    const auto req = parse_request("SETUP rtsp://s/1 RTSP/1.0\nCSeq:  7 \nTransport: RTP/AVP\n\n");
    CHECK(req.method == RtspMethod::Setup);
    CHECK(cseq_value(req) == 7);
    CHECK(find_header(req, "transport") == "RTP/AVP");  // case-insensitive lookup
}

TEST_CASE("parse_request reads a body governed by Content-Length") {
    const std::string raw =
        "ANNOUNCE rtsp://s/1 RTSP/1.0\r\n"
        "CSeq: 3\r\n"
        "Content-Type: application/sdp\r\n"
        "Content-Length: 5\r\n"
        "\r\n"
        "v=0\r\n";
    const auto req = parse_request(raw);
    REQUIRE(req.body.has_value());
    CHECK(*req.body == "v=0\r\n");
}

TEST_CASE("parse_request error cases") {
    CHECK_THROWS_AS(parse_request(""), ArgumentError);
    // unknown method carries the offending token
    try {
        parse_request("FOO rtsp://x RTSP/1.0\r\nCSeq: 1\r\n\r\n");
        FAIL("expected UnknownMethodError");
    } catch (const UnknownMethodError& e) {
        CHECK(e.token == "FOO");
    }
    // missing CSeq
    CHECK_THROWS_AS(parse_request("PLAY rtsp://x RTSP/1.0\r\nSession: 1\r\n\r\n"),
                    MalformedRequestError);
    // bad request line
    CHECK_THROWS_AS(parse_request("PLAY rtsp://x\r\nCSeq: 1\r\n\r\n"),
                    MalformedRequestError);
    // body shorter than Content-Length
    CHECK_THROWS_AS(parse_request("ANNOUNCE rtsp://x RTSP/1.0\r\nCSeq: 1\r\n"
                                  "Content-Length: 10\r\n\r\nabc"),
                    MalformedRequestError);
    // header line without a colon
    CHECK_THROWS_AS(parse_request("PLAY rtsp://x RTSP/1.0\r\nCSeq 1\r\n\r\n"),
                    MalformedRequestError);
}

TEST_CASE("serialize_request emits the canonical wire form") {
    const auto req = make_request(RtspMethod::Play, 4, {{"Session", "12345"}});
    CHECK(serialize_request(req) ==
          "PLAY rtsp://server.example.com/stream RTSP/1.0\r\n"
          "CSeq: 4\r\n"
          "Session: 12345\r\n"
          "\r\n");
}

TEST_CASE("serialize_request refuses invariant violations by name") {
    RtspRequest req = make_request(RtspMethod::Play, 4);
    req.headers.push_back({"Content-Length", "4"});
    req.body = "12345";  // five bytes, header says four
    try {
        serialize_request(req);
        FAIL("expected ArgumentError");
    } catch (const ArgumentError& e) {
        CHECK(std::string(e.what()).find("Content-Length") != std::string::npos);
    }

    RtspRequest no_cseq;
    no_cseq.method = RtspMethod::Play;
    no_cseq.uri = "rtsp://x";
    CHECK_THROWS_AS(serialize_request(no_cseq), ArgumentError);
}

TEST_CASE("parse and serialize are mutually inverse") {
    const std::string canonical =
        "SETUP rtsp://example.com/track1 RTSP/1.0\r\n"
        "CSeq: 9\r\n"
        "Transport: RTP/AVP;unicast;client_port=8000-8001\r\n"
        "\r\n";
    CHECK(serialize_request(parse_request(canonical)) == canonical);

    const auto req = make_request(RtspMethod::SetParameter, 11,
                                  {{"Content-Type", "text/parameters"}},
                                  std::string("barparam: barstuff\r\n"));
    const auto reparsed = parse_request(serialize_request(req));
    CHECK(reparsed.method == req.method);
    CHECK(reparsed.uri == req.uri);
    CHECK(reparsed.body == req.body);
    REQUIRE(reparsed.headers.size() == req.headers.size());
    for (std::size_t i = 0; i < req.headers.size(); ++i) {
        CHECK(reparsed.headers[i].name == req.headers[i].name);
        CHECK(reparsed.headers[i].value == req.headers[i].value);
    }
}

TEST_CASE("request_invariant_violation catches each invariant") {
    CHECK(request_invariant_violation(make_request(RtspMethod::Play, 0)) == std::nullopt);

    RtspRequest bad_cseq = make_request(RtspMethod::Play, 1);
    bad_cseq.headers[0].value = "-3";
    CHECK(request_invariant_violation(bad_cseq).has_value());

    RtspRequest no_uri = make_request(RtspMethod::Play, 1);
    no_uri.uri = "";
    CHECK(request_invariant_violation(no_uri).has_value());

    RtspRequest orphan_length = make_request(RtspMethod::Play, 1);
    orphan_length.headers.push_back({"Content-Length", "3"});
    CHECK(request_invariant_violation(orphan_length).has_value());

    RtspRequest zero_length = make_request(RtspMethod::Play, 1);
    zero_length.headers.push_back({"Content-Length", "0"});
    CHECK(request_invariant_violation(zero_length) == std::nullopt);
}

TEST_CASE("default transition table implements the server FSM") {
    const auto& table = default_transition_table();
    CHECK(transition(SessionState::Init, RtspMethod::Setup, table) == SessionState::Ready);
    CHECK(transition(SessionState::Ready, RtspMethod::Play, table) == SessionState::Playing);
    CHECK(transition(SessionState::Ready, RtspMethod::Record, table) ==
          SessionState::Recording);
    CHECK(transition(SessionState::Playing, RtspMethod::Pause, table) == SessionState::Ready);
    CHECK(transition(SessionState::Recording, RtspMethod::Pause, table) ==
          SessionState::Ready);
    for (const auto state : all_states()) {
        CHECK(transition(state, RtspMethod::Teardown, table) == SessionState::Init);
    }
    // neutral methods are total and state-preserving
    for (const auto state : all_states()) {
        for (const auto m : {RtspMethod::Describe, RtspMethod::Announce,
                             RtspMethod::GetParameter, RtspMethod::SetParameter,
                             RtspMethod::Options, RtspMethod::Redirect}) {
            CHECK(transition(state, m, table) == state);
        }
    }
    try {
        transition(SessionState::Init, RtspMethod::Play, table);
        FAIL("expected InvalidTransitionError");
    } catch (const InvalidTransitionError& e) {
        CHECK(e.state == SessionState::Init);
        CHECK(e.method == RtspMethod::Play);
    }
}

TEST_CASE("validate_sequence folds the FSM and traces states") {
    std::vector<RtspRequest> seq;
    seq.push_back(make_request(RtspMethod::Setup, 1, {{"Transport", "RTP/AVP"}}));
    seq.push_back(make_request(RtspMethod::Play, 2, {{"Session", "A"}}));
    seq.push_back(make_request(RtspMethod::Pause, 3, {{"Session", "A"}}));
    seq.push_back(make_request(RtspMethod::Teardown, 4, {{"Session", "A"}}));

    const auto report = validate_sequence(seq, default_transition_table());
    CHECK(report.valid);
    CHECK_FALSE(report.failing_index.has_value());
    CHECK(report.state_trace ==
          std::vector<SessionState>{SessionState::Ready, SessionState::Playing,
                                    SessionState::Ready, SessionState::Init});
}

TEST_CASE("validate_sequence reports the first FSM failure") {
    const auto report = validate_sequence({make_request(RtspMethod::Play, 1)},
                                          default_transition_table());
    CHECK_FALSE(report.valid);
    CHECK(report.failing_index == 0);
    CHECK_FALSE(report.reason.empty());
}

TEST_CASE("validate_sequence accepts the empty sequence") {
    const auto report = validate_sequence({}, default_transition_table());
    CHECK(report.valid);
    CHECK(report.state_trace.empty());
}

TEST_CASE("validate_sequence enforces strictly increasing CSeq") {
    std::vector<RtspRequest> seq;
    seq.push_back(make_request(RtspMethod::Setup, 5, {{"Transport", "RTP/AVP"}}));
    seq.push_back(make_request(RtspMethod::Play, 5, {{"Session", "A"}}));  // not increasing
    const auto report = validate_sequence(seq, default_transition_table());
    CHECK_FALSE(report.valid);
    CHECK(report.failing_index == 1);
    CHECK(report.reason.find("CSeq") != std::string::npos);
}

TEST_CASE("validate_sequence agrees with a recursive simulator on random sequences") {
    std::mt19937 rng(2024);
    const auto& methods = all_methods();
    std::uniform_int_distribution<std::size_t> len(0, 6);
    std::uniform_int_distribution<std::size_t> pick(0, methods.size() - 1);

    for (int round = 0; round < 2000; ++round) {
        std::vector<RtspMethod> ms;
        const std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i) ms.push_back(methods[pick(rng)]);

        std::vector<RtspRequest> seq;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            seq.push_back(make_request(ms[i], static_cast<std::int64_t>(i + 1)));
        }

        std::size_t failing = 0;
        const bool expect_valid = simulate(ms, 0, SessionState::Init, &failing);
        const auto report = validate_sequence(seq, default_transition_table());
        REQUIRE(report.valid == expect_valid);
        if (!expect_valid) REQUIRE(report.failing_index == failing);
    }
}

TEST_CASE("required_headers matches the minimal rule table") {
    using V = std::vector<std::string>;
    CHECK(required_headers(RtspMethod::Describe) == V{"CSeq"});
    CHECK(required_headers(RtspMethod::Setup) == V{"CSeq", "Transport"});
    CHECK(required_headers(RtspMethod::Play) == V{"CSeq", "Session"});
    CHECK(required_headers(RtspMethod::Pause) == V{"CSeq", "Session"});
    CHECK(required_headers(RtspMethod::Teardown) == V{"CSeq", "Session"});
    CHECK(required_headers(RtspMethod::Record) == V{"CSeq", "Session"});
    CHECK(required_headers(RtspMethod::Announce) ==
          V{"CSeq", "Content-Type", "Content-Length"});
    CHECK(required_headers(RtspMethod::SetParameter) ==
          V{"CSeq", "Content-Type", "Content-Length"});
    CHECK(required_headers(RtspMethod::GetParameter) == V{"CSeq"});
    CHECK(required_headers(RtspMethod::Redirect) == V{"CSeq"});
    CHECK(required_headers(RtspMethod::Options) == V{"CSeq"});
}

TEST_CASE("seed sequence files round-trip") {
    std::vector<SeedSequence> seeds(2);
    seeds[0].id = "seed-1";
    seeds[0].packets = {"SETUP rtsp://x RTSP/1.0\r\nCSeq: 1\r\nTransport: RTP/AVP\r\n\r\n",
                        "PLAY rtsp://x RTSP/1.0\r\nCSeq: 2\r\nSession: 1\r\n\r\n"};
    seeds[1].id = "seed-2";
    seeds[1].packets = {std::string("\x00\xff binary bytes \r\n ok", 22)};

    const std::string jsonl = seed_sequences_to_jsonl(seeds);
    const auto loaded = seed_sequences_from_jsonl(jsonl);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].id == "seed-1");
    CHECK(loaded[0].packets == seeds[0].packets);
    CHECK(loaded[1].packets == seeds[1].packets);
}

TEST_CASE("packet containers round-trip arbitrary bytes") {
    std::vector<std::string> packets = {"", "abc", std::string("\x00\x01\x02", 3),
                                        std::string(1000, 'x')};
    const auto container = packets_to_container(packets);
    CHECK(packets_from_container(container) == packets);
    CHECK(packets_from_container("").empty());
    // incomplete length prefix, then a prefix promising more bytes than remain
    CHECK_THROWS_AS(packets_from_container(std::string("\x05", 1)), IoError);
    CHECK_THROWS_AS(packets_from_container(std::string("\x05\x00\x00\x00", 4)), IoError);
}
