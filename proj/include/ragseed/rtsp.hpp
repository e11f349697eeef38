#pragma once

#include "ragseed/errors.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ragseed {

enum class RtspMethod {
    Describe,
    Setup,
    Play,
    Pause,
    Teardown,
    GetParameter,
    SetParameter,
    Announce,
    Record,
    Redirect,
    Options,
};

/// The ten methods evaluated in reports, in fixed row order. OPTIONS is
/// parsed but excluded from evaluation defaults.
const std::vector<RtspMethod>& evaluation_methods();
/// All eleven methods the parser accepts.
const std::vector<RtspMethod>& all_methods();

std::string method_name(RtspMethod m);
std::optional<RtspMethod> method_from_token(const std::string& token);

struct Header {
    std::string name;   // original casing preserved
    std::string value;
};

struct RtspRequest {
    RtspMethod method = RtspMethod::Describe;
    std::string uri;
    std::string version = "RTSP/1.0";
    std::vector<Header> headers;
    std::optional<std::string> body;
};

/// First header matching `name` case-insensitively.
std::optional<std::string> find_header(const RtspRequest& req, const std::string& name);
/// CSeq value if present and a non-negative integer.
std::optional<std::int64_t> cseq_value(const RtspRequest& req);

/// Description of the first violated RtspRequest invariant, or nullopt when
/// the request is well formed (CSeq present and non-negative; body length
/// matches Content-Length; Content-Length without a body only if zero).
std::optional<std::string> request_invariant_violation(const RtspRequest& req);

class UnknownMethodError : public Error {
public:
    explicit UnknownMethodError(const std::string& token)
        : Error("unknown RTSP method: " + token), token(token) {}
    std::string token;
};

class MalformedRequestError : public Error {
public:
    using Error::Error;
};

/// Parses one request packet. CRLF line endings canonical, lone LF tolerated.
/// Header lines split at the first colon, values trimmed. A blank line
/// separates headers from the body; the body must match Content-Length.
RtspRequest parse_request(const std::string& raw);

/// Emits the canonical CRLF wire form. Refuses a request violating its
/// invariants, naming the violation.
std::string serialize_request(const RtspRequest& req);

enum class SessionState { Init, Ready, Playing, Recording };

const std::vector<SessionState>& all_states();
std::string state_name(SessionState s);

/// Server FSM: explicit transition rules plus methods valid in every state
/// without changing it.
struct TransitionTable {
    std::map<std::pair<SessionState, RtspMethod>, SessionState> rules;
    std::set<RtspMethod> neutral_methods;
};

/// SETUP: INIT->READY; PLAY: READY->PLAYING; RECORD: READY->RECORDING;
/// PAUSE: PLAYING->READY, RECORDING->READY; TEARDOWN: any->INIT.
/// DESCRIBE, ANNOUNCE, GET_PARAMETER, SET_PARAMETER, OPTIONS, REDIRECT are
/// neutral.
const TransitionTable& default_transition_table();

class InvalidTransitionError : public Error {
public:
    InvalidTransitionError(SessionState state, RtspMethod method)
        : Error("no transition for " + method_name(method) + " in state " +
                state_name(state)),
          state(state), method(method) {}
    SessionState state;
    RtspMethod method;
};

/// Applies one message to the FSM. Throws InvalidTransitionError when the
/// table defines no rule and the method is not neutral.
SessionState transition(SessionState state, RtspMethod method,
                        const TransitionTable& table);

struct ConformanceReport {
    bool valid = true;
    std::optional<std::size_t> failing_index;
    std::vector<SessionState> state_trace;  // state after each accepted request
    std::string reason;                     // diagnostic, empty when valid
};

/// Folds the FSM from INIT over the sequence and checks that CSeq values are
/// strictly increasing. Failures are reported, never thrown; the trace covers
/// requests accepted before the failure.
ConformanceReport validate_sequence(const std::vector<RtspRequest>& requests,
                                    const TransitionTable& table);

/// Minimal header set the enrichment prompt and validator demand for a method.
std::vector<std::string> required_headers(RtspMethod method);

// --- seed and packet files ---

struct SeedSequence {
    std::string id;
    std::vector<std::string> packets;  // raw bytes, as logged
};

/// Seed sequence file: JSONL records {sequence_id, ordinal, packet(base64)}.
std::string seed_sequences_to_jsonl(const std::vector<SeedSequence>& sequences);
std::vector<SeedSequence> seed_sequences_from_jsonl(const std::string& text);

/// Multi-packet container: {u32 little-endian length, bytes} repeated.
std::string packets_to_container(const std::vector<std::string>& packets);
std::vector<std::string> packets_from_container(const std::string& bytes);

} // namespace ragseed
