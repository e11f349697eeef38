#include "ragseed/rtsp.hpp"

#include "ragseed/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cstring>

namespace ragseed {

namespace {

constexpr std::array<std::pair<RtspMethod, const char*>, 11> kMethodNames = {{
    {RtspMethod::Describe, "DESCRIBE"},
    {RtspMethod::Setup, "SETUP"},
    {RtspMethod::Play, "PLAY"},
    {RtspMethod::Pause, "PAUSE"},
    {RtspMethod::Teardown, "TEARDOWN"},
    {RtspMethod::GetParameter, "GET_PARAMETER"},
    {RtspMethod::SetParameter, "SET_PARAMETER"},
    {RtspMethod::Announce, "ANNOUNCE"},
    {RtspMethod::Record, "RECORD"},
    {RtspMethod::Redirect, "REDIRECT"},
    {RtspMethod::Options, "OPTIONS"},
}};

std::optional<std::int64_t> parse_nonnegative_int(const std::string& s) {
    if (s.empty() || s.size() > 18) return std::nullopt;
    std::int64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + (c - '0');
    }
    return v;
}

} // namespace

const std::vector<RtspMethod>& evaluation_methods() {
    static const std::vector<RtspMethod> methods = {
        RtspMethod::Describe,     RtspMethod::Setup,        RtspMethod::Play,
        RtspMethod::Pause,        RtspMethod::Teardown,     RtspMethod::GetParameter,
        RtspMethod::SetParameter, RtspMethod::Announce,     RtspMethod::Record,
        RtspMethod::Redirect,
    };
    return methods;
}

const std::vector<RtspMethod>& all_methods() {
    static const std::vector<RtspMethod> methods = [] {
        std::vector<RtspMethod> all = evaluation_methods();
        all.push_back(RtspMethod::Options);
        return all;
    }();
    return methods;
}

std::string method_name(RtspMethod m) {
    for (const auto& [method, name] : kMethodNames) {
        if (method == m) return name;
    }
    return "?";
}

std::optional<RtspMethod> method_from_token(const std::string& token) {
    for (const auto& [method, name] : kMethodNames) {
        if (token == name) return method;
    }
    return std::nullopt;
}

std::optional<std::string> find_header(const RtspRequest& req, const std::string& name) {
    for (const auto& h : req.headers) {
        if (iequals(h.name, name)) return h.value;
    }
    return std::nullopt;
}

std::optional<std::int64_t> cseq_value(const RtspRequest& req) {
    const auto v = find_header(req, "CSeq");
    if (!v) return std::nullopt;
    return parse_nonnegative_int(trim(*v));
}

std::optional<std::string> request_invariant_violation(const RtspRequest& req) {
    const auto cseq_header = find_header(req, "CSeq");
    if (!cseq_header) return "CSeq header missing";
    if (!parse_nonnegative_int(trim(*cseq_header))) {
        return "CSeq value '" + *cseq_header + "' is not a non-negative integer";
    }
    const auto content_length = find_header(req, "Content-Length");
    if (req.body) {
        if (!content_length) return "body present but Content-Length header missing";
        const auto declared = parse_nonnegative_int(trim(*content_length));
        if (!declared || static_cast<std::size_t>(*declared) != req.body->size()) {
            return "Content-Length " + *content_length + " does not match body length " +
                   std::to_string(req.body->size());
        }
    } else if (content_length) {
        const auto declared = parse_nonnegative_int(trim(*content_length));
        if (!declared || *declared != 0) {
            return "Content-Length " + *content_length + " given but no body present";
        }
    }
    if (req.version.empty()) return "protocol version is empty";
    if (req.uri.empty()) return "request URI is empty";
    return std::nullopt;
}

RtspRequest parse_request(const std::string& raw) {
    if (raw.empty()) throw ArgumentError("parse_request: input is empty");

    // split into lines up to the blank separator; remainder is the body region
    std::vector<std::string> lines;
    std::size_t pos = 0;
    std::size_t body_start = raw.size();
    bool saw_blank = false;
    while (pos < raw.size()) {
        const std::size_t nl = raw.find('\n', pos);
        if (nl == std::string::npos) {
            lines.push_back(raw.substr(pos));
            pos = raw.size();
            break;
        }
        std::size_t end = nl;
        if (end > pos && raw[end - 1] == '\r') --end;
        std::string line = raw.substr(pos, end - pos);
        pos = nl + 1;
        if (line.empty()) {
            saw_blank = true;
            body_start = pos;
            break;
        }
        lines.push_back(std::move(line));
    }
    if (lines.empty()) throw MalformedRequestError("no request line");

    // request line: method, URI, version separated by spaces
    std::vector<std::string> parts;
    {
        const std::string& rl = lines[0];
        std::size_t i = 0;
        while (i < rl.size()) {
            while (i < rl.size() && rl[i] == ' ') ++i;
            if (i >= rl.size()) break;
            std::size_t s = i;
            while (i < rl.size() && rl[i] != ' ') ++i;
            parts.push_back(rl.substr(s, i - s));
        }
    }
    if (parts.size() != 3) {
        throw MalformedRequestError("request line must be '<method> <uri> <version>', got '" +
                                    lines[0] + "'");
    }
    const auto method = method_from_token(parts[0]);
    if (!method) throw UnknownMethodError(parts[0]);

    RtspRequest req;
    req.method = *method;
    req.uri = parts[1];
    req.version = parts[2];

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw MalformedRequestError("header line without colon: '" + line + "'");
        }
        Header h;
        h.name = trim(line.substr(0, colon));
        h.value = trim(line.substr(colon + 1));
        if (h.name.empty()) {
            throw MalformedRequestError("header line with empty name: '" + line + "'");
        }
        req.headers.push_back(std::move(h));
    }

    const std::string remainder = saw_blank ? raw.substr(body_start) : std::string();
    const auto content_length = find_header(req, "Content-Length");
    if (content_length) {
        const auto declared = parse_nonnegative_int(trim(*content_length));
        if (!declared) {
            throw MalformedRequestError("Content-Length '" + *content_length +
                                        "' is not a non-negative integer");
        }
        if (remainder.size() != static_cast<std::size_t>(*declared)) {
            throw MalformedRequestError(
                "Content-Length " + std::to_string(*declared) + " but " +
                std::to_string(remainder.size()) + " body bytes present");
        }
        req.body = remainder;
    } else if (!remainder.empty()) {
        throw MalformedRequestError("body present but Content-Length header missing");
    }

    const auto cseq = find_header(req, "CSeq");
    if (!cseq) throw MalformedRequestError("CSeq header missing");
    if (!parse_nonnegative_int(trim(*cseq))) {
        throw MalformedRequestError("CSeq value '" + *cseq +
                                    "' is not a non-negative integer");
    }
    return req;
}

std::string serialize_request(const RtspRequest& req) {
    if (const auto violation = request_invariant_violation(req)) {
        throw ArgumentError("serialize_request refused: " + *violation);
    }
    std::string out = method_name(req.method) + " " + req.uri + " " + req.version + "\r\n";
    for (const auto& h : req.headers) {
        out += h.name + ": " + h.value + "\r\n";
    }
    out += "\r\n";
    if (req.body) out += *req.body;
    return out;
}

const std::vector<SessionState>& all_states() {
    static const std::vector<SessionState> states = {
        SessionState::Init, SessionState::Ready, SessionState::Playing,
        SessionState::Recording};
    return states;
}

std::string state_name(SessionState s) {
    switch (s) {
        case SessionState::Init: return "INIT";
        case SessionState::Ready: return "READY";
        case SessionState::Playing: return "PLAYING";
        case SessionState::Recording: return "RECORDING";
    }
    return "?";
}

const TransitionTable& default_transition_table() {
    static const TransitionTable table = [] {
        TransitionTable t;
        t.rules[{SessionState::Init, RtspMethod::Setup}] = SessionState::Ready;
        t.rules[{SessionState::Ready, RtspMethod::Play}] = SessionState::Playing;
        t.rules[{SessionState::Ready, RtspMethod::Record}] = SessionState::Recording;
        t.rules[{SessionState::Playing, RtspMethod::Pause}] = SessionState::Ready;
        t.rules[{SessionState::Recording, RtspMethod::Pause}] = SessionState::Ready;
        for (SessionState s : all_states()) {
            t.rules[{s, RtspMethod::Teardown}] = SessionState::Init;
        }
        t.neutral_methods = {RtspMethod::Describe,     RtspMethod::Announce,
                             RtspMethod::GetParameter, RtspMethod::SetParameter,
                             RtspMethod::Options,      RtspMethod::Redirect};
        return t;
    }();
    return table;
}

namespace {

void check_table(const TransitionTable& table) {
    for (const auto& [key, target] : table.rules) {
        (void)target;
        if (table.neutral_methods.count(key.second)) {
            throw ConfigError("transition table: method " + method_name(key.second) +
                              " is both neutral and a rule trigger");
        }
    }
}

} // namespace

SessionState transition(SessionState state, RtspMethod method,
                        const TransitionTable& table) {
    if (table.neutral_methods.count(method)) {
        if (table.rules.count({state, method})) check_table(table);  // reports conflict
        return state;
    }
    const auto it = table.rules.find({state, method});
    if (it != table.rules.end()) return it->second;
    throw InvalidTransitionError(state, method);
}

ConformanceReport validate_sequence(const std::vector<RtspRequest>& requests,
                                    const TransitionTable& table) {
    check_table(table);
    ConformanceReport report;
    SessionState state = SessionState::Init;
    std::optional<std::int64_t> prev_cseq;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const auto cseq = cseq_value(requests[i]);
        if (!cseq) {
            report.valid = false;
            report.failing_index = i;
            report.reason = "request " + std::to_string(i) +
                            " has no valid CSeq header";
            return report;
        }
        if (prev_cseq && *cseq <= *prev_cseq) {
            report.valid = false;
            report.failing_index = i;
            report.reason = "CSeq not strictly increasing at request " +
                            std::to_string(i) + " (" + std::to_string(*cseq) +
                            " after " + std::to_string(*prev_cseq) + ")";
            return report;
        }
        try {
            state = transition(state, requests[i].method, table);
        } catch (const InvalidTransitionError& e) {
            report.valid = false;
            report.failing_index = i;
            report.reason = std::string("request ") + std::to_string(i) + ": " + e.what();
            return report;
        }
        report.state_trace.push_back(state);
        prev_cseq = cseq;
    }
    return report;
}

std::vector<std::string> required_headers(RtspMethod method) {
    std::vector<std::string> headers = {"CSeq"};
    switch (method) {
        case RtspMethod::Setup:
            headers.push_back("Transport");
            break;
        case RtspMethod::Play:
        case RtspMethod::Pause:
        case RtspMethod::Teardown:
        case RtspMethod::Record:
            headers.push_back("Session");
            break;
        case RtspMethod::Announce:
        case RtspMethod::SetParameter:
            headers.push_back("Content-Type");
            headers.push_back("Content-Length");
            break;
        default:
            break;
    }
    return headers;
}

std::string seed_sequences_to_jsonl(const std::vector<SeedSequence>& sequences) {
    std::string out;
    for (const auto& seq : sequences) {
        for (std::size_t i = 0; i < seq.packets.size(); ++i) {
            nlohmann::json rec = {
                {"sequence_id", seq.id},
                {"ordinal", i},
                {"packet", base64_encode(seq.packets[i])},
            };
            out += rec.dump();
            out += '\n';
        }
    }
    return out;
}

std::vector<SeedSequence> seed_sequences_from_jsonl(const std::string& text) {
    // collect (sequence_id, ordinal, packet), then group preserving first-seen
    // sequence order and sorting each group by ordinal
    struct Row {
        std::string id;
        std::size_t ordinal;
        std::string packet;
    };
    std::vector<Row> rows;
    std::size_t line_no = 0;
    for (const auto& line : split_lines(text)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            nlohmann::json rec = nlohmann::json::parse(line);
            Row row;
            row.id = rec.at("sequence_id").get<std::string>();
            row.ordinal = rec.at("ordinal").get<std::size_t>();
            if (!base64_decode(rec.at("packet").get<std::string>(), row.packet)) {
                throw IoError("seed line " + std::to_string(line_no) +
                              ": packet is not valid base64");
            }
            rows.push_back(std::move(row));
        } catch (const nlohmann::json::exception& e) {
            throw IoError("seed line " + std::to_string(line_no) + " is invalid: " +
                          e.what());
        }
    }

    std::vector<SeedSequence> sequences;
    for (auto& row : rows) {
        auto it = std::find_if(sequences.begin(), sequences.end(),
                               [&](const SeedSequence& s) { return s.id == row.id; });
        if (it == sequences.end()) {
            sequences.push_back({row.id, {}});
            it = std::prev(sequences.end());
        }
        if (it->packets.size() <= row.ordinal) it->packets.resize(row.ordinal + 1);
        it->packets[row.ordinal] = std::move(row.packet);
    }
    return sequences;
}

std::string packets_to_container(const std::vector<std::string>& packets) {
    std::string out;
    for (const auto& p : packets) {
        const auto len = static_cast<std::uint32_t>(p.size());
        char hdr[4] = {static_cast<char>(len & 0xff), static_cast<char>((len >> 8) & 0xff),
                       static_cast<char>((len >> 16) & 0xff),
                       static_cast<char>((len >> 24) & 0xff)};
        out.append(hdr, 4);
        out += p;
    }
    return out;
}

std::vector<std::string> packets_from_container(const std::string& bytes) {
    std::vector<std::string> packets;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        if (pos + 4 > bytes.size()) {
            throw IoError("packet container truncated in length prefix");
        }
        std::uint32_t len = static_cast<unsigned char>(bytes[pos]) |
                            (static_cast<unsigned char>(bytes[pos + 1]) << 8) |
                            (static_cast<unsigned char>(bytes[pos + 2]) << 16) |
                            (static_cast<unsigned char>(bytes[pos + 3]) << 24);
        pos += 4;
        if (pos + len > bytes.size()) {
            throw IoError("packet container truncated in packet body");
        }
        packets.push_back(bytes.substr(pos, len));
        pos += len;
    }
    return packets;
}

} // namespace ragseed
