#include "ragseed/agent.hpp"

#include "ragseed/util.hpp"

#include <algorithm>
#include <regex>

namespace ragseed {

PromptTemplate default_prompt_template() {
    PromptTemplate tmpl;
    tmpl.agent_task =
        "Agent Task:\n"
        "You enrich fuzzing seed sequences for the RTSP protocol. Given the\n"
        "current client request sequence, propose additional requests and the\n"
        "positions to insert them at, so that the sequence stays valid under\n"
        "the protocol state machine while exercising more of it.\n";
    tmpl.agent_goal =
        "Agent Goal:\n"
        "Ground every proposal in the specification knowledge base. Look up\n"
        "state transition rules, request formats, and required headers with\n"
        "the retrieve tool before answering. To consult the knowledge base,\n"
        "reply with two lines:\n"
        "Thought: <your reasoning>\n"
        "Action: retrieve[<search query>]\n"
        "You will receive the retrieved passages as an observation.\n";
    tmpl.expected_output =
        "Expected Output:\n"
        "When you are confident, reply with the marker '{stop_marker}' followed\n"
        "by the new requests. Precede every request with a line\n"
        "'Insert-At: <position>' giving the zero-based index at which to insert\n"
        "it; positions apply one insertion at a time, in the order given. Each\n"
        "request must be a complete RTSP request with all required headers and\n"
        "a CSeq value that keeps the whole sequence strictly increasing.\n";
    tmpl.slot_names = {"stop_marker"};
    return tmpl;
}

namespace {

const std::regex& slot_marker_re() {
    static const std::regex re(R"(\{([A-Za-z_][A-Za-z0-9_]*)\})");
    return re;
}

std::string render_section(const std::string& section,
                           const PromptTemplate& tmpl,
                           const std::map<std::string, std::string>& slots) {
    std::string out;
    auto begin = std::sregex_iterator(section.begin(), section.end(), slot_marker_re());
    std::size_t last = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const auto& match = *it;
        const std::string name = match[1].str();
        if (!tmpl.slot_names.count(name)) {
            throw ConfigError("prompt template references slot '" + name +
                              "' missing from slot_names");
        }
        const auto value = slots.find(name);
        if (value == slots.end()) {
            throw RenderError("prompt slot '" + name + "' has no value");
        }
        out += section.substr(last, static_cast<std::size_t>(match.position()) - last);
        out += value->second;
        last = static_cast<std::size_t>(match.position() + match.length());
    }
    out += section.substr(last);
    return out;
}

} // namespace

std::string render_prompt(const PromptTemplate& tmpl,
                          const std::map<std::string, std::string>& slots) {
    for (const auto& name : tmpl.slot_names) {
        if (!slots.count(name)) {
            throw RenderError("prompt slot '" + name + "' has no value");
        }
    }
    return render_section(tmpl.agent_task, tmpl, slots) + "\n" +
           render_section(tmpl.agent_goal, tmpl, slots) + "\n" +
           render_section(tmpl.expected_output, tmpl, slots);
}

ReActStep parse_react_output(const std::string& model_text,
                             const std::string& stop_marker) {
    if (model_text.empty()) throw ArgumentError("parse_react_output: empty model text");

    const auto lines = split_lines(model_text);

    std::string thought;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string t = trim(lines[i]);
        if (t.rfind("Thought:", 0) == 0) {
            thought = trim(t.substr(8));
            break;
        }
    }

    // finish takes precedence over a retrieve action in the same turn
    const auto marker_pos = model_text.find(stop_marker);
    if (marker_pos != std::string::npos) {
        ReActStep step;
        step.thought = thought;
        step.action.kind = ReActAction::Kind::Finish;
        step.action.answer = trim(model_text.substr(marker_pos + stop_marker.size()));
        return step;
    }

    for (const auto& raw_line : lines) {
        const std::string line = trim(raw_line);
        if (line.rfind("Action:", 0) != 0) continue;
        const std::string rest = trim(line.substr(7));
        const auto open = rest.find('[');
        const auto close = rest.rfind(']');
        if (rest.rfind("retrieve", 0) == 0 && open != std::string::npos &&
            close != std::string::npos && close > open) {
            ReActStep step;
            step.thought = thought;
            step.action.kind = ReActAction::Kind::Retrieve;
            step.action.query = rest.substr(open + 1, close - open - 1);
            return step;
        }
        throw MalformedStepError("unrecognized action line: '" + line + "'");
    }

    throw MalformedStepError("model turn has neither an action nor the stop marker");
}

namespace {

constexpr const char* kObservationDelimiter = "\n-----\n";

std::string build_observation(const std::vector<ScoredChunk>& results,
                              std::size_t char_budget) {
    std::string obs;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (i > 0) obs += kObservationDelimiter;
        obs += results[i].chunk.text;
    }
    if (obs.size() > char_budget) obs.resize(char_budget);
    return obs;
}

constexpr const char* kCorrectivePrompt =
    "Your last reply was not understood. Reply either with\n"
    "Thought: <reasoning>\nAction: retrieve[<query>]\n"
    "or with the final-answer marker followed by your answer.";

} // namespace

ReActTranscript run_react(const std::string& question, const VectorStore& store,
                          const EmbeddingProviderConfig& embedder,
                          const AgentConfig& config, ChatModel& model) {
    if (config.max_iterations < 1) throw ArgumentError("run_react: max_iterations < 1");
    if (config.k < 1) throw ArgumentError("run_react: k < 1");

    ReActTranscript transcript;
    transcript.question = question;

    std::vector<ChatMessage> messages;
    messages.push_back(
        {"system", render_prompt(config.prompt, {{"stop_marker", config.stop_marker}})});
    messages.push_back({"user", question});

    auto model_turn = [&]() {
        std::string reply;
        try {
            reply = model.send(messages, config.temperature);
        } catch (const ProviderError& e) {
            throw AgentRunError(std::string("chat model failed: ") + e.what());
        }
        transcript.model_turns.push_back(reply);
        messages.push_back({"assistant", reply});
        return reply;
    };

    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
        std::string reply = model_turn();
        ReActStep step;
        bool parsed = false;
        try {
            step = parse_react_output(reply, config.stop_marker);
            parsed = true;
        } catch (const MalformedStepError&) {
            // one corrective re-prompt, then the iteration counts as failed
            messages.push_back({"user", kCorrectivePrompt});
            reply = model_turn();
            try {
                step = parse_react_output(reply, config.stop_marker);
                parsed = true;
            } catch (const MalformedStepError&) {
            }
        }
        if (!parsed) continue;

        if (step.action.kind == ReActAction::Kind::Finish) {
            transcript.final_answer = step.action.answer;
            transcript.steps.push_back(std::move(step));
            break;
        }

        const auto results = retrieve(store, step.action.query, config.k, embedder);
        step.observation = build_observation(results, config.observation_char_budget);
        for (const auto& r : results) {
            transcript.retrieved_chunk_ids.push_back(chunk_id(r.chunk));
        }
        messages.push_back({"user", "Observation:\n" + *step.observation});
        transcript.steps.push_back(std::move(step));
    }
    return transcript;
}

namespace {

std::vector<Insertion> parse_insertions(const std::string& answer) {
    std::vector<Insertion> insertions;
    const auto lines = split_lines(answer);

    std::size_t i = 0;
    while (i < lines.size()) {
        const std::string line = trim(lines[i]);
        if (line.rfind("Insert-At:", 0) != 0) {
            if (!line.empty() && insertions.empty()) {
                throw EnrichmentFormatError(
                    "final answer must start each packet with an 'Insert-At:' line, got '" +
                    line + "'");
            }
            ++i;
            continue;
        }
        const std::string pos_text = trim(line.substr(10));
        std::size_t position = 0;
        try {
            std::size_t consumed = 0;
            position = std::stoul(pos_text, &consumed);
            if (consumed != pos_text.size()) throw std::invalid_argument(pos_text);
        } catch (const std::exception&) {
            throw EnrichmentFormatError("bad Insert-At position: '" + pos_text + "'");
        }
        ++i;

        // packet block: lines until the next Insert-At, outer blanks trimmed
        std::vector<std::string> block;
        while (i < lines.size() && trim(lines[i]).rfind("Insert-At:", 0) != 0) {
            block.push_back(lines[i]);
            ++i;
        }
        while (!block.empty() && trim(block.front()).empty()) block.erase(block.begin());
        while (!block.empty() && trim(block.back()).empty()) block.pop_back();
        if (block.empty()) {
            throw EnrichmentFormatError("Insert-At " + std::to_string(position) +
                                        " is not followed by a packet");
        }
        std::string packet;
        for (const auto& b : block) {
            packet += b;
            packet += '\n';
        }

        Insertion ins;
        ins.position = position;
        try {
            ins.request = parse_request(packet);
        } catch (const Error& e) {
            throw EnrichmentFormatError("packet at Insert-At " + std::to_string(position) +
                                        " does not parse: " + e.what());
        }
        insertions.push_back(std::move(ins));
    }
    if (insertions.empty()) {
        throw EnrichmentFormatError("final answer contains no Insert-At packets");
    }
    return insertions;
}

} // namespace

EnrichedSeedSet enrich_seeds(const std::vector<RtspRequest>& seeds,
                             const VectorStore& store,
                             const EmbeddingProviderConfig& embedder,
                             const AgentConfig& config, ChatModel& model,
                             const TransitionTable& table,
                             ReActTranscript* transcript) {
    const auto pre = validate_sequence(seeds, table);
    if (!pre.valid) {
        throw ArgumentError("enrich_seeds: seed sequence is not conformant: " +
                            pre.reason);
    }

    std::string question =
        "The current client request sequence has " + std::to_string(seeds.size()) +
        " requests:\n\n";
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        question += "Request " + std::to_string(i) + ":\n" +
                    serialize_request(seeds[i]) + "\n";
    }
    question +=
        "Propose new requests to insert, with one 'Insert-At: <position>' line "
        "before each packet.";

    const auto session = run_react(question, store, embedder, config, model);
    if (transcript) *transcript = session;
    if (!session.final_answer) {
        throw EnrichmentFormatError("agent produced no final answer within " +
                                    std::to_string(config.max_iterations) +
                                    " iterations");
    }

    EnrichedSeedSet result;
    result.original = seeds;
    result.enriched = seeds;
    result.insertions = parse_insertions(*session.final_answer);

    for (const auto& ins : result.insertions) {
        if (ins.position > result.enriched.size()) {
            throw EnrichmentFormatError(
                "Insert-At " + std::to_string(ins.position) +
                " is out of range for a sequence of length " +
                std::to_string(result.enriched.size()));
        }
        result.enriched.insert(
            result.enriched.begin() + static_cast<std::ptrdiff_t>(ins.position),
            ins.request);
    }

    result.conformance = validate_sequence(result.enriched, table);
    if (!result.conformance.valid) {
        throw EnrichmentRejectedError(
            "enriched sequence fails conformance: " + result.conformance.reason,
            result.conformance);
    }
    for (std::size_t i = 0; i < result.enriched.size(); ++i) {
        for (const auto& header : required_headers(result.enriched[i].method)) {
            if (!find_header(result.enriched[i], header)) {
                throw EnrichmentRejectedError(
                    "request " + std::to_string(i) + " (" +
                        method_name(result.enriched[i].method) +
                        ") is missing required header " + header,
                    result.conformance);
            }
        }
    }
    return result;
}

} // namespace ragseed
