#pragma once

#include "ragseed/chat.hpp"
#include "ragseed/embedding.hpp"
#include "ragseed/errors.hpp"
#include "ragseed/rtsp.hpp"
#include "ragseed/vector_store.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ragseed {

/// Three-section system prompt. Slots are {identifier} markers; every slot
/// referenced by a section must be listed in slot_names.
struct PromptTemplate {
    std::string agent_task;
    std::string agent_goal;
    std::string expected_output;
    std::set<std::string> slot_names;
};

/// The shipped default: enrichment task, retrieval-grounding goal, and the
/// Insert-At answer convention. Slots: {stop_marker}.
PromptTemplate default_prompt_template();

class RenderError : public Error {
public:
    using Error::Error;
};

/// Concatenates Agent Task, Agent Goal, Expected Output with all slots
/// substituted. A slot without a value raises RenderError naming it.
std::string render_prompt(const PromptTemplate& tmpl,
                          const std::map<std::string, std::string>& slots);

struct ReActAction {
    enum class Kind { Retrieve, Finish } kind = Kind::Retrieve;
    std::string query;   // Retrieve
    std::string answer;  // Finish
};

struct ReActStep {
    std::string thought;
    ReActAction action;
    std::optional<std::string> observation;  // retrieve steps only
};

class MalformedStepError : public Error {
public:
    using Error::Error;
};

/// Extracts one step from a model turn: "Thought:" text, an
/// "Action: retrieve[<query>]" line, or the stop marker followed by the
/// final answer. Finish wins when both appear. Neither present raises
/// MalformedStepError.
ReActStep parse_react_output(const std::string& model_text,
                             const std::string& stop_marker);

struct ReActTranscript {
    std::string question;
    std::vector<ReActStep> steps;
    std::optional<std::string> final_answer;
    std::vector<std::string> retrieved_chunk_ids;
    std::vector<std::string> model_turns;  // every raw model output, retries included
};

struct AgentConfig {
    std::size_t max_iterations = 5;
    std::size_t k = 5;
    double temperature = 0.0;
    ChatEndpointConfig llm_endpoint;
    std::string stop_marker = "Final Answer:";
    std::size_t observation_char_budget = 8000;
    PromptTemplate prompt = default_prompt_template();
};

class AgentRunError : public Error {
public:
    using Error::Error;
};

/// Runs the ReAct loop: model turn, parse, execute retrieval, feed the
/// observation back, until a finish step or max_iterations. One malformed
/// turn gets exactly one corrective re-prompt before the iteration counts
/// as failed. Returns the transcript either way; final_answer is absent
/// when the iteration budget ran out.
ReActTranscript run_react(const std::string& question, const VectorStore& store,
                          const EmbeddingProviderConfig& embedder,
                          const AgentConfig& config, ChatModel& model);

struct Insertion {
    std::size_t position = 0;
    RtspRequest request;
};

struct EnrichedSeedSet {
    std::vector<RtspRequest> original;
    std::vector<RtspRequest> enriched;
    std::vector<Insertion> insertions;
    ConformanceReport conformance;
};

class EnrichmentFormatError : public Error {
public:
    using Error::Error;
};

class EnrichmentRejectedError : public Error {
public:
    EnrichmentRejectedError(const std::string& msg, ConformanceReport report)
        : Error(msg), report(std::move(report)) {}
    ConformanceReport report;
};

/// Asks the agent for insertions into `seeds`, parses the Insert-At blocks of
/// its final answer, applies them in order, and accepts the result only if
/// the enriched sequence passes validate_sequence and every request carries
/// its required headers. When `transcript` is given it receives the full
/// ReAct session, even when enrichment is rejected afterwards.
EnrichedSeedSet enrich_seeds(const std::vector<RtspRequest>& seeds,
                             const VectorStore& store,
                             const EmbeddingProviderConfig& embedder,
                             const AgentConfig& config, ChatModel& model,
                             const TransitionTable& table,
                             ReActTranscript* transcript = nullptr);

} // namespace ragseed
