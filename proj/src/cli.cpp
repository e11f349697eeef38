#include "ragseed/cli.hpp"

#include "ragseed/corpus.hpp"
#include "ragseed/rtsp.hpp"
#include "ragseed/util.hpp"
#include "ragseed/vector_store.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <memory>

namespace ragseed {

namespace {

std::size_t parse_size(const std::string& key, const std::string& value) {
    try {
        std::size_t consumed = 0;
        const unsigned long long parsed = std::stoull(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return static_cast<std::size_t>(parsed);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' needs a non-negative integer, got '" +
                          value + "'");
    }
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t consumed = 0;
        const double parsed = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' needs a number, got '" + value + "'");
    }
}

bool parse_switch(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true") return true;
    if (value == "off" || value == "false") return false;
    throw ConfigError("config key '" + key + "' needs on/off, got '" + value + "'");
}

} // namespace

CliConfig parse_cli_config(const std::string& text) {
    CliConfig config;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(i + 1) +
                              " is not 'key = value': '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "embedding.kind") {
            if (value == "offline") {
                config.embedding.kind = ProviderKind::DeterministicOffline;
            } else if (value == "remote") {
                config.embedding.kind = ProviderKind::Remote;
            } else {
                throw ConfigError("embedding.kind must be offline or remote, got '" +
                                  value + "'");
            }
        } else if (key == "embedding.endpoint") {
            config.embedding.endpoint_url = value;
        } else if (key == "embedding.model") {
            config.embedding.model_name = value;
        } else if (key == "embedding.dimension") {
            config.embedding.dimension = parse_size(key, value);
            if (config.embedding.dimension == 0) {
                throw ConfigError("embedding.dimension must be positive");
            }
        } else if (key == "chat.endpoint") {
            config.chat.endpoint_url = value;
        } else if (key == "chat.model") {
            config.chat.model_name = value;
        } else if (key == "chunk_size") {
            config.chunk_size = parse_size(key, value);
            if (config.chunk_size == 0) throw ConfigError("chunk_size must be positive");
        } else if (key == "overlap") {
            config.overlap = parse_size(key, value);
        } else if (key == "k") {
            config.k = parse_size(key, value);
            if (config.k == 0) throw ConfigError("k must be positive");
        } else if (key == "max_iterations") {
            config.max_iterations = parse_size(key, value);
            if (config.max_iterations == 0) {
                throw ConfigError("max_iterations must be positive");
            }
        } else if (key == "agent.temperature") {
            config.temperature = parse_real(key, value);
        } else if (key == "agent.stop_marker") {
            config.stop_marker = value;
        } else if (key == "agent.observation_budget") {
            config.observation_char_budget = parse_size(key, value);
        } else if (key == "metrics.max_n") {
            config.metrics.max_n = parse_size(key, value);
        } else if (key == "metrics.smoothing") {
            config.metrics.smoothing = parse_switch(key, value);
        } else if (key == "metrics.rouge") {
            if (value == "lcs") {
                config.metrics.rouge = RougeVariant::lcs();
            } else if (value.size() > 1 && value[0] == 'n') {
                config.metrics.rouge = RougeVariant::ngram(parse_size(key, value.substr(1)));
            } else {
                throw ConfigError("metrics.rouge must be n<order> or lcs, got '" + value +
                                  "'");
            }
        } else if (key == "paths.corpus") {
            config.corpus_path = value;
        } else if (key == "paths.index") {
            config.index_path = value;
        } else if (key == "paths.logs") {
            config.logs_path = value;
        } else if (key == "paths.reports") {
            config.reports_path = value;
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return config;
}

CliConfig load_cli_config(const std::string& path) {
    return parse_cli_config(read_file(path));
}

namespace {

struct CliOptions {
    std::string config_path;
    bool offline = false;
    std::string out;

    std::string rfc;
    std::string doc_id;

    std::string corpus;

    std::string seeds;
    std::string index;
    std::string script;
    std::string transcripts;

    std::string logs;
    std::string pairs;
    std::string label = "model";

    std::vector<std::string> baselines;
    std::vector<std::string> agents;
    std::string format = "plain-table";
};

std::string resolve_path(const std::string& flag_value, const std::string& config_value,
                         const char* what) {
    if (!flag_value.empty()) return flag_value;
    if (!config_value.empty()) return config_value;
    throw ConfigError(std::string("no path given for ") + what +
                      " (flag or config entry required)");
}

std::string require_exists(const std::string& path, const char* what) {
    if (!std::filesystem::exists(path)) {
        throw IoError(std::string(what) + " not found: " + path);
    }
    return path;
}

int cmd_ingest(const CliOptions& opts, const CliConfig& config) {
    const std::string rfc_path = require_exists(opts.rfc, "RFC file");
    const std::string out = resolve_path(opts.out, config.corpus_path, "--out");

    RawDocument raw;
    raw.source_path = rfc_path;
    raw.id = !opts.doc_id.empty() ? opts.doc_id
                                  : std::filesystem::path(rfc_path).stem().string();
    raw.text = read_file(rfc_path);

    const CleanDocument doc = clean(raw, CleaningRules::rfc_defaults());
    const auto chunks = chunk(doc, config.chunk_size, config.overlap);
    write_file(out, corpus_to_jsonl(chunks));
    std::cout << "ingest: " << chunks.size() << " chunks from document '" << raw.id
              << "' -> " << out << "\n";
    return 0;
}

int cmd_index(const CliOptions& opts, const CliConfig& config) {
    const std::string corpus_path = require_exists(
        resolve_path(opts.corpus, config.corpus_path, "--corpus"), "corpus file");
    const std::string out = resolve_path(opts.out, config.index_path, "--out");

    const auto chunks = corpus_from_jsonl(read_file(corpus_path));
    const VectorStore store = build_index(chunks, config.embedding);
    save_store(store, out);
    std::cout << "index: " << store.entries.size() << " entries, dimension "
              << store.dimension << " -> " << out << "\n";
    return 0;
}

std::string render_transcript(const std::string& sequence_id,
                              const ReActTranscript& transcript,
                              const EnrichedSeedSet& result) {
    std::string out = "=== sequence " + sequence_id + " ===\n";
    out += "Question:\n" + transcript.question + "\n";
    for (std::size_t i = 0; i < transcript.model_turns.size(); ++i) {
        out += "--- model turn " + std::to_string(i + 1) + " ---\n";
        out += transcript.model_turns[i];
        if (out.empty() || out.back() != '\n') out += '\n';
    }
    out += "Retrieved chunks:";
    for (const auto& id : transcript.retrieved_chunk_ids) out += " " + id;
    out += "\n";
    out += "Insertions:";
    for (const auto& ins : result.insertions) {
        out += " " + method_name(ins.request.method) + "@" + std::to_string(ins.position);
    }
    out += "\nState trace: INIT";
    for (const auto state : result.conformance.state_trace) {
        out += std::string(" -> ") + state_name(state);
    }
    out += "\n\n";
    return out;
}

int cmd_enrich(const CliOptions& opts, const CliConfig& config) {
    const std::string seeds_path = require_exists(opts.seeds, "seed file");
    const std::string index_path = require_exists(
        resolve_path(opts.index, config.index_path, "--index"), "index file");
    if (opts.out.empty()) throw ConfigError("enrich requires --out");
    const std::string transcripts_path =
        !opts.transcripts.empty() ? opts.transcripts : opts.out + ".transcripts.txt";

    const VectorStore store = load_store(index_path);
    const auto sequences = seed_sequences_from_jsonl(read_file(seeds_path));
    if (sequences.empty()) throw ArgumentError("seed file holds no sequences");

    std::unique_ptr<ChatModel> model;
    if (!opts.script.empty()) {
        model = std::make_unique<ScriptedChatModel>(
            ScriptedChatModel::from_file(require_exists(opts.script, "script file")));
    } else if (opts.offline) {
        throw ConfigError("--offline enrich requires --script <replies file>");
    } else {
        model = std::make_unique<RemoteChatModel>(config.chat);
    }

    AgentConfig agent;
    agent.max_iterations = config.max_iterations;
    agent.k = config.k;
    agent.temperature = config.temperature;
    agent.llm_endpoint = config.chat;
    agent.stop_marker = config.stop_marker;
    agent.observation_char_budget = config.observation_char_budget;

    const TransitionTable table = default_transition_table();

    std::vector<SeedSequence> enriched;
    std::string transcripts;
    for (const auto& sequence : sequences) {
        std::vector<RtspRequest> requests;
        for (std::size_t i = 0; i < sequence.packets.size(); ++i) {
            try {
                requests.push_back(parse_request(sequence.packets[i]));
            } catch (const Error& e) {
                throw ArgumentError("sequence '" + sequence.id + "' packet " +
                                    std::to_string(i) + ": " + e.what());
            }
        }
        ReActTranscript transcript;
        const EnrichedSeedSet result = enrich_seeds(requests, store, config.embedding,
                                                    agent, *model, table, &transcript);
        SeedSequence out_sequence;
        out_sequence.id = sequence.id;
        for (const auto& request : result.enriched) {
            out_sequence.packets.push_back(serialize_request(request));
        }
        enriched.push_back(std::move(out_sequence));
        transcripts += render_transcript(sequence.id, transcript, result);
    }

    write_file(opts.out, seed_sequences_to_jsonl(enriched));
    write_file(transcripts_path, transcripts);
    std::cout << "enrich: " << sequences.size() << " sequence(s) -> " << opts.out
              << " (transcripts: " << transcripts_path << ")\n";
    return 0;
}

int cmd_evaluate(const CliOptions& opts, const CliConfig& config) {
    const std::string out = resolve_path(opts.out, config.reports_path, "--out");

    std::vector<EvalPair> pairs;
    std::vector<std::string> diagnostics;
    if (!opts.pairs.empty()) {
        pairs = eval_pairs_from_jsonl(
            read_file(require_exists(opts.pairs, "pairs file")));
    } else {
        const std::string logs_path = require_exists(
            resolve_path(opts.logs, config.logs_path, "--logs"), "log file");
        const IngestResult ingest = ingest_logs(logs_path);
        for (const auto& reject : ingest.rejects) {
            diagnostics.push_back("log line " + std::to_string(reject.line_number) +
                                  " rejected: " + reject.reason);
        }
        ExtractionResult extraction = extract_eval_pairs(ingest.entries);
        for (const auto& unmatched : extraction.unmatched) {
            diagnostics.push_back("unmatched: " + unmatched);
        }
        pairs = std::move(extraction.pairs);
    }
    if (pairs.empty()) throw ArgumentError("no evaluation pairs found");

    const auto& methods = evaluation_methods();
    std::vector<std::pair<RtspMethod, MetricScores>> scores;
    for (const auto& pair : pairs) {
        if (std::find(methods.begin(), methods.end(), pair.method) == methods.end()) {
            diagnostics.push_back("pair " + pair.id + " (" + method_name(pair.method) +
                                  ") excluded: method is not evaluated");
            continue;
        }
        scores.emplace_back(pair.method, evaluate_pair(pair, config.metrics, &diagnostics));
    }

    std::vector<RtspMethod> omitted;
    const ModelReport report = aggregate_report(scores, opts.label, &omitted);
    write_file(out, render_report(report, ReportFormat::StructuredRecords));

    for (const auto& diagnostic : diagnostics) {
        std::cout << "evaluate: " << diagnostic << "\n";
    }
    std::cout << "evaluate: " << scores.size() << " pair(s) for model '" << opts.label
              << "' -> " << out << "\n";
    if (!omitted.empty()) {
        std::string names;
        for (const auto method : omitted) names += " " + method_name(method);
        std::cerr << "error: no pairs for method(s):" << names << "\n";
        return 1;
    }
    return 0;
}

int cmd_report(const CliOptions& opts, const CliConfig&) {
    if (opts.baselines.empty() || opts.baselines.size() != opts.agents.size()) {
        throw ArgumentError("report needs matching --baseline/--agent score files (" +
                            std::to_string(opts.baselines.size()) + " baseline vs " +
                            std::to_string(opts.agents.size()) + " agent)");
    }
    const ReportFormat format = report_format_from_name(opts.format);

    std::vector<ModelReport> baselines;
    std::vector<ModelReport> agents;
    for (const auto& path : opts.baselines) {
        baselines.push_back(
            model_report_from_records(read_file(require_exists(path, "baseline file"))));
    }
    for (const auto& path : opts.agents) {
        agents.push_back(
            model_report_from_records(read_file(require_exists(path, "agent file"))));
    }

    const DeltaReport delta = improvement_delta(baselines, agents);

    std::string text;
    for (std::size_t i = 0; i < baselines.size(); ++i) {
        text += render_report(baselines[i], format) + "\n";
        text += render_report(agents[i], format) + "\n";
    }
    text += render_report(delta, format);

    if (opts.out.empty()) {
        std::cout << text;
    } else {
        write_file(opts.out, text);
        std::cout << "report: " << baselines.size() << " model(s) -> " << opts.out << "\n";
    }
    return 0;
}

} // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"RFC-grounded RAG agent pipeline for RTSP fuzzing seeds", "ragseed"};
    app.require_subcommand(1);

    CliOptions opts;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path,
                        "configuration file ('key = value' lines)");
        cmd->add_flag("--offline", opts.offline,
                      "deterministic embedder and scripted chat model; touches no network");
        cmd->add_option("--out", opts.out, "output path");
    };

    CLI::App* ingest =
        app.add_subcommand("ingest", "clean an RFC text and write the chunk corpus");
    ingest->add_option("--rfc", opts.rfc, "RFC plain-text file")->required();
    ingest->add_option("--doc-id", opts.doc_id, "document id (default: file stem)");
    add_common(ingest);

    CLI::App* index =
        app.add_subcommand("index", "embed a chunk corpus into a vector index");
    index->add_option("--corpus", opts.corpus, "chunk corpus (JSONL)");
    add_common(index);

    CLI::App* enrich = app.add_subcommand(
        "enrich", "run the agent to insert requests into seed sequences");
    enrich->add_option("--seeds", opts.seeds, "seed sequence file (JSONL)")->required();
    enrich->add_option("--index", opts.index, "vector index file");
    enrich->add_option("--script", opts.script,
                       "scripted chat replies ('---' separated lines)");
    enrich->add_option("--transcripts", opts.transcripts,
                       "transcript output path (default: <out>.transcripts.txt)");
    add_common(enrich);

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "score generated packets against ground truth");
    evaluate->add_option("--logs", opts.logs, "interaction log file (JSONL)");
    evaluate->add_option("--pairs", opts.pairs,
                         "pre-paired evaluation file (JSONL), bypasses extraction");
    evaluate->add_option("--label", opts.label, "model label for the report");
    add_common(evaluate);

    CLI::App* report = app.add_subcommand(
        "report", "render score tables and the baseline-vs-agent delta report");
    report->add_option("--baseline", opts.baselines,
                       "baseline score file in structured-records form (repeatable)");
    report->add_option("--agent", opts.agents,
                       "agent score file in structured-records form (repeatable)");
    report->add_option("--format", opts.format,
                       "plain-table | comma-separated | structured-records");
    add_common(report);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CliConfig config;
        if (!opts.config_path.empty()) {
            config = load_cli_config(require_exists(opts.config_path, "config file"));
        }
        if (opts.offline) config.embedding.kind = ProviderKind::DeterministicOffline;

        if (app.got_subcommand(ingest)) return cmd_ingest(opts, config);
        if (app.got_subcommand(index)) return cmd_index(opts, config);
        if (app.got_subcommand(enrich)) return cmd_enrich(opts, config);
        if (app.got_subcommand(evaluate)) return cmd_evaluate(opts, config);
        if (app.got_subcommand(report)) return cmd_report(opts, config);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace ragseed
