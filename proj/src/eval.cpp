#include "ragseed/eval.hpp"

#include "ragseed/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <optional>

namespace ragseed {

using nlohmann::json;

std::string direction_name(LogDirection direction) {
    switch (direction) {
        case LogDirection::ClientToServer: return "client_to_server";
        case LogDirection::ServerToClient: return "server_to_client";
        case LogDirection::FuzzerQuery: return "fuzzer_query";
        case LogDirection::ModelAnswer: return "model_answer";
    }
    throw ArgumentError("direction_name: invalid direction");
}

LogDirection direction_from_name(const std::string& name) {
    if (name == "client_to_server") return LogDirection::ClientToServer;
    if (name == "server_to_client") return LogDirection::ServerToClient;
    if (name == "fuzzer_query") return LogDirection::FuzzerQuery;
    if (name == "model_answer") return LogDirection::ModelAnswer;
    throw ArgumentError("unknown log direction '" + name + "'");
}

IngestResult ingest_logs(const std::string& path) {
    const std::string text = read_file(path);
    IngestResult result;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_number = i + 1;
        if (trim(lines[i]).empty()) continue;
        json record = json::parse(lines[i], nullptr, false);
        if (record.is_discarded() || !record.is_object()) {
            result.rejects.push_back({line_number, "not a JSON object"});
            continue;
        }
        if (!record.contains("timestamp") || !record["timestamp"].is_string() ||
            !record.contains("direction") || !record["direction"].is_string() ||
            !record.contains("payload") || !record["payload"].is_string()) {
            result.rejects.push_back(
                {line_number, "missing timestamp/direction/payload string fields"});
            continue;
        }
        LogEntry entry;
        entry.timestamp = record["timestamp"].get<std::string>();
        try {
            entry.direction = direction_from_name(record["direction"].get<std::string>());
        } catch (const ArgumentError& e) {
            result.rejects.push_back({line_number, e.what()});
            continue;
        }
        if (!base64_decode(record["payload"].get<std::string>(), entry.payload)) {
            result.rejects.push_back({line_number, "payload is not valid base64"});
            continue;
        }
        if (entry.payload.empty()) {
            result.rejects.push_back({line_number, "payload is empty"});
            continue;
        }
        result.entries.push_back(std::move(entry));
    }
    return result;
}

namespace {

// First whitespace token of the payload's first line, when it names a method.
std::optional<RtspMethod> method_hint(const std::string& payload) {
    std::size_t end = payload.find('\n');
    std::string first_line = payload.substr(0, end);
    if (!first_line.empty() && first_line.back() == '\r') first_line.pop_back();
    const auto tokens = whitespace_tokens(first_line);
    if (tokens.empty()) return std::nullopt;
    return method_from_token(tokens.front());
}

} // namespace

ExtractionResult extract_eval_pairs(const std::vector<LogEntry>& entries) {
    ExtractionResult result;
    std::vector<bool> used(entries.size(), false);
    std::size_t next_id = 1;

    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].direction != LogDirection::FuzzerQuery) continue;

        std::size_t answer = entries.size();
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            if (!used[j] && entries[j].direction == LogDirection::ModelAnswer) {
                answer = j;
                break;
            }
        }
        if (answer == entries.size()) {
            result.unmatched.push_back("query at entry " + std::to_string(i + 1) +
                                       " has no model answer");
            continue;
        }
        used[answer] = true;

        const auto expected = method_hint(entries[answer].payload);
        std::size_t truth = entries.size();
        std::optional<RtspRequest> truth_request;
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            if (used[j] || entries[j].direction != LogDirection::ClientToServer) continue;
            try {
                RtspRequest request = parse_request(entries[j].payload);
                if (!expected || request.method == *expected) {
                    truth = j;
                    truth_request = std::move(request);
                    break;
                }
            } catch (const Error&) {
                // not a parseable client request; keep scanning
            }
        }
        if (!truth_request) {
            result.unmatched.push_back(
                "query at entry " + std::to_string(i + 1) +
                " has no matching client_to_server ground truth" +
                (expected ? " for method " + method_name(*expected) : ""));
            continue;
        }
        used[truth] = true;

        EvalPair pair;
        pair.id = "pair-" + std::to_string(next_id++);
        pair.method = truth_request->method;
        pair.query = entries[i].payload;
        pair.generated = entries[answer].payload;
        pair.ground_truth = entries[truth].payload;
        result.pairs.push_back(std::move(pair));
    }
    return result;
}

MetricScores evaluate_pair(const EvalPair& pair, const MetricSettings& settings,
                           std::vector<std::string>* diagnostics) {
    TokenSequence reference;
    try {
        reference = tokenize_packet(pair.ground_truth, TokenSource::Reference);
    } catch (const TokenizationError& e) {
        throw ArgumentError("pair " + pair.id +
                            ": ground truth does not tokenize: " + e.what());
    }
    if (reference.tokens.empty()) {
        throw ArgumentError("pair " + pair.id + ": ground truth tokenizes empty");
    }

    TokenSequence candidate;
    try {
        candidate = tokenize_packet(pair.generated, TokenSource::Candidate);
    } catch (const TokenizationError&) {
        if (diagnostics) {
            diagnostics->push_back("pair " + pair.id +
                                   ": generated payload is not valid UTF-8; "
                                   "floor scores (bleu 0, rouge 0, wer 1) applied");
        }
        return {0.0, 0.0, 1.0};
    }

    MetricScores scores;
    scores.bleu = bleu(candidate, reference, settings.max_n, settings.smoothing);
    scores.rouge = rouge(candidate, reference, settings.rouge);
    scores.wer = wer(candidate, reference);
    return scores;
}

ModelReport aggregate_report(const std::vector<std::pair<RtspMethod, MetricScores>>& scores,
                             const std::string& model_label,
                             std::vector<RtspMethod>* omitted_methods) {
    if (scores.empty()) throw ArgumentError("aggregate_report: no scores");

    ModelReport report;
    report.model_label = model_label;
    double total_bleu = 0.0, total_rouge = 0.0, total_wer = 0.0;
    std::size_t total_pairs = 0;

    for (RtspMethod method : evaluation_methods()) {
        MethodReport row;
        row.method = method;
        for (const auto& [pair_method, s] : scores) {
            if (pair_method != method) continue;
            ++row.pair_count;
            row.bleu += s.bleu;
            row.rouge += s.rouge;
            row.wer += s.wer;
        }
        if (row.pair_count == 0) {
            if (omitted_methods) omitted_methods->push_back(method);
            continue;
        }
        total_bleu += row.bleu;
        total_rouge += row.rouge;
        total_wer += row.wer;
        total_pairs += row.pair_count;
        row.bleu /= static_cast<double>(row.pair_count);
        row.rouge /= static_cast<double>(row.pair_count);
        row.wer /= static_cast<double>(row.pair_count);
        report.rows.push_back(row);
    }

    if (total_pairs == 0) {
        throw ArgumentError("aggregate_report: no scores for any evaluated method");
    }
    report.average.bleu = total_bleu / static_cast<double>(total_pairs);
    report.average.rouge = total_rouge / static_cast<double>(total_pairs);
    report.average.wer = total_wer / static_cast<double>(total_pairs);
    return report;
}

DeltaReport improvement_delta(const std::vector<ModelReport>& baselines,
                              const std::vector<ModelReport>& agents) {
    if (baselines.empty()) throw ArgumentError("improvement_delta: no baseline reports");
    if (baselines.size() != agents.size()) {
        throw ArgumentError("improvement_delta: " + std::to_string(baselines.size()) +
                            " baseline reports vs " + std::to_string(agents.size()) +
                            " agent reports");
    }

    DeltaReport delta;
    std::vector<bool> used(agents.size(), false);
    double sum_bleu = 0.0, sum_rouge = 0.0, sum_wer = 0.0;

    for (const auto& baseline : baselines) {
        const ModelReport* agent = nullptr;
        for (std::size_t j = 0; j < agents.size(); ++j) {
            if (!used[j] && agents[j].model_label == baseline.model_label) {
                used[j] = true;
                agent = &agents[j];
                break;
            }
        }
        if (!agent) {
            throw ArgumentError("improvement_delta: no agent report for model '" +
                                baseline.model_label + "'");
        }
        ModelDelta d;
        d.model_label = baseline.model_label;
        d.bleu = agent->average.bleu - baseline.average.bleu;
        d.rouge = agent->average.rouge - baseline.average.rouge;
        d.wer = baseline.average.wer - agent->average.wer;
        sum_bleu += d.bleu;
        sum_rouge += d.rouge;
        sum_wer += d.wer;
        delta.per_model.push_back(std::move(d));
    }

    const double n = static_cast<double>(delta.per_model.size());
    delta.cross_model_mean = {sum_bleu / n, sum_rouge / n, sum_wer / n};
    return delta;
}

ReportFormat report_format_from_name(const std::string& name) {
    if (name == "plain-table") return ReportFormat::PlainTable;
    if (name == "comma-separated") return ReportFormat::CommaSeparated;
    if (name == "structured-records") return ReportFormat::StructuredRecords;
    throw ArgumentError("unknown report format '" + name +
                        "' (expected plain-table, comma-separated, or structured-records)");
}

std::string report_format_name(ReportFormat format) {
    switch (format) {
        case ReportFormat::PlainTable: return "plain-table";
        case ReportFormat::CommaSeparated: return "comma-separated";
        case ReportFormat::StructuredRecords: return "structured-records";
    }
    throw ArgumentError("report_format_name: invalid format");
}

namespace {

std::string pct(double fraction) { return format_percent(fraction); }

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

constexpr std::size_t kLabelWidth = 18;
constexpr std::size_t kCountWidth = 7;
constexpr std::size_t kMetricWidth = 10;

std::string table_row(const std::string& label, const std::string& count,
                      const std::string& a, const std::string& b,
                      const std::string& c) {
    return pad_right(label, kLabelWidth) + pad_left(count, kCountWidth) +
           pad_left(a, kMetricWidth) + pad_left(b, kMetricWidth) +
           pad_left(c, kMetricWidth) + "\n";
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char ch : value) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

} // namespace

std::string render_report(const ModelReport& report, ReportFormat format) {
    std::size_t total_pairs = 0;
    for (const auto& row : report.rows) total_pairs += row.pair_count;

    switch (format) {
        case ReportFormat::PlainTable: {
            std::string out = "Model: " + report.model_label + "\n";
            out += table_row("Method", "Pairs", "BLEU", "ROUGE", "WER");
            for (const auto& row : report.rows) {
                out += table_row(method_name(row.method), std::to_string(row.pair_count),
                                 pct(row.bleu), pct(row.rouge), pct(row.wer));
            }
            out += std::string(kLabelWidth + kCountWidth + 3 * kMetricWidth, '-') + "\n";
            out += table_row("Average Scores", std::to_string(total_pairs),
                             pct(report.average.bleu), pct(report.average.rouge),
                             pct(report.average.wer));
            return out;
        }
        case ReportFormat::CommaSeparated: {
            std::string out = "model,method,pair_count,bleu,rouge,wer\n";
            for (const auto& row : report.rows) {
                out += csv_field(report.model_label) + "," + method_name(row.method) +
                       "," + std::to_string(row.pair_count) + "," + pct(row.bleu) + "," +
                       pct(row.rouge) + "," + pct(row.wer) + "\n";
            }
            out += csv_field(report.model_label) + ",Average Scores," +
                   std::to_string(total_pairs) + "," + pct(report.average.bleu) + "," +
                   pct(report.average.rouge) + "," + pct(report.average.wer) + "\n";
            return out;
        }
        case ReportFormat::StructuredRecords: {
            std::string out;
            out += json{{"kind", "model_report"}, {"model_label", report.model_label}}
                       .dump() +
                   "\n";
            for (const auto& row : report.rows) {
                out += json{{"kind", "method_row"},
                            {"method", method_name(row.method)},
                            {"pair_count", row.pair_count},
                            {"bleu", row.bleu},
                            {"rouge", row.rouge},
                            {"wer", row.wer}}
                           .dump() +
                       "\n";
            }
            out += json{{"kind", "average"},
                        {"bleu", report.average.bleu},
                        {"rouge", report.average.rouge},
                        {"wer", report.average.wer}}
                       .dump() +
                   "\n";
            return out;
        }
    }
    throw ArgumentError("render_report: unknown format");
}

std::string render_report(const DeltaReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::PlainTable: {
            std::string out = "Improvement (agent vs baseline)\n";
            out += table_row("Model", "", "BLEU", "ROUGE", "WER");
            for (const auto& d : report.per_model) {
                out += table_row(d.model_label, "", pct(d.bleu), pct(d.rouge), pct(d.wer));
            }
            out += std::string(kLabelWidth + kCountWidth + 3 * kMetricWidth, '-') + "\n";
            out += table_row("Cross-Model Mean", "", pct(report.cross_model_mean.bleu),
                             pct(report.cross_model_mean.rouge),
                             pct(report.cross_model_mean.wer));
            return out;
        }
        case ReportFormat::CommaSeparated: {
            std::string out = "model,delta_bleu,delta_rouge,delta_wer\n";
            for (const auto& d : report.per_model) {
                out += csv_field(d.model_label) + "," + pct(d.bleu) + "," + pct(d.rouge) +
                       "," + pct(d.wer) + "\n";
            }
            out += "Cross-Model Mean," + pct(report.cross_model_mean.bleu) + "," +
                   pct(report.cross_model_mean.rouge) + "," +
                   pct(report.cross_model_mean.wer) + "\n";
            return out;
        }
        case ReportFormat::StructuredRecords: {
            std::string out;
            out += json{{"kind", "delta_report"},
                        {"model_count", report.per_model.size()}}
                       .dump() +
                   "\n";
            for (const auto& d : report.per_model) {
                out += json{{"kind", "model_delta"},
                            {"model_label", d.model_label},
                            {"bleu", d.bleu},
                            {"rouge", d.rouge},
                            {"wer", d.wer}}
                           .dump() +
                       "\n";
            }
            out += json{{"kind", "cross_model_mean"},
                        {"bleu", report.cross_model_mean.bleu},
                        {"rouge", report.cross_model_mean.rouge},
                        {"wer", report.cross_model_mean.wer}}
                       .dump() +
                   "\n";
            return out;
        }
    }
    throw ArgumentError("render_report: unknown format");
}

namespace {

json parse_record_line(const std::string& line, std::size_t line_number) {
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object() || !record.contains("kind") ||
        !record["kind"].is_string()) {
        throw ArgumentError("record line " + std::to_string(line_number) +
                            " is not an object with a string 'kind'");
    }
    return record;
}

double number_field(const json& record, const char* name, std::size_t line_number) {
    if (!record.contains(name) || !record[name].is_number()) {
        throw ArgumentError("record line " + std::to_string(line_number) +
                            " is missing number field '" + name + "'");
    }
    return record[name].get<double>();
}

std::string string_field(const json& record, const char* name, std::size_t line_number) {
    if (!record.contains(name) || !record[name].is_string()) {
        throw ArgumentError("record line " + std::to_string(line_number) +
                            " is missing string field '" + name + "'");
    }
    return record[name].get<std::string>();
}

} // namespace

ModelReport model_report_from_records(const std::string& text) {
    ModelReport report;
    bool saw_header = false;
    bool saw_average = false;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const std::size_t line_number = i + 1;
        const json record = parse_record_line(lines[i], line_number);
        const std::string kind = record["kind"].get<std::string>();
        if (kind == "model_report") {
            if (saw_header) {
                throw ArgumentError("duplicate model_report header at line " +
                                    std::to_string(line_number));
            }
            saw_header = true;
            report.model_label = string_field(record, "model_label", line_number);
        } else if (kind == "method_row") {
            MethodReport row;
            const std::string method_token = string_field(record, "method", line_number);
            const auto method = method_from_token(method_token);
            if (!method) {
                throw ArgumentError("record line " + std::to_string(line_number) +
                                    " names unknown method '" + method_token + "'");
            }
            row.method = *method;
            if (!record.contains("pair_count") ||
                !record["pair_count"].is_number_unsigned()) {
                throw ArgumentError("record line " + std::to_string(line_number) +
                                    " is missing unsigned field 'pair_count'");
            }
            row.pair_count = record["pair_count"].get<std::size_t>();
            row.bleu = number_field(record, "bleu", line_number);
            row.rouge = number_field(record, "rouge", line_number);
            row.wer = number_field(record, "wer", line_number);
            report.rows.push_back(row);
        } else if (kind == "average") {
            if (saw_average) {
                throw ArgumentError("duplicate average record at line " +
                                    std::to_string(line_number));
            }
            saw_average = true;
            report.average.bleu = number_field(record, "bleu", line_number);
            report.average.rouge = number_field(record, "rouge", line_number);
            report.average.wer = number_field(record, "wer", line_number);
        } else {
            throw ArgumentError("record line " + std::to_string(line_number) +
                                " has unknown kind '" + kind + "'");
        }
    }
    if (!saw_header) throw ArgumentError("model report records lack a model_report header");
    if (!saw_average) throw ArgumentError("model report records lack an average record");
    return report;
}

DeltaReport delta_report_from_records(const std::string& text) {
    DeltaReport report;
    bool saw_header = false;
    bool saw_mean = false;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const std::size_t line_number = i + 1;
        const json record = parse_record_line(lines[i], line_number);
        const std::string kind = record["kind"].get<std::string>();
        if (kind == "delta_report") {
            saw_header = true;
        } else if (kind == "model_delta") {
            ModelDelta d;
            d.model_label = string_field(record, "model_label", line_number);
            d.bleu = number_field(record, "bleu", line_number);
            d.rouge = number_field(record, "rouge", line_number);
            d.wer = number_field(record, "wer", line_number);
            report.per_model.push_back(std::move(d));
        } else if (kind == "cross_model_mean") {
            if (saw_mean) {
                throw ArgumentError("duplicate cross_model_mean record at line " +
                                    std::to_string(line_number));
            }
            saw_mean = true;
            report.cross_model_mean.bleu = number_field(record, "bleu", line_number);
            report.cross_model_mean.rouge = number_field(record, "rouge", line_number);
            report.cross_model_mean.wer = number_field(record, "wer", line_number);
        } else {
            throw ArgumentError("record line " + std::to_string(line_number) +
                                " has unknown kind '" + kind + "'");
        }
    }
    if (!saw_header) throw ArgumentError("delta report records lack a delta_report header");
    if (!saw_mean) throw ArgumentError("delta report records lack a cross_model_mean record");
    return report;
}

std::string eval_pairs_to_jsonl(const std::vector<EvalPair>& pairs) {
    std::string out;
    for (const auto& pair : pairs) {
        out += json{{"id", pair.id},
                    {"method", method_name(pair.method)},
                    {"query", pair.query},
                    {"generated", base64_encode(pair.generated)},
                    {"ground_truth", base64_encode(pair.ground_truth)}}
                   .dump() +
               "\n";
    }
    return out;
}

std::vector<EvalPair> eval_pairs_from_jsonl(const std::string& text) {
    std::vector<EvalPair> pairs;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const std::size_t line_number = i + 1;
        json record = json::parse(lines[i], nullptr, false);
        if (record.is_discarded() || !record.is_object()) {
            throw ArgumentError("eval pair line " + std::to_string(line_number) +
                                " is not a JSON object");
        }
        EvalPair pair;
        pair.id = string_field(record, "id", line_number);
        const std::string method_token = string_field(record, "method", line_number);
        const auto method = method_from_token(method_token);
        if (!method) {
            throw ArgumentError("eval pair line " + std::to_string(line_number) +
                                " names unknown method '" + method_token + "'");
        }
        pair.method = *method;
        pair.query = string_field(record, "query", line_number);
        if (!base64_decode(string_field(record, "generated", line_number),
                           pair.generated)) {
            throw ArgumentError("eval pair line " + std::to_string(line_number) +
                                ": 'generated' is not valid base64");
        }
        if (!base64_decode(string_field(record, "ground_truth", line_number),
                           pair.ground_truth)) {
            throw ArgumentError("eval pair line " + std::to_string(line_number) +
                                ": 'ground_truth' is not valid base64");
        }
        RtspRequest truth;
        try {
            truth = parse_request(pair.ground_truth);
        } catch (const Error& e) {
            throw ArgumentError("eval pair line " + std::to_string(line_number) +
                                ": ground truth does not parse: " + e.what());
        }
        if (truth.method != pair.method) {
            throw ArgumentError("eval pair line " + std::to_string(line_number) +
                                ": ground truth method " + method_name(truth.method) +
                                " does not match declared method " +
                                method_name(pair.method));
        }
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

} // namespace ragseed
