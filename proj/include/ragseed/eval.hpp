#pragma once

#include "ragseed/errors.hpp"
#include "ragseed/metrics.hpp"
#include "ragseed/rtsp.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace ragseed {

enum class LogDirection { ClientToServer, ServerToClient, FuzzerQuery, ModelAnswer };

std::string direction_name(LogDirection direction);
LogDirection direction_from_name(const std::string& name);  // ArgumentError on unknown

struct LogEntry {
    std::string timestamp;  // ISO-8601
    LogDirection direction = LogDirection::ClientToServer;
    std::string payload;  // raw bytes (base64 in file form), non-empty
};

struct LogReject {
    std::size_t line_number = 0;  // 1-based
    std::string reason;
};

struct IngestResult {
    std::vector<LogEntry> entries;  // in file order
    std::vector<LogReject> rejects;
};

/// Reads a line-delimited log file of {timestamp, direction, payload-base64}
/// records. Malformed lines become rejects, never errors; an unreadable file
/// raises IoError.
IngestResult ingest_logs(const std::string& path);

struct EvalPair {
    std::string id;
    RtspMethod method = RtspMethod::Describe;
    std::string query;         // the enrichment question
    std::string generated;     // model output, untrusted bytes
    std::string ground_truth;  // parses as an RTSP request of `method`
};

struct ExtractionResult {
    std::vector<EvalPair> pairs;
    std::vector<std::string> unmatched;  // diagnostics for orphaned queries
};

/// Pairs each fuzzer_query with the next unconsumed model_answer and the next
/// unconsumed client_to_server packet that parses as an RTSP request of the
/// method the answer names (any parseable request when the answer names
/// none). The pair's method always comes from the ground-truth request line.
ExtractionResult extract_eval_pairs(const std::vector<LogEntry>& entries);

struct MetricSettings {
    std::size_t max_n = 4;
    bool smoothing = true;
    RougeVariant rouge = RougeVariant::ngram(1);
};

/// Scores one pair. A generated payload that fails UTF-8 decoding floor-scores
/// (bleu 0, rouge 0, wer 1) with a diagnostic instead of erroring; a ground
/// truth that does not tokenize non-empty violates the precondition and
/// raises ArgumentError.
MetricScores evaluate_pair(const EvalPair& pair, const MetricSettings& settings,
                           std::vector<std::string>* diagnostics = nullptr);

struct MethodReport {
    RtspMethod method = RtspMethod::Describe;
    std::size_t pair_count = 0;
    double bleu = 0.0;
    double rouge = 0.0;
    double wer = 0.0;  // mean fractions over the method's pairs
};

struct ModelReport {
    std::string model_label;
    std::vector<MethodReport> rows;  // fixed method order, zero-pair rows omitted
    MetricScores average;            // pair-weighted over ALL pairs, not a row mean
};

/// Groups per-pair scores by method in the fixed row order. Methods with zero
/// pairs are omitted (reported through `omitted_methods`); the average row is
/// pair-count-weighted.
ModelReport aggregate_report(const std::vector<std::pair<RtspMethod, MetricScores>>& scores,
                             const std::string& model_label,
                             std::vector<RtspMethod>* omitted_methods = nullptr);

struct ModelDelta {
    std::string model_label;
    double bleu = 0.0;   // agent - baseline
    double rouge = 0.0;  // agent - baseline
    double wer = 0.0;    // baseline - agent (improvement positive)
};

struct DeltaReport {
    std::vector<ModelDelta> per_model;
    MetricScores cross_model_mean;  // component-wise mean of the deltas
};

/// Pairs baseline and agent reports by model_label (ArgumentError on
/// mismatch) and orients every delta so improvement is positive.
DeltaReport improvement_delta(const std::vector<ModelReport>& baselines,
                              const std::vector<ModelReport>& agents);

enum class ReportFormat { PlainTable, CommaSeparated, StructuredRecords };

ReportFormat report_format_from_name(const std::string& name);  // ArgumentError
std::string report_format_name(ReportFormat format);

/// Renders rows in fixed method order, percentages with 2 decimals half-up,
/// average row last and visually distinguished. Deterministic: the same
/// report renders byte-identically every time.
std::string render_report(const ModelReport& report, ReportFormat format);
std::string render_report(const DeltaReport& report, ReportFormat format);

/// Inverse of render_report(..., StructuredRecords). Malformed records raise
/// ArgumentError.
ModelReport model_report_from_records(const std::string& text);
DeltaReport delta_report_from_records(const std::string& text);

/// Pre-paired evaluation file: one record per line with base64 packets.
std::string eval_pairs_to_jsonl(const std::vector<EvalPair>& pairs);
std::vector<EvalPair> eval_pairs_from_jsonl(const std::string& text);

} // namespace ragseed
