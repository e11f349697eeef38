#pragma once

#include "ragseed/agent.hpp"
#include "ragseed/chat.hpp"
#include "ragseed/embedding.hpp"
#include "ragseed/errors.hpp"
#include "ragseed/eval.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ragseed {

/// Everything the subcommands read from a --config file. Credentials are
/// deliberately absent: they come from environment variables only.
struct CliConfig {
    EmbeddingProviderConfig embedding;
    ChatEndpointConfig chat;
    std::size_t chunk_size = 1000;  // whitespace tokens per chunk
    std::size_t overlap = 200;      // characters carried over between chunks
    std::size_t k = 5;
    std::size_t max_iterations = 5;
    double temperature = 0.0;
    std::string stop_marker = "Final Answer:";
    std::size_t observation_char_budget = 8000;
    MetricSettings metrics;
    std::string corpus_path;
    std::string index_path;
    std::string logs_path;
    std::string reports_path;
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys and
/// unparseable values raise ConfigError.
CliConfig parse_cli_config(const std::string& text);
CliConfig load_cli_config(const std::string& path);

/// Entry point behind main(): args excludes the program name. Returns the
/// process exit status: 0 success, 1 operational failure, 2 usage error.
int run_command(const std::vector<std::string>& args);

} // namespace ragseed
