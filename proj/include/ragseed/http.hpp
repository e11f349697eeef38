#pragma once

#include <string>

namespace ragseed {

/// POSTs a JSON body and returns the response body. Retries transport
/// failures twice, then throws ProviderError (retryable for transport
/// faults and 5xx, non-retryable for other HTTP errors).
std::string http_post_json(const std::string& url, const std::string& body,
                           const std::string& bearer_token = "",
                           int max_attempts = 3);

/// Returns "Bearer ..." material from the named environment variable,
/// or empty when unset.
std::string bearer_from_env(const char* env_var);

/// Applies a base-URL override from the environment: when `env_var` is set,
/// the configured URL's scheme://host[:port] part is replaced, the path kept.
std::string resolve_endpoint(const std::string& configured_url, const char* env_var);

} // namespace ragseed
