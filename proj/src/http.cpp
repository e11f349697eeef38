#include "ragseed/http.hpp"

#include "ragseed/errors.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <thread>

namespace ragseed {

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;    // /path..., defaults to "/"
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint URL missing scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace

std::string bearer_from_env(const char* env_var) {
    const char* v = std::getenv(env_var);
    return v ? std::string(v) : std::string();
}

std::string resolve_endpoint(const std::string& configured_url, const char* env_var) {
    const char* override_base = std::getenv(env_var);
    if (!override_base || !*override_base) return configured_url;
    std::string base(override_base);
    while (!base.empty() && base.back() == '/') base.pop_back();
    return base + split_url(configured_url).path;
}

std::string http_post_json(const std::string& url, const std::string& body,
                           const std::string& bearer_token, int max_attempts) {
    const auto [origin, path] = split_url(url);

    std::string last_error;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        httplib::Client client(origin);
        client.set_connection_timeout(10, 0);
        client.set_read_timeout(120, 0);
        httplib::Headers headers;
        if (!bearer_token.empty()) {
            headers.emplace("Authorization", "Bearer " + bearer_token);
        }
        auto res = client.Post(path, headers, body, "application/json");
        if (res && res->status >= 200 && res->status < 300) return res->body;

        if (res && res->status >= 400 && res->status < 500) {
            throw ProviderError("endpoint " + url + " returned HTTP " +
                                    std::to_string(res->status) + ": " + res->body,
                                /*retryable=*/false);
        }
        last_error = res ? "HTTP " + std::to_string(res->status)
                         : "transport error: " + httplib::to_string(res.error());
        if (attempt < max_attempts) {
            std::this_thread::sleep_for(std::chrono::milliseconds(100 * attempt));
        }
    }
    throw ProviderError("endpoint " + url + " unreachable after " +
                            std::to_string(max_attempts) + " attempts (" + last_error +
                            ")",
                        /*retryable=*/true);
}

} // namespace ragseed
