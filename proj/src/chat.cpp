#include "ragseed/chat.hpp"

#include "ragseed/errors.hpp"
#include "ragseed/http.hpp"
#include "ragseed/util.hpp"

#include <nlohmann/json.hpp>

namespace ragseed {

RemoteChatModel::RemoteChatModel(ChatEndpointConfig config)
    : config_(std::move(config)) {
    if (config_.endpoint_url.empty() || config_.model_name.empty()) {
        throw ConfigError("chat endpoint requires endpoint_url and model_name");
    }
}

std::string RemoteChatModel::send(const std::vector<ChatMessage>& messages,
                                  double temperature) {
    nlohmann::json body;
    body["model"] = config_.model_name;
    body["temperature"] = temperature;
    body["messages"] = nlohmann::json::array();
    for (const auto& m : messages) {
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    }
    const std::string reply = http_post_json(
        resolve_endpoint(config_.endpoint_url, kChatBaseUrlEnv), body.dump(),
        bearer_from_env(kChatApiKeyEnv));
    try {
        return nlohmann::json::parse(reply)
            .at("choices")
            .at(0)
            .at("message")
            .at("content")
            .get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("malformed chat response: ") + e.what(),
                            /*retryable=*/false);
    }
}

ScriptedChatModel::ScriptedChatModel(std::vector<std::string> replies)
    : replies_(std::move(replies)) {}

ScriptedChatModel ScriptedChatModel::from_file(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<std::string> replies;
    std::string current;
    bool any_line = false;
    for (const auto& line : split_lines(text)) {
        if (line == "---") {
            replies.push_back(current);
            current.clear();
            any_line = false;
        } else {
            if (any_line) current += '\n';
            current += line;
            any_line = true;
        }
    }
    if (any_line || !current.empty()) replies.push_back(current);
    return ScriptedChatModel(std::move(replies));
}

std::string ScriptedChatModel::send(const std::vector<ChatMessage>& messages,
                                    double temperature) {
    (void)messages;
    (void)temperature;
    if (next_ >= replies_.size()) {
        throw ProviderError("scripted chat model exhausted after " +
                                std::to_string(replies_.size()) + " replies",
                            /*retryable=*/false);
    }
    return replies_[next_++];
}

} // namespace ragseed
