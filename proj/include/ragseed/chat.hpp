#pragma once

#include <memory>
#include <string>
#include <vector>

namespace ragseed {

struct ChatMessage {
    std::string role;  // system | user | assistant
    std::string content;
};

struct ChatEndpointConfig {
    std::string endpoint_url;
    std::string model_name;
};

/// One model turn: takes the conversation so far, returns the assistant text.
class ChatModel {
public:
    virtual ~ChatModel() = default;
    virtual std::string send(const std::vector<ChatMessage>& messages,
                             double temperature) = 0;
};

/// Speaks the chat-completions wire shape: request {model, messages,
/// temperature}, response {choices: [{message: {content}}]}.
class RemoteChatModel : public ChatModel {
public:
    explicit RemoteChatModel(ChatEndpointConfig config);
    std::string send(const std::vector<ChatMessage>& messages,
                     double temperature) override;

private:
    ChatEndpointConfig config_;
};

/// Replays canned responses in order; used for offline runs and tests.
/// The script file holds responses separated by lines containing exactly
/// "---". Exhausting the script raises an error.
class ScriptedChatModel : public ChatModel {
public:
    explicit ScriptedChatModel(std::vector<std::string> replies);
    static ScriptedChatModel from_file(const std::string& path);

    std::string send(const std::vector<ChatMessage>& messages,
                     double temperature) override;

    std::size_t remaining() const { return replies_.size() - next_; }

private:
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
};

/// Name of the environment variable holding the chat API credential.
inline constexpr const char* kChatApiKeyEnv = "RAGSEED_CHAT_API_KEY";
/// Optional base-URL override for the chat endpoint.
inline constexpr const char* kChatBaseUrlEnv = "RAGSEED_CHAT_BASE_URL";

} // namespace ragseed
