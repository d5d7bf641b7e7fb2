#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace weft {

struct EndpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ChatMessage {
    std::string role;  // "system", "user", "assistant"
    std::string content;
};

// Minimal chat-completion abstraction: a message list in, the assistant's
// reply text out. The designer talks only to this interface, so tests can
// script it and any compatible endpoint can back it.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
};

struct EndpointConfig {
    std::string base_url;  // e.g. http://localhost:8080
    std::string path = "/v1/chat/completions";
    std::string model = "default";
    std::string api_key;                       // set directly, or via api_key_env
    std::string api_key_env = "WEFT_API_KEY";  // consulted when api_key is empty
    int timeout_seconds = 30;

    std::string resolved_key() const {
        if (!api_key.empty()) return api_key;
        if (const char* env = std::getenv(api_key_env.c_str())) return env;
        return "";
    }
};

}  // namespace weft
