#pragma once

// Split from chat.hpp so only the targets that actually speak HTTP pay for
// the cpp-httplib include.

#include <httplib.h>
#include <json.hpp>

#include "weft/chat.hpp"

namespace weft {

// Blocking client for a chat-completion-compatible HTTP endpoint:
// POST {base_url}{path} with {"model", "messages"} and read
// choices[0].message.content from the reply.
class HttpChatClient : public ChatClient {
public:
    explicit HttpChatClient(EndpointConfig config) : config_(std::move(config)) {
        if (config_.base_url.empty()) throw EndpointError("endpoint base URL is empty");
    }

    std::string complete(const std::vector<ChatMessage>& messages) override {
        nlohmann::json body;
        body["model"] = config_.model;
        body["messages"] = nlohmann::json::array();
        for (const auto& m : messages)
            body["messages"].push_back({{"role", m.role}, {"content", m.content}});

        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        client.set_write_timeout(config_.timeout_seconds, 0);
        httplib::Headers headers;
        if (const std::string key = config_.resolved_key(); !key.empty())
            headers.emplace("Authorization", "Bearer " + key);

        const auto res = client.Post(config_.path, headers, body.dump(), "application/json");
        if (!res)
            throw EndpointError("request to " + config_.base_url + " failed: " +
                                httplib::to_string(res.error()));
        if (res->status != 200)
            throw EndpointError("endpoint returned status " + std::to_string(res->status) + ": " +
                                res->body.substr(0, 200));
        try {
            const auto reply = nlohmann::json::parse(res->body);
            return reply.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw EndpointError(std::string("malformed completion response: ") + e.what());
        }
    }

private:
    EndpointConfig config_;
};

}  // namespace weft
