#pragma once

// HTTP text-generation backend. Request body:
//   {"model": <name>, "prompt": <text>, "temperature": 0}
// The response body must be JSON with a string field "response" holding the
// action payload.

#include "gridpilot/instruct.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <string>

namespace gridpilot {

struct RemoteConfig {
    std::string url = "http://127.0.0.1:11434/api/generate";
    std::string model = "llama3";
    long timeout_ms = 10000;

    /// Reads NLU_URL, NLU_MODEL and NLU_TIMEOUT_MS, keeping defaults for unset vars.
    static RemoteConfig from_env() {
        RemoteConfig c;
        if (const char* v = std::getenv("NLU_URL")) c.url = v;
        if (const char* v = std::getenv("NLU_MODEL")) c.model = v;
        if (const char* v = std::getenv("NLU_TIMEOUT_MS")) {
            char* end = nullptr;
            const long ms = std::strtol(v, &end, 10);
            if (end != v && ms > 0) c.timeout_ms = ms;
        }
        return c;
    }
};

class RemoteBackend final : public NluBackend {
public:
    explicit RemoteBackend(RemoteConfig config) : config_(std::move(config)) {
        const auto scheme = config_.url.find("://");
        const auto path_at = config_.url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
        origin_ = config_.url.substr(0, path_at);
        path_ = path_at == std::string::npos ? "/" : config_.url.substr(path_at);
    }

    [[nodiscard]] std::string label() const override { return "remote:" + config_.model; }

    std::string complete(const NluRequest& request) override {
        httplib::Client client(origin_);
        const auto secs = config_.timeout_ms / 1000;
        const auto usecs = (config_.timeout_ms % 1000) * 1000;
        client.set_connection_timeout(secs, usecs);
        client.set_read_timeout(secs, usecs);
        client.set_write_timeout(secs, usecs);
        const nlohmann::json body = {
            {"model", config_.model}, {"prompt", build_prompt(request)}, {"temperature", 0}, {"stream", false}};
        auto res = client.Post(path_, body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace), "application/json");
        if (!res)
            throw Error(ErrorCode::BackendUnavailable,
                        "request to " + config_.url + " failed: " + httplib::to_string(res.error()), config_.url);
        if (res->status != 200)
            throw Error(ErrorCode::BackendUnavailable, "backend answered HTTP " + std::to_string(res->status),
                        res->body);
        nlohmann::json reply;
        try {
            reply = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorCode::BackendUnavailable, "backend reply is not JSON", res->body);
        }
        if (!reply.is_object() || !reply.contains("response") || !reply["response"].is_string())
            throw Error(ErrorCode::BackendUnavailable, "backend reply lacks a string 'response' field", res->body);
        return strip_fence(reply["response"].get<std::string>());
    }

    /// Removes one surrounding markdown code fence, if present.
    static std::string strip_fence(std::string text) {
        std::string_view t = detail::trim(text);
        if (t.rfind("```", 0) == 0) {
            const auto first_nl = t.find('\n');
            const auto last = t.rfind("```");
            if (first_nl != std::string_view::npos && last > first_nl) t = t.substr(first_nl + 1, last - first_nl - 1);
        }
        return std::string(detail::trim(t));
    }

private:
    RemoteConfig config_;
    std::string origin_;
    std::string path_;
};

} // namespace gridpilot
