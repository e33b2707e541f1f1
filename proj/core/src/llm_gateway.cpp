/*
 * Copyright (c) 2026, The RAMP Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "ramp/llm_gateway.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "ramp/text.hpp"

namespace ramp::llm {

using nlohmann::json;

std::string_view to_string(AgentTag tag) {
    switch (tag) {
        case AgentTag::Planner: return "planner";
        case AgentTag::Actor: return "actor";
        case AgentTag::VerifierExtract: return "verifier_extract";
        case AgentTag::VerifierCompile: return "verifier_compile";
        case AgentTag::Reflector: return "reflector";
    }
    return "planner";
}

std::optional<AgentTag> parse_agent_tag(std::string_view s) {
    for (auto t : {AgentTag::Planner, AgentTag::Actor, AgentTag::VerifierExtract, AgentTag::VerifierCompile,
                   AgentTag::Reflector}) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

std::string prompt_digest(const ChatRequest& req) {
    std::string bytes = req.system;
    bytes.push_back('\0');
    bytes += req.user;
    return text::sha256_hex(bytes);
}

json chat_request_body(const ChatRequest& req) {
    json messages = json::array();
    if (!req.system.empty()) messages.push_back({{"role", "system"}, {"content", req.system}});
    messages.push_back({{"role", "user"}, {"content", req.user}});
    return json{{"model", req.model_id}, {"temperature", req.temperature}, {"messages", std::move(messages)}};
}

ChatResponse parse_chat_response(std::string_view body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw LlmError(std::string("chat response is not JSON: ") + e.what());
    }
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
        throw LlmError("chat response has no choices");
    }
    const auto& msg = j["choices"][0].value("message", json::object());
    if (!msg.contains("content") || !msg["content"].is_string()) {
        throw LlmError("first choice has no text content");
    }
    ChatResponse out;
    out.text = msg["content"].get<std::string>();
    out.provider = ProviderKind::Live;
    if (j.contains("usage") && j["usage"].is_object()) {
        const auto& u = j["usage"];
        out.token_usage = TokenUsage{u.value("prompt_tokens", 0L), u.value("completion_tokens", 0L),
                                     u.value("total_tokens", 0L)};
    }
    return out;
}

// ---------------------------------------------------------------------------

LiveProvider::LiveProvider(LiveConfig cfg)
    : cfg_(std::move(cfg)), in_flight_(std::max<std::ptrdiff_t>(1, std::min<std::ptrdiff_t>(cfg_.max_in_flight, 1024))) {
    const auto& url = cfg_.endpoint_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint URL needs a scheme: '" + url + "'");
    const auto path_start = url.find('/', scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

namespace {

bool transient_status(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

ChatResponse LiveProvider::complete(const ChatRequest& req) {
    ChatRequest r = req;
    if (r.model_id.empty()) r.model_id = cfg_.model_id;
    const auto body = chat_request_body(r).dump();

    httplib::Headers headers;
    if (!cfg_.api_key_env.empty()) {
        if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key != nullptr && *key != '\0') {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }

    in_flight_.acquire();
    struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
    } release{in_flight_};

    httplib::Client client(scheme_host_port_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0) {
            auto delay = cfg_.initial_backoff * (1 << (attempt - 1));
            spdlog::warn("{} call failed ({}); retry {}/{} in {} ms", to_string(req.agent_tag), last_error, attempt,
                         cfg_.max_retries, delay.count());
            std::this_thread::sleep_for(delay);
        }
        auto res = client.Post(path_, headers, body, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 200 && res->status < 300) return parse_chat_response(res->body);
        last_error = "HTTP " + std::to_string(res->status);
        if (!transient_status(res->status)) {
            throw LlmError("chat endpoint returned " + last_error + ": " + res->body.substr(0, 512));
        }
    }
    throw RetriesExhausted("chat endpoint failed after " + std::to_string(cfg_.max_retries) +
                           " retries: " + last_error);
}

// ---------------------------------------------------------------------------

json to_json(const TranscriptEntry& e) {
    return json{{"agent_tag", std::string(to_string(e.agent_tag))},
                {"call_index", e.call_index},
                {"prompt_sha256", e.prompt_sha256},
                {"response_text", e.response_text}};
}

TranscriptEntry transcript_entry_from_json(const json& j) {
    TranscriptEntry e;
    auto tag = parse_agent_tag(j.at("agent_tag").get<std::string>());
    if (!tag) throw LlmError("unknown agent_tag '" + j.at("agent_tag").get<std::string>() + "'");
    e.agent_tag = *tag;
    e.call_index = j.at("call_index").get<std::size_t>();
    if (j.contains("prompt_sha256") && j["prompt_sha256"].is_string()) e.prompt_sha256 = j["prompt_sha256"];
    e.response_text = j.at("response_text").get<std::string>();
    return e;
}

std::vector<TranscriptEntry> parse_transcript(std::string_view jsonl) {
    std::vector<TranscriptEntry> out;
    std::size_t line_no = 0;
    for (const auto& line : text::split_lines(jsonl)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(transcript_entry_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw LlmError("transcript line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<TranscriptEntry> load_transcript(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LlmError("cannot open transcript '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_transcript(ss.str());
}

std::string to_jsonl(const std::vector<TranscriptEntry>& entries) {
    std::string out;
    for (const auto& e : entries) out += to_json(e).dump() + "\n";
    return out;
}

ScriptedProvider::ScriptedProvider(std::vector<TranscriptEntry> entries, bool verify_digests)
    : verify_digests_(verify_digests) {
    for (auto& e : entries) {
        auto [it, inserted] = by_tag_[e.agent_tag].emplace(e.call_index, e);
        if (!inserted) {
            throw LlmError("transcript has two entries for " + std::string(to_string(e.agent_tag)) + " call " +
                           std::to_string(e.call_index));
        }
    }
}

ChatResponse ScriptedProvider::complete(const ChatRequest& req) {
    std::lock_guard lock(mu_);
    const auto index = next_[req.agent_tag]++;
    const auto tag_it = by_tag_.find(req.agent_tag);
    const TranscriptEntry* entry = nullptr;
    if (tag_it != by_tag_.end()) {
        auto it = tag_it->second.find(index);
        if (it != tag_it->second.end()) entry = &it->second;
    }
    if (entry == nullptr) {
        throw TranscriptExhausted("transcript exhausted for " + std::string(to_string(req.agent_tag)) + " call " +
                                  std::to_string(index));
    }
    if (verify_digests_ && !entry->prompt_sha256.empty()) {
        const auto digest = prompt_digest(req);
        if (digest != entry->prompt_sha256) {
            throw DigestMismatch("prompt digest mismatch for " + std::string(to_string(req.agent_tag)) + " call " +
                                 std::to_string(index) + ": recorded " + entry->prompt_sha256 + ", got " + digest);
        }
    }
    return ChatResponse{entry->response_text, std::nullopt, ProviderKind::Scripted};
}

std::size_t ScriptedProvider::calls(AgentTag tag) const {
    std::lock_guard lock(mu_);
    auto it = next_.find(tag);
    return it == next_.end() ? 0 : it->second;
}

std::size_t ScriptedProvider::remaining() const {
    std::lock_guard lock(mu_);
    std::size_t n = 0;
    for (const auto& [tag, entries] : by_tag_) {
        auto it = next_.find(tag);
        const std::size_t used = it == next_.end() ? 0 : it->second;
        for (const auto& [idx, _] : entries) {
            if (idx >= used) ++n;
        }
    }
    return n;
}

RecordingProvider::RecordingProvider(std::shared_ptr<ChatProvider> inner, std::filesystem::path path)
    : inner_(std::move(inner)), path_(std::move(path)) {}

RecordingProvider::RecordingProvider(std::shared_ptr<ChatProvider> inner, std::ostream& sink)
    : inner_(std::move(inner)), sink_(&sink) {}

ChatResponse RecordingProvider::complete(const ChatRequest& req) {
    auto resp = inner_->complete(req);
    TranscriptEntry e{req.agent_tag, 0, prompt_digest(req), resp.text};
    std::lock_guard lock(mu_);
    e.call_index = next_[req.agent_tag]++;
    append(e);
    return resp;
}

void RecordingProvider::append(const TranscriptEntry& e) {
    const auto line = to_json(e).dump() + "\n";
    if (sink_ != nullptr) {
        *sink_ << line << std::flush;
        if (!*sink_) throw LlmError("failed writing transcript");
        return;
    }
    std::ofstream out(*path_, std::ios::binary | std::ios::app);
    out << line;
    if (!out) throw LlmError("failed writing transcript '" + path_->string() + "'");
}

}  // namespace ramp::llm
