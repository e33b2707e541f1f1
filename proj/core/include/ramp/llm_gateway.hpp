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
#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ramp/error.hpp"

namespace ramp::llm {

enum class AgentTag { Planner, Actor, VerifierExtract, VerifierCompile, Reflector };

std::string_view to_string(AgentTag tag);
std::optional<AgentTag> parse_agent_tag(std::string_view s);

struct ChatRequest {
    AgentTag agent_tag = AgentTag::Planner;
    std::string system;
    std::string user;
    double temperature = 0.0;
    std::string model_id;
};

struct TokenUsage {
    long prompt_tokens = 0;
    long completion_tokens = 0;
    long total_tokens = 0;
};

enum class ProviderKind { Live, Scripted };

struct ChatResponse {
    std::string text;
    std::optional<TokenUsage> token_usage;
    ProviderKind provider = ProviderKind::Scripted;
};

class LlmError : public Error {
public:
    using Error::Error;
};

class RetriesExhausted : public LlmError {
public:
    using LlmError::LlmError;
};

class TranscriptExhausted : public LlmError {
public:
    using LlmError::LlmError;
};

class DigestMismatch : public LlmError {
public:
    using LlmError::LlmError;
};

/// The only path by which any module talks to a model.
class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual ChatResponse complete(const ChatRequest& req) = 0;
};

/// SHA-256 over system, a NUL byte, then user.
std::string prompt_digest(const ChatRequest& req);

/// OpenAI-compatible chat-completions request body.
nlohmann::json chat_request_body(const ChatRequest& req);

/// Text of the first choice, plus usage when present. Throws LlmError when
/// the body has no choices.
ChatResponse parse_chat_response(std::string_view body);

// ---------------------------------------------------------------------------

struct LiveConfig {
    std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
    std::string api_key_env = "OPENAI_API_KEY";
    std::string model_id = "gpt-4.1";
    std::chrono::milliseconds timeout{60'000};
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{500};
    std::ptrdiff_t max_in_flight = 4;
};

/// HTTP client for a chat-completions endpoint. Retries rate-limit (429),
/// server (5xx) and connection failures with exponential backoff.
class LiveProvider final : public ChatProvider {
public:
    explicit LiveProvider(LiveConfig cfg);
    ChatResponse complete(const ChatRequest& req) override;

    [[nodiscard]] const LiveConfig& config() const { return cfg_; }

private:
    LiveConfig cfg_;
    std::string scheme_host_port_;
    std::string path_;
    std::counting_semaphore<1024> in_flight_;
};

// ---------------------------------------------------------------------------

struct TranscriptEntry {
    AgentTag agent_tag = AgentTag::Planner;
    std::size_t call_index = 0;
    std::string prompt_sha256;  // empty: no digest recorded
    std::string response_text;
};

nlohmann::json to_json(const TranscriptEntry& e);
TranscriptEntry transcript_entry_from_json(const nlohmann::json& j);
std::vector<TranscriptEntry> parse_transcript(std::string_view jsonl);
std::vector<TranscriptEntry> load_transcript(const std::filesystem::path& path);
std::string to_jsonl(const std::vector<TranscriptEntry>& entries);

/// Replays recorded responses keyed by (agent_tag, per-tag call index).
class ScriptedProvider final : public ChatProvider {
public:
    explicit ScriptedProvider(std::vector<TranscriptEntry> entries, bool verify_digests = false);

    ChatResponse complete(const ChatRequest& req) override;

    [[nodiscard]] std::size_t calls(AgentTag tag) const;
    /// Entries not yet consumed, summed over tags.
    [[nodiscard]] std::size_t remaining() const;

private:
    mutable std::mutex mu_;
    std::map<AgentTag, std::map<std::size_t, TranscriptEntry>> by_tag_;
    std::map<AgentTag, std::size_t> next_;
    bool verify_digests_;
};

/// Wraps a provider and appends each exchange as one transcript JSONL line.
class RecordingProvider final : public ChatProvider {
public:
    RecordingProvider(std::shared_ptr<ChatProvider> inner, std::filesystem::path path);
    RecordingProvider(std::shared_ptr<ChatProvider> inner, std::ostream& sink);

    ChatResponse complete(const ChatRequest& req) override;

private:
    void append(const TranscriptEntry& e);

    std::shared_ptr<ChatProvider> inner_;
    std::optional<std::filesystem::path> path_;
    std::ostream* sink_ = nullptr;
    std::mutex mu_;
    std::map<AgentTag, std::size_t> next_;
};

}  // namespace ramp::llm
