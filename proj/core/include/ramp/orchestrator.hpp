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

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ramp/date.hpp"
#include "ramp/error.hpp"
#include "ramp/llm_gateway.hpp"
#include "ramp/memory_store.hpp"
#include "ramp/planner_actor.hpp"
#include "ramp/reflector.hpp"
#include "ramp/table.hpp"
#include "ramp/verifier.hpp"

namespace ramp {

enum class ApprovalMode { Auto, Interactive };
enum class Phase { Planning, Acting, Verifying, AwaitingDecision, Reflecting, Done };
enum class Status { Running, Success, BudgetExhausted, NoChange, UserStopped, Error };

std::string_view to_string(ApprovalMode m);
std::string_view to_string(Phase p);
std::string_view to_string(Status s);
std::optional<ApprovalMode> parse_approval_mode(std::string_view s);

struct SessionConfig {
    std::size_t n_semantic = 2;
    std::size_t n_episodic = 2;
    std::size_t max_iterations = 1;
    bool self_learning = false;
    std::optional<Date> today;
    ApprovalMode approval_mode = ApprovalMode::Auto;
    std::string model_id = "gpt-4.1";

    // Ablation switches. With the planner off the query itself is the only
    // step; with verify off the first audience is final; with reflect off
    // the failed rules are fed back to the planner directly.
    bool use_planner = true;
    bool verify = true;
    bool reflect = true;
    bool include_self_learned = true;

    /// Throws ConfigError.
    void validate() const;
};

nlohmann::json to_json(const SessionConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
SessionConfig session_config_from_json(const nlohmann::json& j, SessionConfig base = {});

struct TranscriptEvent {
    std::uint64_t seq = 0;
    std::string kind;
    nlohmann::json payload;
    std::string timestamp;
};

nlohmann::json to_json(const TranscriptEvent& e, bool with_timestamp = true);

struct SessionState {
    std::string session_id;
    std::string original_query;
    std::string working_query;
    Phase phase = Phase::Planning;
    std::size_t iteration = 1;
    std::optional<Plan> plan;
    std::vector<std::string> audience_ids;
    std::optional<VerificationReport> report;
    std::optional<Reflection> reflection;
    Status status = Status::Running;
    std::string error_phase;
    std::string error_message;
    SessionConfig config;
    std::vector<TranscriptEvent> transcript;
};

nlohmann::json to_json(const SessionState& s);

/// Transcript without timestamps; identical across replays of a scripted run.
std::string transcript_fingerprint(const std::vector<TranscriptEvent>& events);

/// Raised for operations not allowed in the current phase.
class PhaseError : public Error {
public:
    using Error::Error;
};

enum class DecisionKind { Proceed, Stop, Amend };

struct Decision {
    DecisionKind kind = DecisionKind::Proceed;
    std::string text;
};

std::optional<DecisionKind> parse_decision_kind(std::string_view s);
std::string_view to_string(DecisionKind k);

/// One plan -> act -> verify -> reflect loop over a fixed customer table.
///
/// step() is single-writer; snapshot() and transcript_after() may be called
/// from other threads at any time and never wait on a model call.
class Session {
public:
    using Clock = std::function<std::string()>;

    /// `memory` may be null (no retrieval, no write-back).
    Session(std::string session_id, std::string query, SessionConfig config, CustomerTable table,
            std::shared_ptr<MemoryStore> memory, std::shared_ptr<llm::ChatProvider> llm,
            Clock clock = utc_now_iso8601);

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    /// Performs exactly one phase transition.
    void step();
    void submit_decision(const Decision& decision);
    /// Steps until the session is done. Auto approval mode only.
    void run_to_completion();

    [[nodiscard]] SessionState snapshot() const;
    [[nodiscard]] std::vector<TranscriptEvent> transcript_after(std::uint64_t seq) const;
    [[nodiscard]] Phase phase() const;
    [[nodiscard]] Status status() const;
    [[nodiscard]] CustomerTable audience() const;
    [[nodiscard]] const CustomerTable& table() const { return table_; }
    [[nodiscard]] const std::string& id() const { return state_.session_id; }

private:
    void do_planning();
    void do_acting();
    void do_verifying();
    void do_reflecting();
    void advance_after_failure(std::string feedback);

    std::vector<std::string> rules_for(std::string_view query);
    const CompiledRule& compiled_rule(const std::string& rule_text);

    void emit(std::string kind, nlohmann::json payload);
    template <class F>
    void commit(F&& f) {
        std::lock_guard lk(state_mu_);
        f(state_);
    }

    CustomerTable table_;
    std::shared_ptr<MemoryStore> memory_;
    std::shared_ptr<llm::ChatProvider> llm_;
    Clock clock_;
    Date today_;

    mutable std::mutex step_mu_;
    mutable std::mutex state_mu_;
    SessionState state_;
    std::optional<CustomerTable> audience_;
    std::string feedback_;

    std::map<std::string, std::vector<std::string>, std::less<>> rule_cache_;
    std::map<std::string, CompiledRule, std::less<>> compile_cache_;
};

}  // namespace ramp
