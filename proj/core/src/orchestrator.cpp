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
#include "ramp/orchestrator.hpp"

#include <spdlog/spdlog.h>

#include "ramp/text.hpp"

namespace ramp {

using nlohmann::json;

std::string_view to_string(ApprovalMode m) { return m == ApprovalMode::Auto ? "auto" : "interactive"; }

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Planning: return "planning";
        case Phase::Acting: return "acting";
        case Phase::Verifying: return "verifying";
        case Phase::AwaitingDecision: return "awaiting_decision";
        case Phase::Reflecting: return "reflecting";
        case Phase::Done: return "done";
    }
    return "done";
}

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Running: return "running";
        case Status::Success: return "success";
        case Status::BudgetExhausted: return "budget_exhausted";
        case Status::NoChange: return "no_change";
        case Status::UserStopped: return "user_stopped";
        case Status::Error: return "error";
    }
    return "error";
}

std::optional<ApprovalMode> parse_approval_mode(std::string_view s) {
    if (s == "auto") return ApprovalMode::Auto;
    if (s == "interactive") return ApprovalMode::Interactive;
    return std::nullopt;
}

std::optional<DecisionKind> parse_decision_kind(std::string_view s) {
    if (s == "proceed") return DecisionKind::Proceed;
    if (s == "stop") return DecisionKind::Stop;
    if (s == "amend") return DecisionKind::Amend;
    return std::nullopt;
}

std::string_view to_string(DecisionKind k) {
    switch (k) {
        case DecisionKind::Proceed: return "proceed";
        case DecisionKind::Stop: return "stop";
        case DecisionKind::Amend: return "amend";
    }
    return "proceed";
}

void SessionConfig::validate() const {
    if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
    if (!today) throw ConfigError("today is required");
    if (model_id.empty()) throw ConfigError("model_id must not be empty");
    if (reflect && !verify) throw ConfigError("reflect requires verify");
}

json to_json(const SessionConfig& c) {
    json j{{"n_semantic", c.n_semantic},
           {"n_episodic", c.n_episodic},
           {"max_iterations", c.max_iterations},
           {"self_learning", c.self_learning},
           {"approval_mode", std::string(to_string(c.approval_mode))},
           {"model_id", c.model_id},
           {"use_planner", c.use_planner},
           {"verify", c.verify},
           {"reflect", c.reflect},
           {"include_self_learned", c.include_self_learned}};
    j["today"] = c.today ? json(c.today->to_string()) : json(nullptr);
    return j;
}

namespace {

std::size_t count_field(const json& v, const char* key) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(std::string(key) + " must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

bool bool_field(const json& v, const char* key) {
    if (!v.is_boolean()) throw ConfigError(std::string(key) + " must be a boolean");
    return v.get<bool>();
}

std::string string_field(const json& v, const char* key) {
    if (!v.is_string()) throw ConfigError(std::string(key) + " must be a string");
    return v.get<std::string>();
}

}  // namespace

SessionConfig session_config_from_json(const json& j, SessionConfig c) {
    if (j.is_null()) return c;
    if (!j.is_object()) throw ConfigError("config must be an object");
    for (const auto& [key, v] : j.items()) {
        if (key == "n_semantic") {
            c.n_semantic = count_field(v, "n_semantic");
        } else if (key == "n_episodic") {
            c.n_episodic = count_field(v, "n_episodic");
        } else if (key == "max_iterations") {
            c.max_iterations = count_field(v, "max_iterations");
        } else if (key == "self_learning") {
            c.self_learning = bool_field(v, "self_learning");
        } else if (key == "today") {
            if (v.is_null()) {
                c.today.reset();
            } else {
                c.today = Date::parse(string_field(v, "today"));
                if (!c.today) throw ConfigError("today must be YYYY-MM-DD");
            }
        } else if (key == "approval_mode") {
            auto m = parse_approval_mode(string_field(v, "approval_mode"));
            if (!m) throw ConfigError("approval_mode must be auto or interactive");
            c.approval_mode = *m;
        } else if (key == "model_id") {
            c.model_id = string_field(v, "model_id");
        } else if (key == "use_planner") {
            c.use_planner = bool_field(v, "use_planner");
        } else if (key == "verify") {
            c.verify = bool_field(v, "verify");
        } else if (key == "reflect") {
            c.reflect = bool_field(v, "reflect");
        } else if (key == "include_self_learned") {
            c.include_self_learned = bool_field(v, "include_self_learned");
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
    return c;
}

json to_json(const TranscriptEvent& e, bool with_timestamp) {
    json j{{"seq", e.seq}, {"kind", e.kind}, {"payload", e.payload}};
    if (with_timestamp) j["timestamp"] = e.timestamp;
    return j;
}

namespace {

json memories_json(const std::vector<ScoredMemory>& mems) {
    json arr = json::array();
    for (const auto& m : mems) {
        arr.push_back({{"id", m.item.id}, {"text", m.item.text}, {"source", std::string(to_string(m.item.source))},
                       {"score", m.score}});
    }
    return arr;
}

}  // namespace

json to_json(const SessionState& s) {
    json transcript = json::array();
    for (const auto& e : s.transcript) transcript.push_back(to_json(e));
    json j{{"session_id", s.session_id},
           {"original_query", s.original_query},
           {"working_query", s.working_query},
           {"phase", std::string(to_string(s.phase))},
           {"iteration", s.iteration},
           {"status", std::string(to_string(s.status))},
           {"config", to_json(s.config)},
           {"audience_ids", s.audience_ids},
           {"audience_size", s.audience_ids.size()},
           {"last_seq", s.transcript.empty() ? 0 : s.transcript.back().seq},
           {"transcript", std::move(transcript)}};
    j["plan"] = s.plan ? json{{"steps", s.plan->steps}} : json(nullptr);
    j["report"] = s.report ? to_json(*s.report) : json(nullptr);
    j["reflection"] = s.reflection ? to_json(*s.reflection) : json(nullptr);
    if (s.status == Status::Error) {
        j["error"] = {{"phase", s.error_phase}, {"message", s.error_message}};
    }
    return j;
}

std::string transcript_fingerprint(const std::vector<TranscriptEvent>& events) {
    std::string out;
    for (const auto& e : events) {
        out += to_json(e, false).dump();
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

Session::Session(std::string session_id, std::string query, SessionConfig config, CustomerTable table,
                 std::shared_ptr<MemoryStore> memory, std::shared_ptr<llm::ChatProvider> llm, Clock clock)
    : table_(std::move(table)), memory_(std::move(memory)), llm_(std::move(llm)), clock_(std::move(clock)) {
    config.validate();
    if (!llm_) throw ConfigError("a chat provider is required");
    if (text::trim(query).empty()) throw ConfigError("query must not be empty");
    today_ = *config.today;
    state_.session_id = std::move(session_id);
    state_.original_query = query;
    state_.working_query = std::move(query);
    state_.config = std::move(config);
}

void Session::emit(std::string kind, json payload) {
    TranscriptEvent e;
    e.kind = std::move(kind);
    e.payload = std::move(payload);
    e.timestamp = clock_();
    commit([&](SessionState& s) {
        e.seq = s.transcript.empty() ? 1 : s.transcript.back().seq + 1;
        s.transcript.push_back(std::move(e));
    });
}

void Session::step() {
    std::lock_guard lk(step_mu_);
    if (state_.status != Status::Running) throw PhaseError("session is finished");
    const Phase phase = state_.phase;
    if (phase == Phase::AwaitingDecision) throw PhaseError("session is awaiting a decision");
    try {
        switch (phase) {
            case Phase::Planning: do_planning(); break;
            case Phase::Acting: do_acting(); break;
            case Phase::Verifying: do_verifying(); break;
            case Phase::Reflecting: do_reflecting(); break;
            default: break;
        }
    } catch (const std::exception& e) {
        spdlog::error("session {} failed in {}: {}", state_.session_id, to_string(phase), e.what());
        emit("error", {{"phase", std::string(to_string(phase))}, {"message", e.what()}});
        commit([&](SessionState& s) {
            s.status = Status::Error;
            s.error_phase = std::string(to_string(phase));
            s.error_message = e.what();
            s.phase = Phase::Done;
        });
    }
}

void Session::run_to_completion() {
    if (state_.config.approval_mode != ApprovalMode::Auto) {
        throw PhaseError("run_to_completion requires auto approval mode");
    }
    while (status() == Status::Running) step();
}

void Session::do_planning() {
    const auto& cfg = state_.config;
    Plan plan;
    std::vector<ScoredMemory> memories;
    if (cfg.use_planner) {
        if (memory_) {
            memories = memory_->retrieve(MemoryKind::Semantic, state_.working_query,
                                         RetrievalConfig{.n = cfg.n_semantic,
                                                         .include_self_learned = cfg.include_self_learned});
        }
        PlannerInput in{state_.working_query, metadata_summary(table_), feedback_, memories};
        plan = make_plan(in, *llm_, cfg.model_id);
    } else {
        plan.steps = {state_.working_query};
        if (!feedback_.empty()) plan.steps.front() += "\n" + feedback_;
    }
    emit("plan", {{"iteration", state_.iteration},
                  {"steps", plan.steps},
                  {"feedback", feedback_},
                  {"memories", memories_json(memories)}});
    commit([&](SessionState& s) {
        s.plan = std::move(plan);
        s.phase = Phase::Acting;
    });
}

void Session::do_acting() {
    const auto& cfg = state_.config;
    ActorContext ctx{table_,
                     memory_.get(),
                     RetrievalConfig{.n = cfg.n_semantic, .include_self_learned = cfg.include_self_learned},
                     *llm_,
                     cfg.model_id,
                     today_};
    // Every iteration starts again from the full pool.
    auto result = act(*state_.plan, ctx);
    for (std::size_t i = 0; i < result.steps.size(); ++i) {
        const auto& st = result.steps[i];
        emit("compiled_step", {{"iteration", state_.iteration},
                               {"index", i},
                               {"step_text", st.step_text},
                               {"dsl", st.dsl_source},
                               {"rows_before", st.rows_before},
                               {"rows_after", st.rows_after},
                               {"retried", st.retried}});
    }
    auto ids = result.audience.ids();
    json sample = json::array();
    for (std::size_t i = 0; i < ids.size() && i < 10; ++i) sample.push_back(ids[i]);
    emit("audience_summary", {{"iteration", state_.iteration}, {"count", ids.size()}, {"sample_ids", sample}});
    commit([&](SessionState& s) {
        audience_ = std::move(result.audience);
        s.audience_ids = std::move(ids);
        if (s.config.verify) {
            s.phase = Phase::Verifying;
        } else {
            s.phase = Phase::Done;
            s.status = Status::Success;
        }
    });
}

std::vector<std::string> Session::rules_for(std::string_view query) {
    auto it = rule_cache_.find(query);
    if (it == rule_cache_.end()) {
        auto rules = extract_rules(query, *llm_, state_.config.model_id);
        it = rule_cache_.emplace(std::string(query), std::move(rules)).first;
    }
    return it->second;
}

const CompiledRule& Session::compiled_rule(const std::string& rule_text) {
    auto it = compile_cache_.find(rule_text);
    if (it == compile_cache_.end()) {
        std::vector<ScoredMemory> memories;
        if (memory_) {
            memories = memory_->retrieve(MemoryKind::Semantic, rule_text,
                                         RetrievalConfig{.n = state_.config.n_semantic,
                                                         .include_self_learned = state_.config.include_self_learned});
        }
        auto compiled = compile_rule(rule_text, table_, memories, *llm_, state_.config.model_id);
        it = compile_cache_.emplace(rule_text, std::move(compiled)).first;
    }
    return it->second;
}

void Session::do_verifying() {
    const auto rules = rules_for(state_.working_query);
    std::vector<CompiledRule> compiled;
    compiled.reserve(rules.size());
    for (const auto& r : rules) compiled.push_back(compiled_rule(r));
    auto report = verify(*audience_, compiled, today_);
    for (const auto& r : report.rules) {
        auto payload = to_json(r);
        payload["iteration"] = state_.iteration;
        emit("rule_result", std::move(payload));
    }
    const bool passed = report.all_passed;
    std::string failed_text;
    for (const auto& r : report.failed()) failed_text += (failed_text.empty() ? "" : "\n") + r.rule_text + " (" + r.detail + ")";
    commit([&](SessionState& s) { s.report = std::move(report); });
    if (passed) {
        commit([](SessionState& s) {
            s.phase = Phase::Done;
            s.status = Status::Success;
        });
    } else if (state_.config.approval_mode == ApprovalMode::Interactive) {
        commit([](SessionState& s) { s.phase = Phase::AwaitingDecision; });
    } else if (state_.config.reflect) {
        commit([](SessionState& s) { s.phase = Phase::Reflecting; });
    } else {
        advance_after_failure("Failed checks:\n" + failed_text);
    }
}

void Session::advance_after_failure(std::string feedback) {
    commit([&](SessionState& s) {
        if (s.iteration + 1 > s.config.max_iterations) {
            s.phase = Phase::Done;
            s.status = Status::BudgetExhausted;
        } else {
            s.iteration += 1;
            s.phase = Phase::Planning;
            feedback_ = std::move(feedback);
        }
    });
}

void Session::do_reflecting() {
    const auto& cfg = state_.config;
    const auto failed = state_.report->failed();
    std::vector<ScoredMemory> memories;
    if (memory_) {
        memories = retrieve_solutions(failed, *memory_,
                                      RetrievalConfig{.n = cfg.n_episodic,
                                                      .include_self_learned = cfg.include_self_learned});
    }
    auto refl = reflect(state_.working_query, *state_.plan, *state_.report, memories, *llm_, cfg.model_id,
                        [this](std::string_view q) { return rules_for(q); });
    emit("reflection", {{"iteration", state_.iteration}, {"reflection", to_json(refl)}});
    if (memory_) {
        auto ids = record_insights(refl, *memory_, cfg.self_learning);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            emit("insight", {{"iteration", state_.iteration}, {"memory_id", ids[i]}, {"text", refl.insights[i]}});
        }
    }
    const bool no_suggestions = refl.suggestions.empty();
    std::string feedback = text::join(refl.suggestions, "\n");
    commit([&](SessionState& s) {
        s.working_query = refl.updated_query;
        s.reflection = std::move(refl);
    });
    if (no_suggestions) {
        commit([](SessionState& s) {
            s.phase = Phase::Done;
            s.status = Status::NoChange;
        });
    } else {
        advance_after_failure(std::move(feedback));
    }
}

void Session::submit_decision(const Decision& decision) {
    std::lock_guard lk(step_mu_);
    if (state_.status != Status::Running || state_.phase != Phase::AwaitingDecision) {
        throw PhaseError("decision not allowed in phase " + std::string(to_string(state_.phase)));
    }
    if (decision.kind == DecisionKind::Amend && text::trim(decision.text).empty()) {
        throw ConfigError("amend requires text");
    }
    json payload{{"iteration", state_.iteration}, {"decision", std::string(to_string(decision.kind))}};
    if (decision.kind == DecisionKind::Amend) payload["text"] = decision.text;
    emit("decision", std::move(payload));
    switch (decision.kind) {
        case DecisionKind::Proceed:
            if (state_.config.reflect) {
                commit([](SessionState& s) { s.phase = Phase::Reflecting; });
            } else {
                std::string failed_text;
                for (const auto& r : state_.report->failed()) {
                    failed_text += (failed_text.empty() ? "" : "\n") + r.rule_text + " (" + r.detail + ")";
                }
                advance_after_failure("Failed checks:\n" + failed_text);
            }
            break;
        case DecisionKind::Stop:
            commit([](SessionState& s) {
                s.phase = Phase::Done;
                s.status = Status::UserStopped;
            });
            break;
        case DecisionKind::Amend:
            commit([&](SessionState& s) { s.working_query = decision.text; });
            advance_after_failure("");
            break;
    }
}

SessionState Session::snapshot() const {
    std::lock_guard lk(state_mu_);
    return state_;
}

std::vector<TranscriptEvent> Session::transcript_after(std::uint64_t seq) const {
    std::lock_guard lk(state_mu_);
    std::vector<TranscriptEvent> out;
    for (const auto& e : state_.transcript) {
        if (e.seq > seq) out.push_back(e);
    }
    return out;
}

Phase Session::phase() const {
    std::lock_guard lk(state_mu_);
    return state_.phase;
}

Status Session::status() const {
    std::lock_guard lk(state_mu_);
    return state_.status;
}

CustomerTable Session::audience() const {
    std::lock_guard lk(state_mu_);
    return audience_ ? *audience_ : table_.subset({});
}

}  // namespace ramp
