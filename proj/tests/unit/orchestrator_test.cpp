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
#include <gtest/gtest.h>

#include <chrono>
#include <future>
#include <thread>

#include "fixtures.hpp"
#include "ramp/orchestrator.hpp"

namespace ramp {
namespace {

using llm::AgentTag;
using testing::Script;

const std::string kQuery = "Find 5 users in MA. Assume today is 2025-06-30.";
const char* kReflectKeep =
    "Suggested changes to the plan:\n- Consider widening the audience.\n\n"
    "Updated user query: Find 5 users in MA. Assume today is 2025-06-30.\n\nDistilled insights:\n- None";

SessionConfig config(std::size_t max_iterations = 1) {
    SessionConfig c;
    c.today = testing::shop_today();
    c.max_iterations = max_iterations;
    return c;
}

std::string fixed_clock() { return "2025-06-30T12:00:00Z"; }

Session make(const Script& s, SessionConfig cfg, const std::string& query = kQuery,
             std::shared_ptr<MemoryStore> memory = nullptr) {
    return Session("s1", query, std::move(cfg), testing::shop_table(), std::move(memory), s.provider(), fixed_clock);
}

// One MA iteration: 4 rows, checked against "at least 5".
void add_iteration(Script& s) {
    s.add(AgentTag::Planner, "Plan:\n1. Keep users who live in MA").add(AgentTag::Actor, "state = \"MA\"");
}

void add_checks(Script& s) {
    s.add(AgentTag::VerifierExtract, "1. The number of users is at least 5.\n2. Users live in MA.\n3. Assume today is 2025-06-30.")
        .add(AgentTag::VerifierCompile, "row_count >= 5")
        .add(AgentTag::VerifierCompile, "all_rows(state = \"MA\")");
}

std::vector<std::string> kinds(const SessionState& s) {
    std::vector<std::string> out;
    for (const auto& e : s.transcript) out.push_back(e.kind);
    return out;
}

TEST(SessionConfig, Validation) {
    SessionConfig c;
    EXPECT_THROW(c.validate(), ConfigError);  // no today
    c.today = testing::shop_today();
    EXPECT_NO_THROW(c.validate());
    c.max_iterations = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c.max_iterations = 1;
    c.verify = false;
    EXPECT_THROW(c.validate(), ConfigError);
    c.reflect = false;
    EXPECT_NO_THROW(c.validate());
}

TEST(SessionConfig, JsonRoundTrip) {
    auto c = config(3);
    c.approval_mode = ApprovalMode::Interactive;
    c.self_learning = true;
    const auto back = session_config_from_json(to_json(c));
    EXPECT_EQ(to_json(back), to_json(c));
    EXPECT_THROW((void)session_config_from_json({{"max_loops", 2}}), ConfigError);
    EXPECT_THROW((void)session_config_from_json({{"max_iterations", -1}}), ConfigError);
    EXPECT_THROW((void)session_config_from_json({{"today", "June"}}), ConfigError);
    EXPECT_THROW((void)session_config_from_json({{"approval_mode", "sometimes"}}), ConfigError);
}

TEST(Session, SucceedsWhenChecksPass) {
    Script s;
    s.add(AgentTag::Planner, "Plan:\n1. Keep users who live in MA\n2. Keep users opted in to email")
        .add(AgentTag::Actor, "state = \"MA\"")
        .add(AgentTag::Actor, "email_opt_in = true")
        .add(AgentTag::VerifierExtract, "1. Users live in MA.\n2. Users opted in to email.")
        .add(AgentTag::VerifierCompile, "all_rows(state = \"MA\")")
        .add(AgentTag::VerifierCompile, "all_rows(email_opt_in = true)");
    auto session = make(s, config(), "Find MA users opted in to email. Assume today is 2025-06-30.");
    EXPECT_EQ(session.phase(), Phase::Planning);
    session.step();
    EXPECT_EQ(session.phase(), Phase::Acting);
    session.step();
    EXPECT_EQ(session.phase(), Phase::Verifying);
    session.step();
    const auto st = session.snapshot();
    EXPECT_EQ(st.phase, Phase::Done);
    EXPECT_EQ(st.status, Status::Success);
    EXPECT_EQ(st.audience_ids, (std::vector<std::string>{"u1", "u3"}));
    EXPECT_EQ(session.audience().ids(), st.audience_ids);
    EXPECT_EQ(kinds(st), (std::vector<std::string>{"plan", "compiled_step", "compiled_step", "audience_summary",
                                                   "rule_result", "rule_result"}));
    for (std::size_t i = 0; i < st.transcript.size(); ++i) EXPECT_EQ(st.transcript[i].seq, i + 1);
    EXPECT_EQ(session.transcript_after(4).size(), 2u);
    EXPECT_TRUE(session.transcript_after(6).empty());
    EXPECT_THROW(session.step(), PhaseError);
}

TEST(Session, BudgetExhaustedAfterLastIteration) {
    Script s;
    add_iteration(s);
    add_checks(s);
    s.add(AgentTag::Reflector, kReflectKeep);
    add_iteration(s);
    s.add(AgentTag::Reflector, kReflectKeep);
    auto session = make(s, config(2));
    session.run_to_completion();
    const auto st = session.snapshot();
    EXPECT_EQ(st.status, Status::BudgetExhausted);
    EXPECT_EQ(st.iteration, 2u);
    EXPECT_EQ(st.audience_ids.size(), 4u);
    ASSERT_TRUE(st.report.has_value());
    EXPECT_EQ(st.report->failed().size(), 1u);
    EXPECT_EQ(st.report->failed()[0].detail, "count=4");
}

TEST(Session, SecondPlanSeesReflectorSuggestions) {
    Script s;
    add_iteration(s);
    add_checks(s);
    s.add(AgentTag::Reflector, kReflectKeep);
    add_iteration(s);
    s.add(AgentTag::Reflector, kReflectKeep);
    auto session = make(s, config(2));
    session.run_to_completion();
    const auto st = session.snapshot();
    std::vector<std::string> feedback;
    for (const auto& e : st.transcript) {
        if (e.kind == "plan") feedback.push_back(e.payload["feedback"]);
    }
    EXPECT_EQ(feedback, (std::vector<std::string>{"", "Consider widening the audience."}));
}

TEST(Session, NoSuggestionsEndsWithNoChange) {
    Script s;
    add_iteration(s);
    add_checks(s);
    s.add(AgentTag::Reflector, "Suggested changes to the plan:\nNone\n\nUpdated user query: " + kQuery);
    auto session = make(s, config(3));
    session.run_to_completion();
    EXPECT_EQ(session.status(), Status::NoChange);
    EXPECT_EQ(session.snapshot().iteration, 1u);
}

TEST(Session, ErrorsAreTerminal) {
    Script s;
    s.add(AgentTag::Planner, "I will not make a plan.");
    auto session = make(s, config());
    session.step();
    const auto st = session.snapshot();
    EXPECT_EQ(st.status, Status::Error);
    EXPECT_EQ(st.phase, Phase::Done);
    EXPECT_EQ(st.error_phase, "planning");
    EXPECT_EQ(kinds(st), std::vector<std::string>{"error"});
}

TEST(Session, InteractiveStop) {
    Script s;
    add_iteration(s);
    add_checks(s);
    auto cfg = config(3);
    cfg.approval_mode = ApprovalMode::Interactive;
    auto session = make(s, cfg);
    EXPECT_THROW(session.run_to_completion(), PhaseError);
    EXPECT_THROW(session.submit_decision({DecisionKind::Proceed, ""}), PhaseError);
    session.step();
    session.step();
    session.step();
    EXPECT_EQ(session.phase(), Phase::AwaitingDecision);
    EXPECT_THROW(session.step(), PhaseError);
    session.submit_decision({DecisionKind::Stop, ""});
    EXPECT_EQ(session.status(), Status::UserStopped);
    EXPECT_EQ(session.snapshot().transcript.back().kind, "decision");
}

TEST(Session, InteractiveProceedAndAmend) {
    Script s;
    add_iteration(s);
    add_checks(s);
    s.add(AgentTag::Reflector, kReflectKeep);
    add_iteration(s);
    auto cfg = config(3);
    cfg.approval_mode = ApprovalMode::Interactive;
    auto session = make(s, cfg);
    for (int i = 0; i < 3; ++i) session.step();
    session.submit_decision({DecisionKind::Proceed, ""});
    EXPECT_EQ(session.phase(), Phase::Reflecting);
    session.step();
    EXPECT_EQ(session.phase(), Phase::Planning);
    for (int i = 0; i < 3; ++i) session.step();
    ASSERT_EQ(session.phase(), Phase::AwaitingDecision);
    EXPECT_THROW(session.submit_decision({DecisionKind::Amend, "  "}), ConfigError);
    session.submit_decision({DecisionKind::Amend, "Find users in MA. Assume today is 2025-06-30."});
    const auto st = session.snapshot();
    EXPECT_EQ(st.iteration, 3u);
    EXPECT_EQ(st.phase, Phase::Planning);
    EXPECT_EQ(st.working_query, "Find users in MA. Assume today is 2025-06-30.");
    EXPECT_EQ(st.original_query, kQuery);
}

TEST(Session, AmendAtLastIterationExhaustsBudget) {
    Script s;
    add_iteration(s);
    add_checks(s);
    auto cfg = config(1);
    cfg.approval_mode = ApprovalMode::Interactive;
    auto session = make(s, cfg);
    for (int i = 0; i < 3; ++i) session.step();
    session.submit_decision({DecisionKind::Amend, "Find users in MA."});
    EXPECT_EQ(session.status(), Status::BudgetExhausted);
    EXPECT_EQ(session.snapshot().working_query, "Find users in MA.");
}

TEST(Session, PlannerOffUsesQueryAsStep) {
    Script s;
    s.add(AgentTag::Actor, "state = \"MA\"");
    auto cfg = config();
    cfg.use_planner = false;
    cfg.verify = false;
    cfg.reflect = false;
    auto session = make(s, cfg);
    session.run_to_completion();
    const auto st = session.snapshot();
    EXPECT_EQ(st.status, Status::Success);
    ASSERT_TRUE(st.plan.has_value());
    EXPECT_EQ(st.plan->steps, std::vector<std::string>{kQuery});
    EXPECT_EQ(st.audience_ids.size(), 4u);
}

TEST(Session, ReflectOffFeedsFailedChecksToPlanner) {
    Script s;
    add_iteration(s);
    add_checks(s);
    add_iteration(s);
    auto cfg = config(2);
    cfg.reflect = false;
    auto session = make(s, cfg);
    session.run_to_completion();
    const auto st = session.snapshot();
    EXPECT_EQ(st.status, Status::BudgetExhausted);
    std::string second_feedback;
    for (const auto& e : st.transcript) {
        if (e.kind == "plan" && e.payload["iteration"] == 2) second_feedback = e.payload["feedback"];
    }
    EXPECT_EQ(second_feedback, "Failed checks:\nThe number of users is at least 5. (count=4)");
}

TEST(Session, SelfLearningWritesInsights) {
    Script s;
    add_iteration(s);
    add_checks(s);
    s.add(AgentTag::Reflector,
          "Suggested changes to the plan:\n- Consider widening the audience.\n\nUpdated user query: " + kQuery +
              "\n\nDistilled insights:\n- Small states rarely reach five users.");
    auto store = std::make_shared<MemoryStore>(fixed_clock);
    auto cfg = config(1);
    cfg.self_learning = true;
    auto session = make(s, cfg, kQuery, store);
    session.run_to_completion();
    const auto items = store->list(MemoryKind::Semantic);
    ASSERT_EQ(items.size(), 1u);
    EXPECT_EQ(items[0].source, MemorySource::SelfLearned);
    EXPECT_EQ(kinds(session.snapshot()).back(), "insight");
}

TEST(Session, ReplayFingerprintIsStable) {
    auto once = [] {
        Script s;
        add_iteration(s);
        add_checks(s);
        s.add(AgentTag::Reflector, kReflectKeep);
        add_iteration(s);
        s.add(AgentTag::Reflector, kReflectKeep);
        auto session = make(s, config(2));
        session.run_to_completion();
        return transcript_fingerprint(session.snapshot().transcript);
    };
    const auto a = once();
    EXPECT_EQ(a, once());
    EXPECT_EQ(a.find("timestamp"), std::string::npos);
}

class GateProvider final : public llm::ChatProvider {
public:
    explicit GateProvider(std::shared_ptr<llm::ChatProvider> inner) : inner_(std::move(inner)) {}
    llm::ChatResponse complete(const llm::ChatRequest& req) override {
        entered.set_value();
        release.get_future().wait();
        return inner_->complete(req);
    }
    std::promise<void> entered;
    std::promise<void> release;

private:
    std::shared_ptr<llm::ChatProvider> inner_;
};

TEST(Session, SnapshotDoesNotWaitOnModelCall) {
    Script s;
    add_iteration(s);
    auto gate = std::make_shared<GateProvider>(s.provider());
    Session session("s1", kQuery, config(), testing::shop_table(), nullptr, gate, fixed_clock);
    auto entered = gate->entered.get_future();
    std::thread worker([&] { session.step(); });
    entered.wait();
    auto snap = std::async(std::launch::async, [&] { return session.snapshot(); });
    const bool ready = snap.wait_for(std::chrono::seconds(5)) == std::future_status::ready;
    gate->release.set_value();
    worker.join();
    ASSERT_TRUE(ready);
    EXPECT_EQ(snap.get().phase, Phase::Planning);
    EXPECT_EQ(session.phase(), Phase::Acting);
}

TEST(Session, StateJson) {
    Script s;
    add_iteration(s);
    add_checks(s);
    s.add(AgentTag::Reflector, kReflectKeep);
    auto session = make(s, config(1));
    session.run_to_completion();
    const auto j = to_json(session.snapshot());
    EXPECT_EQ(j["status"], "budget_exhausted");
    EXPECT_EQ(j["phase"], "done");
    EXPECT_EQ(j["session_id"], "s1");
    EXPECT_TRUE(j.contains("transcript"));
    EXPECT_TRUE(j.contains("report"));
}

}  // namespace
}  // namespace ramp
