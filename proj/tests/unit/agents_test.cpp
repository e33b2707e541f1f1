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

#include "fixtures.hpp"
#include "ramp/planner_actor.hpp"
#include "ramp/reflector.hpp"
#include "ramp/verifier.hpp"

namespace ramp {
namespace {

using llm::AgentTag;
using testing::Script;

// ---------------------------------------------------------------------------
// Planner

TEST(Planner, ParsesListAfterPlanMarker) {
    const auto p = parse_plan("[PLANNER OUTPUT]\n\nPlan:\n1. Keep users in MA.\n2) Keep age >= 30.\n- Limit to 10.\n");
    EXPECT_EQ(p.steps, (std::vector<std::string>{"Keep users in MA.", "Keep age >= 30.", "Limit to 10."}));
    EXPECT_THROW((void)parse_plan("1. no marker"), PlanParseError);
    EXPECT_THROW((void)parse_plan("Plan:\nnothing listed"), PlanParseError);
}

TEST(Planner, RequestFillsSlots) {
    MemoryItem fact{"mem-1", MemoryKind::Semantic, "State is a postal code.", MemorySource::Human, ""};
    PlannerInput in{"Find MA users", "state (text)", "Consider the state code.", {{fact, 1.0}}};
    const auto req = planner_request(in, "gpt-4.1");
    EXPECT_EQ(req.agent_tag, AgentTag::Planner);
    EXPECT_NE(req.user.find("User Query: Find MA users"), std::string::npos);
    EXPECT_NE(req.user.find("Critiquer Feedback: Consider the state code."), std::string::npos);
    EXPECT_NE(req.user.find("- State is a postal code."), std::string::npos);
    EXPECT_EQ(req.user.find("{memory_prompt}"), std::string::npos);
    EXPECT_EQ(format_plan(parse_plan("Plan:\n1. a\n2. b")), "\n1. a\n2. b");
}

// ---------------------------------------------------------------------------
// Actor

TEST(Actor, CompilesAndExecutesSteps) {
    const auto t = testing::shop_table();
    Script s;
    s.add(AgentTag::Actor, "```\nstate = \"MA\"\n```").add(AgentTag::Actor, "age >= 35");
    auto llm = s.provider();
    Plan plan{{"Keep MA users", "Keep users aged 35 or more"}, ""};
    const auto r = act(plan, ActorContext{t, nullptr, {}, *llm, "gpt-4.1", testing::shop_today()});
    EXPECT_EQ(r.audience.ids(), (std::vector<std::string>{"u5", "u8"}));
    ASSERT_EQ(r.steps.size(), 2u);
    EXPECT_EQ(r.steps[0].rows_before, 8u);
    EXPECT_EQ(r.steps[0].rows_after, 4u);
    EXPECT_EQ(r.steps[1].rows_after, 2u);
    EXPECT_EQ(r.steps[0].dsl_source, "state = \"MA\"");
}

TEST(Actor, RetriesOnceWithTheError) {
    const auto t = testing::shop_table();
    Script s;
    s.add(AgentTag::Actor, "residence = \"MA\"").add(AgentTag::Actor, "state = \"MA\"");
    auto llm = s.provider();
    const auto step = compile_step("Keep MA users", t, {}, *llm, "m");
    EXPECT_TRUE(step.retried);
    EXPECT_EQ(step.model_outputs.size(), 2u);
}

TEST(Actor, SecondFailureNamesTheStep) {
    const auto t = testing::shop_table();
    Script s;
    s.add(AgentTag::Actor, "state = \"MA\"")
        .add(AgentTag::Actor, "df[df.state == 'MA']")
        .add(AgentTag::Actor, "age > 3\nage < 9");
    auto llm = s.provider();
    Plan plan{{"Keep MA users", "Keep something odd"}, ""};
    try {
        (void)act(plan, ActorContext{t, nullptr, {}, *llm, "m", testing::shop_today()});
        FAIL();
    } catch (const ActError& e) {
        EXPECT_EQ(e.step_index(), 1u);
        EXPECT_NE(std::string(e.what()).find("Keep something odd"), std::string::npos) << e.what();
    }
}

TEST(Actor, LimitStep) {
    const auto t = testing::shop_table();
    Script s;
    s.add(AgentTag::Actor, "limit 2 by propensity_hotels desc");
    auto llm = s.provider();
    Plan plan{{"Take the 2 users most likely to book hotels"}, ""};
    const auto r = act(plan, ActorContext{t, nullptr, {}, *llm, "m", testing::shop_today()});
    EXPECT_EQ(r.audience.ids(), (std::vector<std::string>{"u4", "u8"}));
}

// ---------------------------------------------------------------------------
// Verifier

TEST(Verifier, ParsesRuleLists) {
    EXPECT_EQ(parse_rules("1. The number of users is 300.\n2. Users live in MA.\n3. Assume today is 2025-06-30."),
              (std::vector<std::string>{"The number of users is 300.", "Users live in MA."}));
    EXPECT_EQ(parse_rules(R"(["Users live in MA", "Assume today is 2025-06-30"])"),
              (std::vector<std::string>{"Users live in MA"}));
    EXPECT_TRUE(parse_rules("None").empty());
    EXPECT_EQ(parse_rules("The verifiable statements are:\nUsers are 30 or older."),
              (std::vector<std::string>{"Users are 30 or older."}));
    EXPECT_THROW((void)parse_rules("[\"unterminated"), RuleParseError);
}

TEST(Verifier, ExtractionPromptCarriesQuery) {
    const auto req = extract_rules_request("Find 300 users in MA", "m");
    EXPECT_EQ(req.agent_tag, AgentTag::VerifierExtract);
    EXPECT_NE(req.user.find("The user prompt is: Find 300 users in MA"), std::string::npos);
}

TEST(Verifier, SizeRuleFailsWithCount) {
    // 250-row audience checked against "at least 300 users".
    std::vector<CustomerTable::Column> cols(1);
    cols[0].meta = {"id", ColumnType::Text, "", ';', {}};
    for (int i = 0; i < 250; ++i) cols[0].cells.emplace_back("c" + std::to_string(i));
    const auto t = CustomerTable::from_columns(std::move(cols), "id");
    Script s;
    s.add(AgentTag::VerifierCompile, "row_count >= 300");
    auto llm = s.provider();
    const auto rule = compile_rule("The number of users is at least 300.", t, {}, *llm, "m");
    ASSERT_TRUE(rule.predicate.has_value());
    const auto report = verify(t, {rule}, testing::shop_today());
    EXPECT_FALSE(report.all_passed);
    ASSERT_EQ(report.rules.size(), 1u);
    EXPECT_EQ(report.rules[0].result, RuleResult::Fail);
    EXPECT_EQ(report.rules[0].detail, "count=250");
    EXPECT_EQ(report.audience_size, 250u);
}

TEST(Verifier, UncompiledRulesFailClosed) {
    const auto t = testing::shop_table();
    Script s;
    s.add(AgentTag::VerifierCompile, "def test(df): return True").add(AgentTag::VerifierCompile, "all_rows(tier = 1)");
    auto llm = s.provider();
    const auto rule = compile_rule("Users are gold members.", t, {}, *llm, "m");
    EXPECT_FALSE(rule.predicate.has_value());
    EXPECT_FALSE(rule.error.empty());
    EXPECT_EQ(rule.model_outputs.size(), 2u);
    const auto report = verify(t, {rule}, testing::shop_today());
    EXPECT_FALSE(report.all_passed);
    EXPECT_EQ(report.rules[0].result, RuleResult::NotCompiled);
    EXPECT_EQ(report.failed().size(), 1u);
    EXPECT_EQ(to_json(report)["rules"][0]["result"], "not_compiled");
}

TEST(Verifier, PassingReport) {
    const auto t = testing::shop_table();
    const auto ma = t.subset({0, 2, 4, 7});
    Script s;
    s.add(AgentTag::VerifierCompile, "all_rows(state = \"MA\")").add(AgentTag::VerifierCompile, "row_count = 4");
    auto llm = s.provider();
    const auto r1 = compile_rule("Users live in MA.", t, {}, *llm, "m");
    const auto r2 = compile_rule("There are 4 users.", t, {}, *llm, "m");
    const auto report = verify(ma, {r1, r2}, testing::shop_today());
    EXPECT_TRUE(report.all_passed);
    EXPECT_TRUE(report.failed().empty());
}

TEST(Verifier, NoRulesPasses) {
    const auto report = verify(testing::shop_table(), {}, testing::shop_today());
    EXPECT_TRUE(report.all_passed);
}

// ---------------------------------------------------------------------------
// Reflector

VerificationReport failing_report() {
    VerificationReport r;
    r.all_passed = false;
    r.audience_size = 12;
    r.rules.push_back({"The number of users is at least 300.", "row_count >= 300", RuleResult::Fail, "count=12"});
    r.rules.push_back({"Users live in MA.", "all_rows(state = \"MA\")", RuleResult::Pass, "all 12 rows satisfy"});
    return r;
}

RuleExtractor phrase_extractor() {
    return [](std::string_view q) {
        std::vector<std::string> out;
        if (q.find("300 users") != std::string_view::npos) out.emplace_back("The number of users is at least 300.");
        if (q.find("in MA") != std::string_view::npos) out.emplace_back("Users live in MA.");
        if (q.find("hotel score above 80") != std::string_view::npos) out.emplace_back("Hotel score is above 80.");
        if (q.find("opted in") != std::string_view::npos) out.emplace_back("Users opted in to email.");
        return out;
    };
}

const std::string kQuery = "Find 300 users in MA with hotel score above 80. Assume today is 2025-06-30.";
const Plan kPlan{{"Keep MA users", "Keep hotel score above 80"}, ""};

TEST(Reflector, ParsesSectionVariants) {
    const auto p = parse_reflection(
        "**Suggested changes to the plan:**\n1. Consider lowering the threshold.\n\n"
        "### Updated user query: Find 300 users in MA.\n\n(3) Distilled insights:\n- Thresholds are often too strict.");
    EXPECT_EQ(p.suggestions, (std::vector<std::string>{"Consider lowering the threshold."}));
    EXPECT_EQ(p.updated_query, "Find 300 users in MA.");
    EXPECT_EQ(p.insights, (std::vector<std::string>{"Thresholds are often too strict."}));
    EXPECT_THROW((void)parse_reflection("I have no idea."), ReflectionParseError);
}

TEST(Reflector, AcceptsDropOnlyUpdate) {
    Script s;
    s.add(AgentTag::Reflector,
          "Suggested changes to the plan:\n- Consider lowering the hotel score threshold to 60.\n\n"
          "Updated user query: Find 300 users in MA. Assume today is 2025-06-30.\n\n"
          "Distilled insights:\n- Relax numeric thresholds before location filters.");
    auto llm = s.provider();
    const auto r = reflect(kQuery, kPlan, failing_report(), {}, *llm, "m", phrase_extractor());
    EXPECT_EQ(r.updated_query, "Find 300 users in MA. Assume today is 2025-06-30.");
    EXPECT_FALSE(r.rejected_query.has_value());
    EXPECT_EQ(r.suggestions.size(), 1u);
    EXPECT_EQ(r.insights.size(), 1u);
}

TEST(Reflector, RejectsAddedCriteria) {
    Script s;
    s.add(AgentTag::Reflector,
          "Suggested changes to the plan:\n- You may try dropping the hotel filter.\n- Add an email filter.\n\n"
          "Updated user query: Find 300 users in MA who opted in to email. Assume today is 2025-06-30.\n\n"
          "Distilled insights:\nNone");
    auto llm = s.provider();
    const auto r = reflect(kQuery, kPlan, failing_report(), {}, *llm, "m", phrase_extractor());
    EXPECT_EQ(r.updated_query, kQuery);
    ASSERT_TRUE(r.rejected_query.has_value());
    EXPECT_NE(r.rejected_query->find("opted in"), std::string::npos);
    EXPECT_FALSE(r.violation.empty());
    EXPECT_EQ(r.suggestions, (std::vector<std::string>{"You may try dropping the hotel filter."}));
    EXPECT_EQ(r.dropped_suggestions, (std::vector<std::string>{"Add an email filter."}));
    EXPECT_TRUE(r.insights.empty());
}

TEST(Reflector, ExtractionFailureKeepsQuery) {
    Script s;
    s.add(AgentTag::Reflector, "Suggested changes:\n- Consider X.\n\nUpdated query: something else");
    auto llm = s.provider();
    const RuleExtractor broken = [](std::string_view) -> std::vector<std::string> { throw RuleParseError("bad"); };
    const auto r = reflect(kQuery, kPlan, failing_report(), {}, *llm, "m", broken);
    EXPECT_EQ(r.updated_query, kQuery);
    EXPECT_TRUE(r.rejected_query.has_value());
}

TEST(Reflector, DropOnlyIsNormalized) {
    EXPECT_TRUE(is_drop_only({"Users live in MA.", "Age is 30+"}, {"users  live in ma"}));
    EXPECT_TRUE(is_drop_only({"Users live in MA."}, {}));
    EXPECT_FALSE(is_drop_only({"Users live in MA."}, {"Users live in NY."}));
}

TEST(Reflector, FeedbackAndPrompt) {
    MemoryItem m{"mem-9", MemoryKind::Episodic, "Issue: too few users. Solution: relax the threshold.",
                 MemorySource::Human, ""};
    const auto fb = format_feedback(failing_report().failed(), {{m, 2.0}});
    EXPECT_NE(fb.find("The number of users is at least 300. (count=12)"), std::string::npos) << fb;
    EXPECT_NE(fb.find("relax the threshold"), std::string::npos);
    EXPECT_EQ(fb.find("Users live in MA."), std::string::npos);
    const auto req = reflector_request(kQuery, kPlan, fb, "m");
    EXPECT_EQ(req.agent_tag, AgentTag::Reflector);
    EXPECT_NE(req.user.find("User query: " + kQuery), std::string::npos);
    EXPECT_NE(req.user.find("1. Keep MA users"), std::string::npos);
}

TEST(Reflector, RetrieveSolutionsMergesByBestScore) {
    MemoryStore store([] { return std::string("t"); });
    const auto a = store.add(MemoryKind::Episodic, "Issue: number of users too small. Solution: relax thresholds.");
    const auto b = store.add(MemoryKind::Episodic, "Issue: users outside MA. Solution: use state code.");
    store.add(MemoryKind::Semantic, "number of users semantic fact");
    VerificationReport r;
    r.rules.push_back({"The number of users is at least 300.", "", RuleResult::Fail, ""});
    r.rules.push_back({"Users live in MA.", "", RuleResult::Fail, ""});
    const auto hits = retrieve_solutions(r.failed(), store, RetrievalConfig{.n = 5});
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_TRUE((hits[0].item.id == a && hits[1].item.id == b) || (hits[0].item.id == b && hits[1].item.id == a));
    EXPECT_GE(hits[0].score, hits[1].score);
    EXPECT_EQ(retrieve_solutions(r.failed(), store, RetrievalConfig{.n = 1}).size(), 1u);
    EXPECT_TRUE(retrieve_solutions(r.failed(), store, RetrievalConfig{.n = 0}).empty());
}

TEST(Reflector, RecordInsightsOnlyWhenEnabled) {
    MemoryStore store([] { return std::string("t"); });
    Reflection r;
    r.insights = {"Relax numeric thresholds first.", "State is a postal code."};
    EXPECT_TRUE(record_insights(r, store, false).empty());
    EXPECT_EQ(store.size(), 0u);
    const auto ids = record_insights(r, store, true);
    ASSERT_EQ(ids.size(), 2u);
    const auto item = store.find(ids[0]);
    EXPECT_EQ(item->kind, MemoryKind::Semantic);
    EXPECT_EQ(item->source, MemorySource::SelfLearned);
}

}  // namespace
}  // namespace ramp
