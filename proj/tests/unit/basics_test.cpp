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

#include "ramp/date.hpp"
#include "ramp/prompts.hpp"
#include "ramp/text.hpp"

namespace ramp {
namespace {

TEST(Date, EpochAndRoundTrip) {
    EXPECT_EQ(Date::from_ymd(1970, 1, 1).days_since_epoch(), 0);
    EXPECT_EQ(Date::from_ymd(2000, 3, 1).days_since_epoch(), 11017);
    const auto d = Date::parse("2024-02-29");
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(d->to_string(), "2024-02-29");
    EXPECT_EQ(d->plus_days(1).to_string(), "2024-03-01");
    EXPECT_EQ(Date::from_ymd(2025, 1, 1).minus_days(1).to_string(), "2024-12-31");
}

TEST(Date, RejectsMalformed) {
    for (const char* bad : {"2025-02-30", "2023-02-29", "2025-13-01", "2025-6-30", "20250630", "2025-06-30x", ""}) {
        EXPECT_FALSE(Date::parse(bad).has_value()) << bad;
    }
    EXPECT_THROW((void)Date::parse_or_throw("yesterday"), std::invalid_argument);
}

TEST(Text, Tokenize) {
    EXPECT_EQ(text::tokenize("Hotel-propensity >= 50, MA!"),
              (std::vector<std::string>{"hotel", "propensity", "50", "ma"}));
    EXPECT_TRUE(text::tokenize("  --  ").empty());
}

TEST(Text, ListItems) {
    EXPECT_EQ(text::list_item_text("1. Filter by state"), "Filter by state");
    EXPECT_EQ(text::list_item_text("2) Keep age >= 30"), "Keep age >= 30");
    EXPECT_EQ(text::list_item_text("- dash"), "dash");
    EXPECT_EQ(text::list_item_text("* star"), "star");
    EXPECT_EQ(text::list_item_text("plain sentence"), "");
}

TEST(Text, NormalizeAndFence) {
    EXPECT_EQ(text::normalize_sentence("  Users   live in MA. "), "users live in ma");
    EXPECT_EQ(text::strip_code_fence("```dsl\nage > 3\n```"), "age > 3");
    EXPECT_EQ(text::strip_code_fence("age > 3"), "age > 3");
}

TEST(Text, Sha256KnownVector) {
    EXPECT_EQ(text::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Text, FormatNumber) {
    EXPECT_EQ(text::format_number(80.0), "80");
    EXPECT_EQ(text::format_number(0.25), "0.25");
    EXPECT_EQ(text::format_number(-3.5), "-3.5");
}

TEST(Prompts, RenderIsSinglePass) {
    EXPECT_EQ(prompts::render("{a} and {b} {c}", {{"a", "{b}"}, {"b", "x"}}), "{b} and x {c}");
}

TEST(Prompts, ExtractionTemplateIsVerbatim) {
    const auto t = prompts::verifier_extract();
    EXPECT_EQ(t.rfind("Please extract the verifiable statements from the user prompt.", 0), 0u) << t;
    EXPECT_NE(t.find("Note that the number of users is also a verifiable statement."), std::string_view::npos);
    EXPECT_NE(t.find("{user_prompt}"), std::string_view::npos);
}

TEST(Prompts, PlannerSlots) {
    const auto t = prompts::planner_user();
    for (const char* slot : {"{user_query}", "{metadata}", "{critiquer_feedback}", "{memory_prompt}"}) {
        EXPECT_NE(t.find(slot), std::string_view::npos) << slot;
    }
    EXPECT_NE(prompts::reflector_user().find("Start each suggestion with \"Consider\" or \"You may try\""),
              std::string_view::npos);
}

}  // namespace
}  // namespace ramp
