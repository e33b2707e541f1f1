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

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ramp/filter_dsl.hpp"

namespace ramp::dsl {
namespace {

using Ids = std::vector<std::string>;

Ids run(const std::string& expr) {
    const auto t = testing::shop_table();
    return apply_filter(t, dsl::bind(parse_filter(expr), t), testing::shop_today()).ids();
}

TEST(DslEval, ShopExamples) {
    EXPECT_EQ(run(R"(state = "MA")"), (Ids{"u1", "u3", "u5", "u8"}));
    EXPECT_EQ(run(R"(state = "ma")"), Ids{});
    EXPECT_EQ(run(R"(age >= 45 and state = "MA")"), (Ids{"u8"}));
    EXPECT_EQ(run(R"(age < 30 or propensity_hotels >= 90)"), (Ids{"u3", "u4", "u7", "u8"}));
    EXPECT_EQ(run("search_date within_last 30 days"), (Ids{"u1", "u3", "u7"}));
    EXPECT_EQ(run(R"(pages_visited contains "hotel")"), (Ids{"u1", "u3", "u7", "u8"}));
    EXPECT_EQ(run(R"(pages_visited in ["Home"])"), (Ids{"u1", "u6"}));
    EXPECT_EQ(run(R"(state in ["NY", "TX"])"), (Ids{"u2", "u6", "u7"}));
    EXPECT_EQ(run("email_opt_in = true"), (Ids{"u1", "u3", "u4", "u7"}));
    EXPECT_EQ(run("search_date is null"), (Ids{"u5"}));
    EXPECT_EQ(run("email_opt_in is not null"), (Ids{"u1", "u2", "u3", "u4", "u6", "u7", "u8"}));
    EXPECT_EQ(run(R"(search_date >= date "2025-05-20")"), (Ids{"u1", "u3", "u6", "u7"}));
}

TEST(DslEval, NullsFailComparisonsButNotNegations) {
    EXPECT_EQ(run("email_opt_in = false"), (Ids{"u2", "u6", "u8"}));
    EXPECT_EQ(run("not (email_opt_in = true)"), (Ids{"u2", "u5", "u6", "u8"}));
    EXPECT_EQ(run("not (search_date within_last 30 days)"), (Ids{"u2", "u4", "u5", "u6", "u8"}));
}

TEST(DslEval, Limit) {
    const auto t = testing::shop_table();
    EXPECT_EQ(apply_limit(t, dsl::bind(parse_limit("limit 3"), t)).ids(), (Ids{"u1", "u2", "u3"}));
    EXPECT_EQ(apply_limit(t, dsl::bind(parse_limit("limit 2 by propensity_hotels desc"), t)).ids(), (Ids{"u4", "u8"}));
    EXPECT_EQ(apply_limit(t, dsl::bind(parse_limit("limit 2 by age asc"), t)).ids(), (Ids{"u3", "u7"}));
    EXPECT_EQ(apply_limit(t, dsl::bind(parse_limit("limit 100"), t)).row_count(), 8u);
}

TEST(DslEval, Predicates) {
    const auto t = testing::shop_table();
    const auto today = testing::shop_today();
    const auto ma = apply_filter(t, dsl::bind(parse_filter(R"(state = "MA")"), t), today);
    auto check = [&](const CustomerTable& on, const std::string& p) {
        return eval_predicate(on, dsl::bind(parse_predicate(p), t), today);
    };
    auto r = check(ma, "row_count >= 3");
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.detail, "count=4");
    EXPECT_FALSE(check(ma, "row_count > 4").passed);
    EXPECT_TRUE(check(ma, R"(all_rows(state = "MA"))").passed);
    r = check(t, R"(all_rows(state = "MA"))");
    EXPECT_FALSE(r.passed);
    EXPECT_EQ(r.detail, "4 of 8 rows fail; first failing id=u2");
    EXPECT_TRUE(check(t.subset({}), "all_rows(age > 200)").passed);
}

TEST(DslParse, RoundTripsCanonicalText) {
    for (const char* src : {R"(state = "MA")", R"((age >= 30 and not (state in ["NY", "TX"])) or flag = true)",
                            R"(pages_visited contains "a \"quoted\" word")", "d within_last 14 days",
                            R"(d < date "2025-01-01")", "x is not null", "n != -2.5"}) {
        const auto e = parse_filter(src);
        EXPECT_EQ(*parse_filter(to_string(*e)), *e) << src;
    }
    EXPECT_EQ(to_string(parse_limit("LIMIT 5 BY age")), "limit 5 by age desc");
}

TEST(DslParse, Errors) {
    for (const char* bad : {"", "age >", "age >= 30 and", R"(state = "MA)", "(age > 3", "age > 3 age < 4",
                            "pages_visited contains 5", "d within_last 0 days", R"(d > date "2025-02-30")",
                            "state in []"}) {
        EXPECT_THROW((void)parse_filter(bad), ParseError) << bad;
    }
    EXPECT_THROW((void)parse_statement("age > 3\nage < 5"), ParseError);
    EXPECT_THROW((void)parse_predicate("row_count >= many"), ParseError);
}

TEST(DslBind, TypeAndColumnErrors) {
    const auto t = testing::shop_table();
    for (const char* bad : {R"(age > "x")", "nope = 1", R"(state > 3)", "age within_last 3 days",
                            R"(email_opt_in contains "t")", R"(search_date = "2025-01-01")"}) {
        EXPECT_THROW((void)dsl::bind(parse_filter(bad), t), BindError) << bad;
    }
    EXPECT_THROW((void)dsl::bind(parse_limit("limit 3 by nope"), t), BindError);
}

TEST(DslEval, MatchesOracleOnRandomTables) {
    std::mt19937_64 rng(42);
    const Date today = Date::from_ymd(2025, 6, 30);
    for (int i = 0; i < 200; ++i) {
        const auto t = testing::random_table(rng, 60, today);
        const auto e = testing::random_expr(rng, 3);
        EXPECT_EQ(apply_filter(t, dsl::bind(e, t), today).ids(), testing::oracle_ids(*e, t, today)) << to_string(*e);
    }
}

}  // namespace
}  // namespace ramp::dsl
