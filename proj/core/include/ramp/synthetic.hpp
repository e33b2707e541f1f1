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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ramp/benchmark_runner.hpp"
#include "ramp/date.hpp"
#include "ramp/filter_dsl.hpp"
#include "ramp/llm_gateway.hpp"
#include "ramp/memory_store.hpp"
#include "ramp/table.hpp"

namespace ramp {

/// Seeded generator whose draws depend only on the raw mt19937_64 stream,
/// so output is identical across standard libraries.
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    /// Uniform double in [0, 1).
    double uniform01();
    bool bernoulli(double p) { return uniform01() < p; }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(v.size()) - 1))];
    }

private:
    std::mt19937_64 engine_;
};

/// One atomic criterion of a generated query.
struct ClauseSpec {
    enum class Kind { NumberCompare, DateWithin, DateCompare, BoolEquals, TextEquals, ListContains };

    Kind kind = Kind::NumberCompare;
    std::string column;
    dsl::CompareOp op = dsl::CompareOp::Ge;
    double number = 0.0;
    int days = 0;
    Date date;
    bool flag = false;
    std::string text;  // stored value (state code, tier, page name)

    std::string phrase;     // natural-language fragment used in the query
    std::string rule_text;  // sentence the verifier extracts for it
    std::string step_text;  // planner step

    /// Canonical DSL expression for this clause.
    [[nodiscard]] std::string dsl() const;
};

/// Brute-force evaluation over the table's cells, written independently of
/// the DSL evaluator. Null cells never satisfy a clause.
bool clause_holds(const ClauseSpec& clause, const CustomerTable& table, std::size_t row, Date today);
std::vector<std::string> scan_ids(const CustomerTable& table, const std::vector<ClauseSpec>& clauses, Date today);

struct SyntheticCase {
    BenchmarkCase bench;
    std::vector<ClauseSpec> clauses;
    /// Extra filters a planner without memory adds (e.g. browsing destination
    /// for a residence criterion).
    std::vector<ClauseSpec> distractors;
};

/// Query with a size requirement whose literal threshold is too strict.
/// thresholds[0] is the literal value; thresholds[1] and [2] are the
/// successive relaxations. Gold is the audience at thresholds[2].
struct ChallengeCase {
    BenchmarkCase bench;
    std::size_t min_size = 0;
    std::vector<ClauseSpec> fixed;  // clauses kept across iterations
    ClauseSpec numeric;             // literal threshold clause
    std::vector<double> thresholds;
    std::string relaxed_query;  // query with the numeric filter dropped
    std::string size_rule;
};

struct GenConfig {
    std::size_t rows = 15044;
    std::size_t cases = 88;
    std::size_t challenge_cases = 10;
    Date today = Date::from_ymd(2025, 6, 30);

    /// Throws ConfigError.
    void validate() const;
};

struct SyntheticData {
    CustomerTable table;
    std::vector<SyntheticCase> cases;
    std::vector<ChallengeCase> challenges;
    MemoryStore memory;
    Date today;
};

/// Deterministic for a given (config, seed).
SyntheticData generate_synthetic(const GenConfig& config, std::uint64_t seed);

inline constexpr std::string_view kSyntheticClock = "2025-06-30T00:00:00Z";

enum class ScriptStyle {
    Reference,  // correct plan, steps and checks
    NoMemory,   // plan carries the extra distractor steps
    NoPlanner,  // one actor call for the whole query
};

/// Replay transcript for one case under the given style.
std::vector<llm::TranscriptEntry> scripted_transcript(const SyntheticCase& c, ScriptStyle style);

/// Replay transcript for a challenge case covering three iterations; the
/// reflector relaxes the threshold one step per iteration.
std::vector<llm::TranscriptEntry> challenge_transcript(const ChallengeCase& c);

std::vector<BenchmarkCase> benchmark_cases(const std::vector<SyntheticCase>& cases);
std::vector<BenchmarkCase> benchmark_cases(const std::vector<ChallengeCase>& cases);

}  // namespace ramp
