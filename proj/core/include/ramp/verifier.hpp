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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ramp/date.hpp"
#include "ramp/error.hpp"
#include "ramp/filter_dsl.hpp"
#include "ramp/llm_gateway.hpp"
#include "ramp/memory_store.hpp"
#include "ramp/table.hpp"

namespace ramp {

class RuleParseError : public Error {
public:
    using Error::Error;
};

llm::ChatRequest extract_rules_request(std::string_view query, const std::string& model_id);

/// Parses the extraction reply into rule sentences. Accepts list items or a
/// JSON array of strings; "None" means no rules. Statements mentioning
/// "Assume today" are dropped.
std::vector<std::string> parse_rules(std::string_view output);

std::vector<std::string> extract_rules(std::string_view query, llm::ChatProvider& llm, const std::string& model_id);

/// A rule with its predicate, or the reason it could not be compiled.
struct CompiledRule {
    std::string rule_text;
    std::optional<dsl::BoundPredicate> predicate;
    std::string predicate_source;
    std::string error;
    std::vector<std::string> model_outputs;
};

llm::ChatRequest compile_rule_request(std::string_view rule_text, const CustomerTable& table,
                                      const std::vector<ScoredMemory>& memories, const std::string& model_id);

/// Extracts exactly one predicate from a model reply (code fences allowed).
dsl::Predicate parse_predicate_output(std::string_view output);

/// One retry with the error fed back; a second failure yields a rule with
/// no predicate and the error recorded.
CompiledRule compile_rule(std::string_view rule_text, const CustomerTable& table,
                          const std::vector<ScoredMemory>& memories, llm::ChatProvider& llm,
                          const std::string& model_id);

enum class RuleResult { Pass, Fail, NotCompiled };
std::string_view to_string(RuleResult r);

struct VerificationRule {
    std::string rule_text;
    std::string predicate_source;
    RuleResult result = RuleResult::NotCompiled;
    std::string detail;
};

struct VerificationReport {
    std::vector<VerificationRule> rules;
    bool all_passed = true;
    std::size_t audience_size = 0;

    [[nodiscard]] std::vector<VerificationRule> failed() const;
};

/// Evaluates each compiled predicate on the audience. Uncompiled rules fail
/// closed.
VerificationReport verify(const CustomerTable& audience, const std::vector<CompiledRule>& rules, Date today);

nlohmann::json to_json(const VerificationRule& r);
nlohmann::json to_json(const VerificationReport& r);

}  // namespace ramp
