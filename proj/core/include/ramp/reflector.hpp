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

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ramp/error.hpp"
#include "ramp/llm_gateway.hpp"
#include "ramp/memory_store.hpp"
#include "ramp/planner_actor.hpp"
#include "ramp/verifier.hpp"

namespace ramp {

class ReflectionParseError : public Error {
public:
    using Error::Error;
};

/// Sections of a critiquer reply before any validation.
struct ParsedReflection {
    std::vector<std::string> suggestions;
    std::optional<std::string> updated_query;
    std::vector<std::string> insights;
};

/// Splits the reply on its three section headings ("Suggested changes",
/// "Updated user query", "Distilled insights" and close variants). Throws
/// when neither a suggestions nor an updated-query section is present.
ParsedReflection parse_reflection(std::string_view output);

struct Reflection {
    std::vector<std::string> suggestions;
    std::string updated_query;
    std::vector<std::string> insights;
    std::vector<ScoredMemory> retrieved_memories;

    std::vector<std::string> dropped_suggestions;  // not phrased as recommendations
    std::optional<std::string> rejected_query;     // proposed query that added criteria
    std::string violation;
    std::string raw_output;
};

/// Rule extraction used for the drop-only check.
using RuleExtractor = std::function<std::vector<std::string>(std::string_view query)>;

/// Episodic retrieval per failed rule, merged by id keeping the best score,
/// ordered by score and cut to cfg.n.
std::vector<ScoredMemory> retrieve_solutions(const std::vector<VerificationRule>& failed_rules,
                                             const MemoryStore& store, const RetrievalConfig& cfg);

std::string format_feedback(const std::vector<VerificationRule>& failed_rules,
                            const std::vector<ScoredMemory>& memories);

llm::ChatRequest reflector_request(std::string_view query, const Plan& plan, std::string_view feedback,
                                   const std::string& model_id);

/// True when every rule extracted from `updated` also appears (after
/// sentence normalization) among the rules of `original`.
bool is_drop_only(const std::vector<std::string>& original_rules, const std::vector<std::string>& updated_rules);

/// Runs the critiquer and enforces the output contract: suggestions must
/// start with "Consider" or "You may try"; an updated query whose rule set
/// is not a subset of the original's is rejected and the original kept.
Reflection reflect(std::string_view query, const Plan& plan, const VerificationReport& report,
                   const std::vector<ScoredMemory>& memories, llm::ChatProvider& llm, const std::string& model_id,
                   const RuleExtractor& extract);

/// Appends insights as self-learned semantic memories when enabled.
std::vector<std::string> record_insights(const Reflection& reflection, MemoryStore& store, bool enabled);

nlohmann::json to_json(const Reflection& r);

}  // namespace ramp
