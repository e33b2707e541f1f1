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
#include <string>
#include <string_view>
#include <vector>

#include "ramp/date.hpp"
#include "ramp/error.hpp"
#include "ramp/filter_dsl.hpp"
#include "ramp/llm_gateway.hpp"
#include "ramp/memory_store.hpp"
#include "ramp/table.hpp"

namespace ramp {

/// Ordered natural-language filter steps produced by the planner.
struct Plan {
    std::vector<std::string> steps;
    std::string raw_output;
};

class PlanParseError : public Error {
public:
    using Error::Error;
};

struct PlannerInput {
    std::string query;
    std::string metadata;
    std::string feedback;
    std::vector<ScoredMemory> memories;
};

/// "{memory_prompt}" slot contents; empty when there are no memories.
std::string format_memory_prompt(const std::vector<ScoredMemory>& memories);

/// Bulleted fact list for the "Relevant Facts:" slot, or "None".
std::string format_facts(const std::vector<ScoredMemory>& memories);

llm::ChatRequest planner_request(const PlannerInput& in, const std::string& model_id);

/// Reads list items (numbered, dashed or bulleted) after the first "Plan:".
Plan parse_plan(std::string_view output);

Plan make_plan(const PlannerInput& in, llm::ChatProvider& llm, const std::string& model_id);

/// Single-line rendering of a plan, as used in reflector prompts.
std::string format_plan(const Plan& plan);

// ---------------------------------------------------------------------------

struct CompiledStep {
    std::string step_text;
    std::string dsl_source;  // canonical rendering of the compiled statement
    dsl::Statement statement;
    dsl::BoundStatement bound;
    std::size_t rows_before = 0;
    std::size_t rows_after = 0;
    bool retried = false;
    std::vector<std::string> model_outputs;
};

class CompileError : public Error {
public:
    CompileError(std::string step_text, std::vector<std::string> outputs, std::vector<std::string> errors);

    [[nodiscard]] const std::string& step_text() const { return step_text_; }
    [[nodiscard]] const std::vector<std::string>& outputs() const { return outputs_; }
    [[nodiscard]] const std::vector<std::string>& errors() const { return errors_; }

private:
    std::string step_text_;
    std::vector<std::string> outputs_;
    std::vector<std::string> errors_;
};

llm::ChatRequest actor_request(std::string_view step_text, const CustomerTable& table,
                               const std::vector<ScoredMemory>& memories, const std::string& model_id);

/// Extracts exactly one statement from a model reply (code fences allowed).
dsl::Statement parse_actor_output(std::string_view output);

/// Prompts for one DSL statement, parses and binds it. On failure retries
/// once with the error appended; a second failure throws CompileError.
CompiledStep compile_step(std::string_view step_text, const CustomerTable& table,
                          const std::vector<ScoredMemory>& memories, llm::ChatProvider& llm,
                          const std::string& model_id);

struct ExecutionResult {
    CustomerTable audience;
    std::vector<CompiledStep> steps;
};

class ActError : public Error {
public:
    ActError(std::size_t step_index, const std::string& message);
    [[nodiscard]] std::size_t step_index() const { return step_index_; }

private:
    std::size_t step_index_;
};

/// Applies compiled steps in succession to the shrinking table and records
/// row counts. An empty step list is an error.
ExecutionResult execute_plan(const CustomerTable& pool, std::vector<CompiledStep> steps, Date today);

struct ActorContext {
    const CustomerTable& table;
    const MemoryStore* memory = nullptr;
    RetrievalConfig semantic;
    llm::ChatProvider& llm;
    std::string model_id;
    Date today;
};

/// Compiles every plan step (retrieving semantic memories per step), then
/// executes them. Compile failures surface as ActError naming the step.
ExecutionResult act(const Plan& plan, const ActorContext& ctx);

}  // namespace ramp
