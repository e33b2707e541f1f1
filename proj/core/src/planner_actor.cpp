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
#include "ramp/planner_actor.hpp"

#include <spdlog/spdlog.h>

#include "ramp/prompts.hpp"
#include "ramp/text.hpp"

namespace ramp {

std::string format_memory_prompt(const std::vector<ScoredMemory>& memories) {
    if (memories.empty()) return {};
    std::string out = "Facts from memory:";
    for (const auto& m : memories) out += "\n- " + m.item.text;
    return out;
}

std::string format_facts(const std::vector<ScoredMemory>& memories) {
    if (memories.empty()) return "None";
    std::string out;
    for (const auto& m : memories) out += "\n- " + m.item.text;
    return out;
}

llm::ChatRequest planner_request(const PlannerInput& in, const std::string& model_id) {
    llm::ChatRequest req;
    req.agent_tag = llm::AgentTag::Planner;
    req.model_id = model_id;
    req.system = std::string(prompts::planner_system());
    req.user = prompts::render(prompts::planner_user(), {{"user_query", in.query},
                                                         {"metadata", in.metadata},
                                                         {"critiquer_feedback", in.feedback},
                                                         {"memory_prompt", format_memory_prompt(in.memories)}});
    return req;
}

Plan parse_plan(std::string_view output) {
    const auto pos = output.find("Plan:");
    if (pos == std::string_view::npos) {
        throw PlanParseError("planner output has no \"Plan:\" section");
    }
    Plan plan;
    plan.raw_output = std::string(output);
    for (const auto& line : text::split_lines(output.substr(pos + 5))) {
        auto item = text::list_item_text(line);
        if (!item.empty()) plan.steps.push_back(std::move(item));
    }
    if (plan.steps.empty()) throw PlanParseError("planner output lists no steps after \"Plan:\"");
    return plan;
}

Plan make_plan(const PlannerInput& in, llm::ChatProvider& llm, const std::string& model_id) {
    return parse_plan(llm.complete(planner_request(in, model_id)).text);
}

std::string format_plan(const Plan& plan) {
    std::string out;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        out += "\n" + std::to_string(i + 1) + ". " + plan.steps[i];
    }
    return out;
}

// ---------------------------------------------------------------------------

CompileError::CompileError(std::string step_text, std::vector<std::string> outputs, std::vector<std::string> errors)
    : Error("could not compile step '" + step_text + "': " + (errors.empty() ? std::string("no output") : errors.back())),
      step_text_(std::move(step_text)),
      outputs_(std::move(outputs)),
      errors_(std::move(errors)) {}

llm::ChatRequest actor_request(std::string_view step_text, const CustomerTable& table,
                               const std::vector<ScoredMemory>& memories, const std::string& model_id) {
    llm::ChatRequest req;
    req.agent_tag = llm::AgentTag::Actor;
    req.model_id = model_id;
    req.system = std::string(prompts::actor_system());
    req.user = prompts::render(prompts::actor_user(), {{"metadata", metadata_summary(table)},
                                                       {"memory", format_facts(memories)},
                                                       {"dsl_reference", std::string(prompts::dsl_reference())},
                                                       {"step", std::string(step_text)}});
    return req;
}

dsl::Statement parse_actor_output(std::string_view output) {
    const auto body = text::strip_code_fence(output);
    std::vector<std::string> lines;
    for (auto& l : text::split_lines(body)) {
        if (!text::trim(l).empty()) lines.emplace_back(text::trim(l));
    }
    if (lines.empty()) throw dsl::ParseError("empty input", 0);
    if (lines.size() > 1) {
        throw dsl::ParseError("expected exactly one expression, got " + std::to_string(lines.size()) + " lines", 0);
    }
    return dsl::parse_statement(lines.front());
}

CompiledStep compile_step(std::string_view step_text, const CustomerTable& table,
                          const std::vector<ScoredMemory>& memories, llm::ChatProvider& llm,
                          const std::string& model_id) {
    auto req = actor_request(step_text, table, memories, model_id);
    std::vector<std::string> outputs;
    std::vector<std::string> errors;
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (attempt == 1) {
            req.user += "\n\nYour previous output was:\n" + outputs.back() + "\nIt failed with: " + errors.back() +
                        "\nReturn a corrected expression.";
        }
        outputs.push_back(llm.complete(req).text);
        try {
            auto stmt = parse_actor_output(outputs.back());
            auto bound = dsl::bind(stmt, table);
            CompiledStep step;
            step.step_text = std::string(step_text);
            step.dsl_source = dsl::to_string(stmt);
            step.statement = std::move(stmt);
            step.bound = std::move(bound);
            step.retried = attempt > 0;
            step.model_outputs = outputs;
            return step;
        } catch (const dsl::ParseError& e) {
            errors.emplace_back(e.what());
        } catch (const dsl::BindError& e) {
            errors.emplace_back(e.what());
        }
        spdlog::debug("actor output rejected: {}", errors.back());
    }
    throw CompileError(std::string(step_text), std::move(outputs), std::move(errors));
}

ActError::ActError(std::size_t step_index, const std::string& message)
    : Error("step " + std::to_string(step_index + 1) + ": " + message), step_index_(step_index) {}

ExecutionResult execute_plan(const CustomerTable& pool, std::vector<CompiledStep> steps, Date today) {
    if (steps.empty()) throw ActError(0, "plan has no steps; refusing to return the full pool");
    CustomerTable current = pool;
    for (auto& step : steps) {
        step.rows_before = current.row_count();
        current = dsl::apply_statement(current, step.bound, today);
        step.rows_after = current.row_count();
    }
    return {std::move(current), std::move(steps)};
}

ExecutionResult act(const Plan& plan, const ActorContext& ctx) {
    if (plan.steps.empty()) throw ActError(0, "plan has no steps; refusing to return the full pool");
    std::vector<CompiledStep> compiled;
    compiled.reserve(plan.steps.size());
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        std::vector<ScoredMemory> facts;
        if (ctx.memory != nullptr) facts = ctx.memory->retrieve(MemoryKind::Semantic, plan.steps[i], ctx.semantic);
        try {
            compiled.push_back(compile_step(plan.steps[i], ctx.table, facts, ctx.llm, ctx.model_id));
        } catch (const CompileError& e) {
            throw ActError(i, e.what());
        }
    }
    return execute_plan(ctx.table.pool(), std::move(compiled), ctx.today);
}

}  // namespace ramp
