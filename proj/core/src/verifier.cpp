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
#include "ramp/verifier.hpp"

#include "ramp/planner_actor.hpp"
#include "ramp/prompts.hpp"
#include "ramp/text.hpp"

namespace ramp {

using nlohmann::json;

llm::ChatRequest extract_rules_request(std::string_view query, const std::string& model_id) {
    llm::ChatRequest req;
    req.agent_tag = llm::AgentTag::VerifierExtract;
    req.model_id = model_id;
    req.user = prompts::render(prompts::verifier_extract(), {{"user_prompt", std::string(query)}});
    return req;
}

namespace {

bool is_none_marker(std::string_view s) {
    auto n = text::normalize_sentence(s);
    return n.empty() || n == "none" || n == "n/a" || n == "[]" || n == "no verifiable statements" ||
           n == "there are no verifiable statements";
}

std::string unquote(std::string s) {
    auto t = std::string(text::trim(s));
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
    return std::string(text::trim(t));
}

}  // namespace

std::vector<std::string> parse_rules(std::string_view output) {
    const auto body = text::strip_code_fence(output);
    std::vector<std::string> rules;
    if (text::trim(body).starts_with("[")) {
        json j;
        try {
            j = json::parse(body);
        } catch (const json::parse_error& e) {
            throw RuleParseError(std::string("rule list looks like JSON but does not parse: ") + e.what());
        }
        if (!j.is_array()) throw RuleParseError("rule list JSON must be an array");
        for (const auto& v : j) {
            if (!v.is_string()) throw RuleParseError("rule list JSON must contain strings");
            rules.push_back(unquote(v.get<std::string>()));
        }
    } else {
        std::vector<std::string> plain;
        for (const auto& line : text::split_lines(body)) {
            auto item = text::list_item_text(line);
            if (!item.empty()) {
                rules.push_back(unquote(std::move(item)));
            } else if (!text::trim(line).empty()) {
                plain.emplace_back(text::trim(line));
            }
        }
        if (rules.empty()) {
            for (auto& p : plain) {
                if (is_none_marker(p) || text::normalize_sentence(p).ends_with("verifiable statements are:") ||
                    p.back() == ':') {
                    continue;
                }
                rules.push_back(unquote(std::move(p)));
            }
        }
    }
    std::erase_if(rules, [](const std::string& r) { return is_none_marker(r) || text::icontains(r, "assume today"); });
    return rules;
}

std::vector<std::string> extract_rules(std::string_view query, llm::ChatProvider& llm, const std::string& model_id) {
    return parse_rules(llm.complete(extract_rules_request(query, model_id)).text);
}

llm::ChatRequest compile_rule_request(std::string_view rule_text, const CustomerTable& table,
                                      const std::vector<ScoredMemory>& memories, const std::string& model_id) {
    llm::ChatRequest req;
    req.agent_tag = llm::AgentTag::VerifierCompile;
    req.model_id = model_id;
    req.user = prompts::render(prompts::verifier_compile(), {{"metadata", metadata_summary(table)},
                                                             {"memory", format_facts(memories)},
                                                             {"dsl_reference", std::string(prompts::dsl_reference())},
                                                             {"rule", std::string(rule_text)}});
    return req;
}

dsl::Predicate parse_predicate_output(std::string_view output) {
    const auto body = text::strip_code_fence(output);
    std::vector<std::string> lines;
    for (auto& l : text::split_lines(body)) {
        if (!text::trim(l).empty()) lines.emplace_back(text::trim(l));
    }
    if (lines.empty()) throw dsl::ParseError("empty input", 0);
    if (lines.size() > 1) {
        throw dsl::ParseError("expected exactly one check, got " + std::to_string(lines.size()) + " lines", 0);
    }
    return dsl::parse_predicate(lines.front());
}

CompiledRule compile_rule(std::string_view rule_text, const CustomerTable& table,
                          const std::vector<ScoredMemory>& memories, llm::ChatProvider& llm,
                          const std::string& model_id) {
    CompiledRule out;
    out.rule_text = std::string(rule_text);
    auto req = compile_rule_request(rule_text, table, memories, model_id);
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (attempt == 1) {
            req.user += "\n\nYour previous output was:\n" + out.model_outputs.back() + "\nIt failed with: " +
                        out.error + "\nReturn a corrected check.";
        }
        out.model_outputs.push_back(llm.complete(req).text);
        try {
            auto pred = parse_predicate_output(out.model_outputs.back());
            out.predicate = dsl::bind(pred, table);
            out.predicate_source = dsl::to_string(pred);
            out.error.clear();
            return out;
        } catch (const dsl::ParseError& e) {
            out.error = e.what();
        } catch (const dsl::BindError& e) {
            out.error = e.what();
        }
    }
    return out;
}

std::string_view to_string(RuleResult r) {
    switch (r) {
        case RuleResult::Pass: return "pass";
        case RuleResult::Fail: return "fail";
        case RuleResult::NotCompiled: return "not_compiled";
    }
    return "not_compiled";
}

std::vector<VerificationRule> VerificationReport::failed() const {
    std::vector<VerificationRule> out;
    for (const auto& r : rules) {
        if (r.result != RuleResult::Pass) out.push_back(r);
    }
    return out;
}

VerificationReport verify(const CustomerTable& audience, const std::vector<CompiledRule>& rules, Date today) {
    VerificationReport report;
    report.audience_size = audience.row_count();
    for (const auto& rule : rules) {
        VerificationRule vr;
        vr.rule_text = rule.rule_text;
        vr.predicate_source = rule.predicate_source;
        if (!rule.predicate) {
            vr.result = RuleResult::NotCompiled;
            vr.detail = "not compiled: " + (rule.error.empty() ? std::string("no predicate") : rule.error);
        } else {
            auto res = dsl::eval_predicate(audience, *rule.predicate, today);
            vr.result = res.passed ? RuleResult::Pass : RuleResult::Fail;
            vr.detail = std::move(res.detail);
        }
        if (vr.result != RuleResult::Pass) report.all_passed = false;
        report.rules.push_back(std::move(vr));
    }
    return report;
}

json to_json(const VerificationRule& r) {
    return json{{"rule_text", r.rule_text},
                {"predicate", r.predicate_source},
                {"result", std::string(to_string(r.result))},
                {"detail", r.detail}};
}

json to_json(const VerificationReport& r) {
    json rules = json::array();
    for (const auto& rule : r.rules) rules.push_back(to_json(rule));
    return json{{"rules", std::move(rules)}, {"all_passed", r.all_passed}, {"audience_size", r.audience_size}};
}

}  // namespace ramp
