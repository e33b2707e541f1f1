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
#include "ramp/reflector.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "ramp/prompts.hpp"
#include "ramp/text.hpp"

namespace ramp {

using nlohmann::json;

namespace {

enum class Section { None, Suggestions, Query, Insights };

std::string strip_heading_marks(std::string_view line) {
    auto s = std::string(text::trim(line));
    // leading markdown and enumeration: "## ", "**", "(1)", "1.", "1)"
    while (!s.empty() && (s.front() == '#' || s.front() == '*' || s.front() == '_')) s.erase(0, 1);
    s = std::string(text::trim(s));
    if (s.size() >= 3 && s.front() == '(' && std::isdigit(static_cast<unsigned char>(s[1])) && s[2] == ')') {
        s.erase(0, 3);
    } else if (s.size() >= 2 && std::isdigit(static_cast<unsigned char>(s[0])) && (s[1] == '.' || s[1] == ')')) {
        s.erase(0, 2);
    }
    s = std::string(text::trim(s));
    while (!s.empty() && (s.front() == '*' || s.front() == '_')) s.erase(0, 1);
    return s;
}

// Returns the section a heading line opens, and any text after its colon.
std::pair<Section, std::string> classify_heading(std::string_view line) {
    const auto s = strip_heading_marks(line);
    const auto lower = text::to_lower(s);
    static const std::pair<std::string_view, Section> kHeads[] = {
        {"suggested changes", Section::Suggestions},  {"suggestions", Section::Suggestions},
        {"suggested change", Section::Suggestions},   {"updated user query", Section::Query},
        {"updated query", Section::Query},            {"distilled insights", Section::Insights},
        {"insights", Section::Insights},
    };
    for (const auto& [head, sec] : kHeads) {
        if (!lower.starts_with(head)) continue;
        auto rest = std::string_view(s).substr(head.size());
        const auto colon = rest.find(':');
        if (colon != std::string_view::npos) {
            rest = rest.substr(colon + 1);
        } else {
            // heading words followed by more prose is not a heading
            auto tail = text::trim(rest);
            while (!tail.empty() && (tail.front() == '*' || tail.front() == '_')) tail.remove_prefix(1);
            if (!tail.empty() && !text::to_lower(tail).starts_with("to the plan")) return {Section::None, {}};
            rest = {};
        }
        auto inline_text = std::string(text::trim(rest));
        while (!inline_text.empty() && (inline_text.front() == '*' || inline_text.front() == '_')) {
            inline_text.erase(0, 1);
        }
        return {sec, std::string(text::trim(inline_text))};
    }
    return {Section::None, {}};
}

std::string unquote(std::string_view s) {
    auto t = text::trim(s);
    if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') && t.back() == t.front()) {
        t = t.substr(1, t.size() - 2);
    }
    return std::string(text::trim(t));
}

bool is_none(std::string_view s) {
    auto n = text::normalize_sentence(s);
    return n.empty() || n == "none" || n == "n/a" || n == "no changes" || n == "no suggestions";
}

std::vector<std::string> items_of(const std::vector<std::string>& lines) {
    std::vector<std::string> items;
    std::vector<std::string> plain;
    for (const auto& line : lines) {
        auto item = text::list_item_text(line);
        if (!item.empty()) {
            items.push_back(std::move(item));
        } else if (!text::trim(line).empty()) {
            plain.emplace_back(text::trim(line));
        }
    }
    if (items.empty()) items = std::move(plain);
    std::erase_if(items, is_none);
    return items;
}

}  // namespace

ParsedReflection parse_reflection(std::string_view output) {
    const auto body = text::strip_code_fence(output);
    std::unordered_map<int, std::vector<std::string>> sections;
    std::set<int> seen;
    Section current = Section::None;
    for (const auto& line : text::split_lines(body)) {
        auto [sec, inline_text] = classify_heading(line);
        if (sec != Section::None) {
            current = sec;
            seen.insert(static_cast<int>(sec));
            if (!inline_text.empty()) sections[static_cast<int>(sec)].push_back(inline_text);
            continue;
        }
        if (current != Section::None) sections[static_cast<int>(current)].push_back(line);
    }
    if (!seen.contains(static_cast<int>(Section::Suggestions)) && !seen.contains(static_cast<int>(Section::Query))) {
        throw ReflectionParseError("reflection has neither a suggestions nor an updated query section");
    }
    ParsedReflection out;
    out.suggestions = items_of(sections[static_cast<int>(Section::Suggestions)]);
    out.insights = items_of(sections[static_cast<int>(Section::Insights)]);
    if (seen.contains(static_cast<int>(Section::Query))) {
        std::string q;
        for (const auto& line : sections[static_cast<int>(Section::Query)]) {
            auto t = text::trim(line);
            if (t.empty()) continue;
            auto item = text::list_item_text(t);
            if (!q.empty()) q += ' ';
            q += item.empty() ? std::string(t) : item;
        }
        q = unquote(q);
        if (!q.empty()) out.updated_query = std::move(q);
    }
    return out;
}

std::vector<ScoredMemory> retrieve_solutions(const std::vector<VerificationRule>& failed_rules,
                                             const MemoryStore& store, const RetrievalConfig& cfg) {
    std::vector<ScoredMemory> merged;
    if (cfg.n == 0) return merged;
    std::unordered_map<std::string, std::size_t> pos;
    for (const auto& rule : failed_rules) {
        for (auto& hit : store.retrieve(MemoryKind::Episodic, rule.rule_text, cfg)) {
            auto it = pos.find(hit.item.id);
            if (it == pos.end()) {
                pos.emplace(hit.item.id, merged.size());
                merged.push_back(std::move(hit));
            } else if (hit.score > merged[it->second].score) {
                merged[it->second].score = hit.score;
            }
        }
    }
    std::stable_sort(merged.begin(), merged.end(),
                     [](const ScoredMemory& a, const ScoredMemory& b) { return a.score > b.score; });
    if (merged.size() > cfg.n) merged.resize(cfg.n);
    return merged;
}

std::string format_feedback(const std::vector<VerificationRule>& failed_rules,
                            const std::vector<ScoredMemory>& memories) {
    std::string out = "Failed test cases:";
    for (const auto& r : failed_rules) {
        out += "\n- " + r.rule_text + " (" + r.detail + ")";
    }
    out += "\n\nFacts:";
    if (memories.empty()) {
        out += " None";
    } else {
        for (const auto& m : memories) out += "\n- " + m.item.text;
    }
    return out;
}

llm::ChatRequest reflector_request(std::string_view query, const Plan& plan, std::string_view feedback,
                                   const std::string& model_id) {
    llm::ChatRequest req;
    req.agent_tag = llm::AgentTag::Reflector;
    req.model_id = model_id;
    req.system = std::string(prompts::reflector_system());
    req.user = prompts::render(prompts::reflector_user(), {{"user_query", std::string(query)},
                                                           {"plan", format_plan(plan)},
                                                           {"feedback", std::string(feedback)}});
    return req;
}

bool is_drop_only(const std::vector<std::string>& original_rules, const std::vector<std::string>& updated_rules) {
    std::set<std::string> orig;
    for (const auto& r : original_rules) orig.insert(text::normalize_sentence(r));
    return std::all_of(updated_rules.begin(), updated_rules.end(),
                       [&](const std::string& r) { return orig.contains(text::normalize_sentence(r)); });
}

namespace {

bool is_recommendation(std::string_view s) {
    auto t = text::trim(s);
    return t.starts_with("Consider") || t.starts_with("You may try");
}

}  // namespace

Reflection reflect(std::string_view query, const Plan& plan, const VerificationReport& report,
                   const std::vector<ScoredMemory>& memories, llm::ChatProvider& llm, const std::string& model_id,
                   const RuleExtractor& extract) {
    Reflection out;
    out.retrieved_memories = memories;
    const auto feedback = format_feedback(report.failed(), memories);
    out.raw_output = llm.complete(reflector_request(query, plan, feedback, model_id)).text;
    auto parsed = parse_reflection(out.raw_output);

    for (auto& s : parsed.suggestions) {
        if (is_recommendation(s)) {
            out.suggestions.push_back(std::move(s));
        } else {
            spdlog::warn("dropping suggestion not phrased as a recommendation: {}", s);
            out.dropped_suggestions.push_back(std::move(s));
        }
    }
    out.insights = std::move(parsed.insights);
    out.updated_query = std::string(query);

    if (!parsed.updated_query) return out;
    const auto& proposed = *parsed.updated_query;
    if (text::normalize_sentence(proposed) == text::normalize_sentence(query)) return out;

    try {
        if (is_drop_only(extract(query), extract(proposed))) {
            out.updated_query = proposed;
        } else {
            out.rejected_query = proposed;
            out.violation = "updated query adds criteria not in the original query";
        }
    } catch (const std::exception& e) {
        out.rejected_query = proposed;
        out.violation = std::string("could not check updated query: ") + e.what();
    }
    if (out.rejected_query) spdlog::warn("rejected updated query \"{}\": {}", proposed, out.violation);
    return out;
}

std::vector<std::string> record_insights(const Reflection& reflection, MemoryStore& store, bool enabled) {
    std::vector<std::string> ids;
    if (!enabled) return ids;
    for (const auto& insight : reflection.insights) {
        if (text::trim(insight).empty()) continue;
        ids.push_back(store.add(MemoryKind::Semantic, insight, MemorySource::SelfLearned));
    }
    return ids;
}

json to_json(const Reflection& r) {
    json mems = json::array();
    for (const auto& m : r.retrieved_memories) {
        mems.push_back({{"id", m.item.id}, {"text", m.item.text}, {"score", m.score}});
    }
    json j{{"suggestions", r.suggestions},
           {"updated_query", r.updated_query},
           {"insights", r.insights},
           {"retrieved_memories", std::move(mems)},
           {"dropped_suggestions", r.dropped_suggestions}};
    if (r.rejected_query) {
        j["rejected_query"] = *r.rejected_query;
        j["violation"] = r.violation;
    }
    return j;
}

}  // namespace ramp
