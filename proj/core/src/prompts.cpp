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
#include "ramp/prompts.hpp"

namespace ramp::prompts {

namespace assets {
extern const std::string_view planner_system;
extern const std::string_view planner_user;
extern const std::string_view actor_system;
extern const std::string_view actor_user;
extern const std::string_view verifier_extract;
extern const std::string_view verifier_compile;
extern const std::string_view reflector_system;
extern const std::string_view reflector_user;
extern const std::string_view dsl_reference;
}  // namespace assets

std::string_view planner_system() { return assets::planner_system; }
std::string_view planner_user() { return assets::planner_user; }
std::string_view actor_system() { return assets::actor_system; }
std::string_view actor_user() { return assets::actor_user; }
std::string_view verifier_extract() { return assets::verifier_extract; }
std::string_view verifier_compile() { return assets::verifier_compile; }
std::string_view reflector_system() { return assets::reflector_system; }
std::string_view reflector_user() { return assets::reflector_user; }
std::string_view dsl_reference() { return assets::dsl_reference; }

std::string render(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& slots) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            const auto close = tmpl.find('}', i + 1);
            if (close != std::string_view::npos) {
                auto it = slots.find(tmpl.substr(i + 1, close - i - 1));
                if (it != slots.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out.push_back(tmpl[i++]);
    }
    return out;
}

}  // namespace ramp::prompts
