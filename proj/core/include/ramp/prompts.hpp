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

#include <map>
#include <string>
#include <string_view>

// Prompt templates for every agent. Templates are text assets under
// core/prompts/ compiled into the library; slots are written {name}.
namespace ramp::prompts {

/// Bumped whenever a template's wording changes, so recorded transcripts can
/// be matched against the prompts that produced them.
inline constexpr std::string_view kVersion = "2";

std::string_view planner_system();
std::string_view planner_user();
std::string_view actor_system();
std::string_view actor_user();
std::string_view verifier_extract();
std::string_view verifier_compile();
std::string_view reflector_system();
std::string_view reflector_user();
std::string_view dsl_reference();

/// Substitutes {slot} occurrences in one pass; substituted text is never
/// rescanned. Unknown slots are left as-is.
std::string render(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& slots);

}  // namespace ramp::prompts
