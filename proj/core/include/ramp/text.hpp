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

#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared across modules.
namespace ramp::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool istarts_with(std::string_view s, std::string_view prefix);
bool icontains(std::string_view haystack, std::string_view needle);

/// Splits on a single-character delimiter; keeps empty fields.
std::vector<std::string> split(std::string_view s, char delim);
std::vector<std::string> split_lines(std::string_view s);

/// Lowercases and splits on every non-alphanumeric byte, dropping empties.
std::vector<std::string> tokenize(std::string_view s);

/// Collapses whitespace runs, lowercases and strips trailing punctuation.
std::string normalize_sentence(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Returns the text of a list item ("1. x", "2) x", "- x", "* x", "• x")
/// or an empty string if the line is not a list item.
std::string list_item_text(std::string_view line);

/// Removes a surrounding ``` fence (with optional language tag) if present.
std::string strip_code_fence(std::string_view s);

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

/// Shortest round-trip decimal rendering of a finite double.
std::string format_number(double v);

}  // namespace ramp::text
