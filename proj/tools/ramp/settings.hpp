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

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

namespace ramp::cli {

/// Resolves options with precedence: command-line flag, then RAMP_* env var,
/// then the JSON config file, then the built-in default.
class Settings {
public:
    Settings() = default;
    explicit Settings(const std::filesystem::path& config_file);

    [[nodiscard]] std::string get(const std::string& flag_value, const char* env, const char* key,
                                  const std::string& fallback = {}) const;
    [[nodiscard]] long long get_int(const std::optional<long long>& flag_value, const char* env, const char* key,
                                    long long fallback) const;

private:
    nlohmann::json file_ = nlohmann::json::object();
};

}  // namespace ramp::cli
