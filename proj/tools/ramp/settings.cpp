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
#include "settings.hpp"

#include <cstdlib>
#include <fstream>

#include "ramp/error.hpp"

namespace ramp::cli {

Settings::Settings(const std::filesystem::path& config_file) {
    std::ifstream in(config_file);
    if (!in) throw ConfigError("cannot open config file " + config_file.string());
    try {
        file_ = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file is not JSON: " + std::string(e.what()));
    }
    if (!file_.is_object()) throw ConfigError("config file must hold a JSON object");
}

std::string Settings::get(const std::string& flag_value, const char* env, const char* key,
                          const std::string& fallback) const {
    if (!flag_value.empty()) return flag_value;
    if (const char* v = std::getenv(env); v && *v) return v;
    if (auto it = file_.find(key); it != file_.end()) {
        if (it->is_string()) return it->get<std::string>();
        return it->dump();
    }
    return fallback;
}

long long Settings::get_int(const std::optional<long long>& flag_value, const char* env, const char* key,
                            long long fallback) const {
    if (flag_value) return *flag_value;
    if (const char* v = std::getenv(env); v && *v) {
        char* end = nullptr;
        const long long n = std::strtoll(v, &end, 10);
        if (end == v || *end != '\0') throw ConfigError(std::string(env) + " must be an integer");
        return n;
    }
    if (auto it = file_.find(key); it != file_.end()) {
        if (!it->is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
        return it->get<long long>();
    }
    return fallback;
}

}  // namespace ramp::cli
