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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ramp {

/// Calendar date without time of day, stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, unsigned month, unsigned day);

    /// Strict ISO-8601 "YYYY-MM-DD". Returns nullopt on any malformed or
    /// out-of-range input (e.g. 2025-02-30).
    static std::optional<Date> parse(std::string_view text);

    /// Like parse(), but throws std::invalid_argument.
    static Date parse_or_throw(std::string_view text);

    [[nodiscard]] constexpr std::int32_t days_since_epoch() const { return days_; }
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] constexpr Date minus_days(std::int64_t n) const {
        return Date(static_cast<std::int32_t>(days_ - n));
    }
    [[nodiscard]] constexpr Date plus_days(std::int64_t n) const {
        return Date(static_cast<std::int32_t>(days_ + n));
    }

    friend constexpr auto operator<=>(Date, Date) = default;

private:
    std::int32_t days_ = 0;
};

}  // namespace ramp
