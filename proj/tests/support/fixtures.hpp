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

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ramp/date.hpp"
#include "ramp/llm_gateway.hpp"
#include "ramp/table.hpp"

namespace ramp::testing {

inline constexpr std::string_view kShopCsv =
    "customer_id,age,state,propensity_hotels,search_date,pages_visited,email_opt_in\n"
    "u1,34,MA,80,2025-06-01,Home;Hotels,true\n"
    "u2,45,NY,55,2025-03-15,Financial Services,false\n"
    "u3,29,MA,40,2025-06-25,Hotels;Deals,true\n"
    "u4,61,CA,90,2024-12-01,,true\n"
    "u5,38,MA,65,,Credit Cards;Financial Services,\n"
    "u6,50,TX,20,2025-05-20,Home,false\n"
    "u7,23,NY,75,2025-06-29,Hotels,true\n"
    "u8,70,MA,95,2025-01-10,Flights;Hotels,false\n";

inline constexpr std::string_view kShopSchema = R"({
  "id_column": "customer_id",
  "columns": [
    {"name": "customer_id", "type": "text"},
    {"name": "age", "type": "number", "description": "Age in years"},
    {"name": "state", "type": "text", "description": "Two-letter state code"},
    {"name": "propensity_hotels", "type": "number", "description": "Hotel booking score 0-100"},
    {"name": "search_date", "type": "date"},
    {"name": "pages_visited", "type": "text_list"},
    {"name": "email_opt_in", "type": "boolean"}
  ]
})";

inline Date shop_today() { return Date::from_ymd(2025, 6, 30); }
CustomerTable shop_table();

/// Builds replay entries with per-tag call indices in insertion order.
class Script {
public:
    Script& add(llm::AgentTag tag, std::string response);
    [[nodiscard]] const std::vector<llm::TranscriptEntry>& entries() const { return entries_; }
    [[nodiscard]] std::shared_ptr<llm::ScriptedProvider> provider() const;

private:
    std::vector<llm::TranscriptEntry> entries_;
};

}  // namespace ramp::testing
