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
#include "fixtures.hpp"

#include <map>

namespace ramp::testing {

CustomerTable shop_table() { return load_table_from_text(kShopCsv, parse_schema_sidecar(kShopSchema)); }

Script& Script::add(llm::AgentTag tag, std::string response) {
    std::size_t index = 0;
    for (const auto& e : entries_) index += e.agent_tag == tag ? 1 : 0;
    entries_.push_back({tag, index, {}, std::move(response)});
    return *this;
}

std::shared_ptr<llm::ScriptedProvider> Script::provider() const {
    return std::make_shared<llm::ScriptedProvider>(entries_);
}

}  // namespace ramp::testing
