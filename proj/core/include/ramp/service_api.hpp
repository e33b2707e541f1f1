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

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "ramp/llm_gateway.hpp"
#include "ramp/memory_store.hpp"
#include "ramp/orchestrator.hpp"
#include "ramp/table.hpp"

namespace httplib {
class Server;
}

namespace ramp {

/// Error body carried by every non-2xx response.
struct ApiError {
    int http_status = 400;
    std::string code;
    std::string message;
};

nlohmann::json to_json(const ApiError& e);

struct ServiceOptions {
    std::optional<CustomerTable> table;
    /// memory.jsonl lives here; empty keeps memory in process only.
    std::filesystem::path memory_dir;
    std::chrono::seconds session_ttl{3600};
    SessionConfig defaults;
    /// One provider per session.
    std::function<std::shared_ptr<llm::ChatProvider>(const std::string& session_id)> provider;
    Session::Clock clock = utc_now_iso8601;
    std::function<std::chrono::steady_clock::time_point()> now = [] { return std::chrono::steady_clock::now(); };
};

/// JSON-over-HTTP façade over sessions and the memory store.
///
///   POST   /sessions                       {query, config} -> 201 {session_id}
///   GET    /sessions/{id}                  full state snapshot
///   GET    /sessions/{id}/transcript       ?after_seq=N -> {events}
///   POST   /sessions/{id}/step             one phase transition
///   POST   /sessions/{id}/decision         {decision, text?}
///   GET    /sessions/{id}/audience         ?limit=K -> {total, ids, rows}
///   GET    /sessions/{id}/audience.csv
///   GET    /memory/{kind}
///   POST   /memory/{kind}                  {text, source?} -> 201 {id}
///   DELETE /memory/{kind}/{id}
///   GET    /health
class ServiceApi {
public:
    explicit ServiceApi(ServiceOptions options);

    void register_routes(httplib::Server& server);

    /// Drops sessions idle for longer than the TTL; returns how many.
    std::size_t sweep();
    [[nodiscard]] std::size_t session_count() const;
    [[nodiscard]] std::shared_ptr<MemoryStore> memory() const { return memory_; }

private:
    struct Entry {
        std::shared_ptr<Session> session;
        std::chrono::steady_clock::time_point last_access;
    };

    std::shared_ptr<Session> find_session(const std::string& id);
    std::string create_session(const nlohmann::json& body);
    void persist_memory();

    ServiceOptions opts_;
    std::shared_ptr<MemoryStore> memory_;
    std::filesystem::path memory_path_;
    mutable std::mutex mu_;
    std::mutex persist_mu_;
    std::map<std::string, Entry> sessions_;
    std::uint64_t next_session_ = 1;
};

/// Table cell as JSON: numbers, booleans, ISO dates, string arrays or null.
nlohmann::json cell_to_json(const CellValue& v);

}  // namespace ramp
