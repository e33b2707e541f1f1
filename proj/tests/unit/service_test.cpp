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
#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "ramp/service_api.hpp"
#include "ramp/text.hpp"

namespace ramp {
namespace {

using llm::AgentTag;
using nlohmann::json;

testing::Script walkthrough_script() {
    testing::Script s;
    s.add(AgentTag::Planner, "Plan:\n1. Keep users who live in MA")
        .add(AgentTag::Actor, "state = \"MA\"")
        .add(AgentTag::VerifierExtract, "1. The number of users is at least 5.\n2. Users live in MA.")
        .add(AgentTag::VerifierCompile, "row_count >= 5")
        .add(AgentTag::VerifierCompile, "all_rows(state = \"MA\")")
        .add(AgentTag::Reflector,
             "Suggested changes to the plan:\n- Consider dropping the state filter.\n\n"
             "Updated user query: Find users. Assume today is 2025-06-30.\n\nDistilled insights:\n- None")
        .add(AgentTag::VerifierExtract, "1. Assume today is 2025-06-30.")
        .add(AgentTag::Planner, "Plan:\n1. Keep users aged 18 or more")
        .add(AgentTag::Actor, "age >= 18");
    return s;
}

class ServiceTest : public ::testing::Test {
protected:
    void start(ServiceOptions opts) {
        api_ = std::make_unique<ServiceApi>(std::move(opts));
        api_->register_routes(server_);
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    }
    static ServiceOptions options(bool with_table = true) {
        ServiceOptions o;
        if (with_table) o.table = testing::shop_table();
        o.defaults.today = testing::shop_today();
        o.clock = [] { return std::string("2025-06-30T12:00:00Z"); };
        const auto script = walkthrough_script();
        o.provider = [script](const std::string&) { return script.provider(); };
        return o;
    }
    void TearDown() override {
        if (thread_.joinable()) {
            server_.stop();
            thread_.join();
        }
    }
    json post(const std::string& path, const json& body, int expect) {
        auto r = client_->Post(path, body.dump(), "application/json");
        EXPECT_TRUE(r) << path;
        if (!r) return {};
        EXPECT_EQ(r->status, expect) << path << ": " << r->body;
        return r->body.empty() ? json() : json::parse(r->body);
    }
    json get(const std::string& path, int expect) {
        auto r = client_->Get(path);
        EXPECT_TRUE(r) << path;
        if (!r) return {};
        EXPECT_EQ(r->status, expect) << path << ": " << r->body;
        return json::parse(r->body);
    }

    httplib::Server server_;
    std::unique_ptr<ServiceApi> api_;
    std::unique_ptr<httplib::Client> client_;
    std::thread thread_;
    int port_ = 0;
};

TEST_F(ServiceTest, InteractiveWalkthrough) {
    start(options());
    EXPECT_EQ(get("/health", 200)["status"], "ok");
    const auto created = post("/sessions",
                              {{"query", "Find 5 users in MA. Assume today is 2025-06-30."},
                               {"config", {{"approval_mode", "interactive"}, {"max_iterations", 2}}}},
                              201);
    const std::string id = created["session_id"];
    EXPECT_EQ(id, "s000001");
    const std::string base = "/sessions/" + id;

    auto err = post(base + "/decision", {{"decision", "proceed"}}, 409);
    EXPECT_EQ(err["code"], "wrong_phase");

    EXPECT_EQ(post(base + "/step", json::object(), 200)["phase"], "acting");
    EXPECT_EQ(post(base + "/step", json::object(), 200)["phase"], "verifying");
    auto st = post(base + "/step", json::object(), 200);
    EXPECT_EQ(st["phase"], "awaiting_decision");
    EXPECT_EQ(st["report"]["all_passed"], false);
    EXPECT_EQ(post(base + "/step", json::object(), 409)["code"], "wrong_phase");

    auto aud = get(base + "/audience?limit=2", 200);
    EXPECT_EQ(aud["total"], 4);
    EXPECT_EQ(aud["ids"], json({"u1", "u3", "u5", "u8"}));
    ASSERT_EQ(aud["rows"].size(), 2u);
    EXPECT_EQ(aud["rows"][0]["age"], 34.0);
    EXPECT_EQ(aud["rows"][0]["pages_visited"], json({"Home", "Hotels"}));
    EXPECT_EQ(aud["rows"][0]["search_date"], "2025-06-01");

    const auto events = get(base + "/transcript", 200)["events"];
    const auto last = events.back()["seq"].get<std::uint64_t>();
    EXPECT_TRUE(get(base + "/transcript?after_seq=" + std::to_string(last), 200)["events"].empty());
    EXPECT_EQ(get(base + "/transcript?after_seq=1", 200)["events"].size(), events.size() - 1);

    post(base + "/decision", {{"decision", "sometimes"}}, 400);
    EXPECT_EQ(post(base + "/decision", {{"decision", "proceed"}}, 200)["phase"], "reflecting");
    st = post(base + "/step", json::object(), 200);
    EXPECT_EQ(st["phase"], "planning");
    EXPECT_EQ(st["working_query"], "Find users. Assume today is 2025-06-30.");
    post(base + "/step", json::object(), 200);
    post(base + "/step", json::object(), 200);
    st = post(base + "/step", json::object(), 200);
    EXPECT_EQ(st["status"], "success");
    EXPECT_EQ(st["phase"], "done");

    auto csv = client_->Get(base + "/audience.csv");
    ASSERT_TRUE(csv);
    EXPECT_EQ(csv->status, 200);
    EXPECT_EQ(csv->get_header_value("Content-Type"), "text/csv");
    EXPECT_EQ(std::count(csv->body.begin(), csv->body.end(), '\n'), 9);
    EXPECT_EQ(csv->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST_F(ServiceTest, ErrorsAreJson) {
    start(options());
    EXPECT_EQ(get("/sessions/s999", 404)["code"], "unknown_session");
    EXPECT_EQ(post("/sessions", {{"q", "x"}}, 400)["code"], "malformed_body");
    EXPECT_EQ(post("/sessions", {{"query", "x"}, {"config", {{"loops", 1}}}}, 400)["code"], "invalid_config");
    auto r = client_->Post("/sessions", "{not json", "application/json");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 400);
    EXPECT_EQ(get("/memory/procedural", 404)["code"], "unknown_kind");
}

TEST_F(ServiceTest, NoTableIs503) {
    start(options(false));
    EXPECT_EQ(get("/health", 200)["table_loaded"], false);
    EXPECT_EQ(post("/sessions", {{"query", "x"}}, 503)["code"], "table_not_loaded");
}

TEST_F(ServiceTest, MemoryCrudPersists) {
    const auto dir = std::filesystem::temp_directory_path() / "ramp_service_memory";
    std::filesystem::remove_all(dir);
    auto opts = options();
    opts.memory_dir = dir;
    start(opts);
    const std::string id = post("/memory/semantic", {{"text", "State is a postal code."}}, 201)["id"];
    post("/memory/episodic", {{"text", "Issue: x. Solution: y."}, {"source", "self_learned"}}, 201);
    post("/memory/semantic", {{"text", "x"}, {"source", "robot"}}, 400);
    const auto items = get("/memory/semantic", 200)["items"];
    ASSERT_EQ(items.size(), 1u);
    EXPECT_EQ(items[0]["text"], "State is a postal code.");
    EXPECT_EQ(MemoryStore::load(dir / "memory.jsonl").size(), 2u);

    auto del = client_->Delete("/memory/episodic/" + id);
    ASSERT_TRUE(del);
    EXPECT_EQ(del->status, 404);
    del = client_->Delete("/memory/semantic/" + id);
    ASSERT_TRUE(del);
    EXPECT_EQ(del->status, 204);
    EXPECT_TRUE(get("/memory/semantic", 200)["items"].empty());
    EXPECT_EQ(MemoryStore::load(dir / "memory.jsonl").size(), 1u);
    std::filesystem::remove_all(dir);
}

TEST(ServiceApiUnit, SweepDropsIdleSessions) {
    auto now = std::chrono::steady_clock::time_point{};
    ServiceOptions o;
    o.table = testing::shop_table();
    o.defaults.today = testing::shop_today();
    o.session_ttl = std::chrono::seconds(10);
    o.now = [&now] { return now; };
    const auto script = walkthrough_script();
    o.provider = [script](const std::string&) { return script.provider(); };
    ServiceApi api(o);
    httplib::Server server;
    api.register_routes(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    httplib::Client c("127.0.0.1", port);
    ASSERT_TRUE(c.Post("/sessions", R"({"query": "Find users in MA."})", "application/json"));
    EXPECT_EQ(api.session_count(), 1u);
    now += std::chrono::seconds(5);
    EXPECT_EQ(api.sweep(), 0u);
    now += std::chrono::seconds(11);
    EXPECT_EQ(api.sweep(), 1u);
    EXPECT_EQ(api.session_count(), 0u);
    server.stop();
    t.join();
}

TEST(ServiceApiUnit, CellJson) {
    EXPECT_TRUE(cell_to_json(CellValue{}).is_null());
    EXPECT_EQ(cell_to_json(CellValue{2.5}), 2.5);
    EXPECT_EQ(cell_to_json(CellValue{true}), true);
    EXPECT_EQ(cell_to_json(CellValue{Date::from_ymd(2025, 1, 2)}), "2025-01-02");
    EXPECT_EQ(cell_to_json(CellValue{TextList{"a", "b"}}), json({"a", "b"}));
}

}  // namespace
}  // namespace ramp
