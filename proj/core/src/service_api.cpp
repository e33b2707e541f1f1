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
#include "ramp/service_api.hpp"

#include <charconv>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <fmt/format.h>

namespace ramp {

using nlohmann::json;

json to_json(const ApiError& e) {
    return json{{"code", e.code}, {"message", e.message}, {"http_status", e.http_status}};
}

json cell_to_json(const CellValue& v) {
    return std::visit(
        [](const auto& x) -> json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, Date>) {
                return x.to_string();
            } else {
                return x;
            }
        },
        v);
}

namespace {

struct HttpError : std::exception {
    ApiError error;
    HttpError(int status, std::string code, std::string message) : error{status, std::move(code), std::move(message)} {}
    [[nodiscard]] const char* what() const noexcept override { return error.message.c_str(); }
};

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const ApiError& e) { send_json(res, e.http_status, to_json(e)); }

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        auto j = json::parse(req.body);
        if (!j.is_object()) throw HttpError(400, "malformed_body", "request body must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        throw HttpError(400, "malformed_body", std::string("request body is not JSON: ") + e.what());
    }
}

std::size_t parse_count(const httplib::Request& req, const char* name, std::size_t fallback) {
    if (!req.has_param(name)) return fallback;
    const auto s = req.get_param_value(name);
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw HttpError(400, "bad_parameter", std::string(name) + " must be a non-negative integer");
    }
    return v;
}

MemoryKind kind_param(const std::string& s) {
    auto k = parse_memory_kind(s);
    if (!k) throw HttpError(404, "unknown_kind", "memory kind must be semantic or episodic");
    return *k;
}

json memory_json(const MemoryItem& m) {
    return json{{"id", m.id},
                {"kind", std::string(to_string(m.kind))},
                {"text", m.text},
                {"source", std::string(to_string(m.source))},
                {"created_at", m.created_at}};
}

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

Handler guarded(Handler fn) {
    return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const HttpError& e) {
            send_error(res, e.error);
        } catch (const PhaseError& e) {
            send_error(res, {409, "wrong_phase", e.what()});
        } catch (const ConfigError& e) {
            send_error(res, {400, "invalid_config", e.what()});
        } catch (const MemoryError& e) {
            send_error(res, {400, "invalid_memory", e.what()});
        } catch (const std::exception& e) {
            spdlog::error("{} {} failed: {}", req.method, req.path, e.what());
            send_error(res, {500, "internal", e.what()});
        }
    };
}

}  // namespace

ServiceApi::ServiceApi(ServiceOptions options) : opts_(std::move(options)) {
    if (!opts_.provider) throw ConfigError("service needs a provider factory");
    if (!opts_.memory_dir.empty()) {
        std::filesystem::create_directories(opts_.memory_dir);
        memory_path_ = opts_.memory_dir / "memory.jsonl";
        memory_ = std::make_shared<MemoryStore>(MemoryStore::load(memory_path_));
    } else {
        memory_ = std::make_shared<MemoryStore>();
    }
}

void ServiceApi::persist_memory() {
    if (memory_path_.empty()) return;
    std::lock_guard lk(persist_mu_);
    memory_->persist(memory_path_);
}

std::size_t ServiceApi::sweep() {
    const auto now = opts_.now();
    std::lock_guard lk(mu_);
    return std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second.last_access > opts_.session_ttl; });
}

std::size_t ServiceApi::session_count() const {
    std::lock_guard lk(mu_);
    return sessions_.size();
}

std::shared_ptr<Session> ServiceApi::find_session(const std::string& id) {
    sweep();
    std::lock_guard lk(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw HttpError(404, "unknown_session", "no session " + id);
    it->second.last_access = opts_.now();
    return it->second.session;
}

std::string ServiceApi::create_session(const json& body) {
    if (!opts_.table) throw HttpError(503, "table_not_loaded", "no customer table is loaded");
    if (!body.contains("query") || !body["query"].is_string()) {
        throw HttpError(400, "malformed_body", "query must be a string");
    }
    auto cfg = session_config_from_json(body.value("config", json(nullptr)), opts_.defaults);
    cfg.validate();
    sweep();
    std::string id;
    {
        std::lock_guard lk(mu_);
        id = fmt::format("s{:06d}", next_session_++);
    }
    auto session = std::make_shared<Session>(id, body["query"].get<std::string>(), cfg, *opts_.table, memory_,
                                             opts_.provider(id), opts_.clock);
    std::lock_guard lk(mu_);
    sessions_.emplace(id, Entry{std::move(session), opts_.now()});
    return id;
}

void ServiceApi::register_routes(httplib::Server& server) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/health", guarded([this](const httplib::Request&, httplib::Response& res) {
                   send_json(res, 200, {{"status", "ok"}, {"table_loaded", opts_.table.has_value()}});
               }));

    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
                    send_json(res, 201, {{"session_id", create_session(parse_body(req))}});
                }));

    server.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, to_json(find_session(req.matches[1])->snapshot()));
               }));

    server.Get(R"(/sessions/([^/]+)/transcript)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                   auto session = find_session(req.matches[1]);
                   const auto after = parse_count(req, "after_seq", 0);
                   json events = json::array();
                   for (const auto& e : session->transcript_after(after)) events.push_back(to_json(e));
                   send_json(res, 200, {{"events", std::move(events)}});
               }));

    server.Post(R"(/sessions/([^/]+)/step)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                    auto session = find_session(req.matches[1]);
                    session->step();
                    const auto snap = session->snapshot();
                    if (snap.config.self_learning) persist_memory();
                    send_json(res, 200, to_json(snap));
                }));

    server.Post(R"(/sessions/([^/]+)/decision)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                    auto session = find_session(req.matches[1]);
                    const auto body = parse_body(req);
                    if (!body.contains("decision") || !body["decision"].is_string()) {
                        throw HttpError(400, "malformed_body", "decision must be proceed, stop or amend");
                    }
                    auto kind = parse_decision_kind(body["decision"].get<std::string>());
                    if (!kind) throw HttpError(400, "malformed_body", "decision must be proceed, stop or amend");
                    Decision d{*kind, {}};
                    if (*kind == DecisionKind::Amend) {
                        if (!body.contains("text") || !body["text"].is_string()) {
                            throw HttpError(400, "malformed_body", "amend needs a text field");
                        }
                        d.text = body["text"].get<std::string>();
                    }
                    session->submit_decision(d);
                    send_json(res, 200, to_json(session->snapshot()));
                }));

    server.Get(R"(/sessions/([^/]+)/audience)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                   auto session = find_session(req.matches[1]);
                   const auto limit = parse_count(req, "limit", 50);
                   const auto audience = session->audience();
                   json rows = json::array();
                   const auto& schema = audience.schema();
                   for (std::size_t r = 0; r < audience.row_count() && r < limit; ++r) {
                       json row = json::object();
                       for (std::size_t c = 0; c < schema.size(); ++c) {
                           row[schema[c].name] = cell_to_json(audience.cell(c, r));
                       }
                       rows.push_back(std::move(row));
                   }
                   send_json(res, 200, {{"total", audience.row_count()}, {"ids", audience.ids()}, {"rows", rows}});
               }));

    server.Get(R"(/sessions/([^/]+)/audience\.csv)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                   auto session = find_session(req.matches[1]);
                   res.status = 200;
                   res.set_header("Content-Disposition",
                                  "attachment; filename=\"audience-" + std::string(req.matches[1]) + ".csv\"");
                   res.set_content(to_csv(session->audience()), "text/csv");
               }));

    server.Get(R"(/memory/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                   const auto kind = kind_param(req.matches[1]);
                   json items = json::array();
                   for (const auto& m : memory_->list(kind)) items.push_back(memory_json(m));
                   send_json(res, 200, {{"items", std::move(items)}});
               }));

    server.Post(R"(/memory/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                    const auto kind = kind_param(req.matches[1]);
                    const auto body = parse_body(req);
                    if (!body.contains("text") || !body["text"].is_string()) {
                        throw HttpError(400, "malformed_body", "text must be a string");
                    }
                    auto source = MemorySource::Human;
                    if (body.contains("source")) {
                        if (!body["source"].is_string()) throw HttpError(400, "malformed_body", "source must be a string");
                        auto s = parse_memory_source(body["source"].get<std::string>());
                        if (!s) throw HttpError(400, "malformed_body", "source must be human or self_learned");
                        source = *s;
                    }
                    const auto id = memory_->add(kind, body["text"].get<std::string>(), source);
                    persist_memory();
                    send_json(res, 201, {{"id", id}});
                }));

    server.Delete(R"(/memory/([^/]+)/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                      const auto kind = kind_param(req.matches[1]);
                      const std::string id = req.matches[2];
                      auto item = memory_->find(id);
                      if (!item || item->kind != kind) throw HttpError(404, "unknown_memory", "no " + std::string(to_string(kind)) + " memory " + id);
                      memory_->remove(id);
                      persist_memory();
                      res.status = 204;
                  }));
}

}  // namespace ramp
