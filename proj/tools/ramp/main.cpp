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
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "gen_bench.hpp"
#include "ramp/benchmark_runner.hpp"
#include "ramp/llm_gateway.hpp"
#include "ramp/memory_store.hpp"
#include "ramp/metrics.hpp"
#include "ramp/orchestrator.hpp"
#include "ramp/service_api.hpp"
#include "ramp/synthetic.hpp"
#include "ramp/table.hpp"
#include "settings.hpp"

namespace {

using namespace ramp;
using nlohmann::json;

struct ProviderFlags {
    std::string provider;
    std::string transcript;
    std::string model;
    std::string endpoint;
    std::string record;
};

void add_provider_flags(CLI::App* cmd, ProviderFlags& f) {
    cmd->add_option("--provider", f.provider, "live or scripted (env RAMP_PROVIDER)");
    cmd->add_option("--transcript", f.transcript, "JSONL transcript replayed by the scripted provider");
    cmd->add_option("--model", f.model, "Model id (env RAMP_MODEL)");
    cmd->add_option("--endpoint", f.endpoint, "Chat completions URL (env RAMP_ENDPOINT)");
    cmd->add_option("--record", f.record, "Append every model exchange to this JSONL file");
}

std::function<std::shared_ptr<llm::ChatProvider>()> provider_factory(const cli::Settings& s, const ProviderFlags& f) {
    const auto kind = s.get(f.provider, "RAMP_PROVIDER", "provider", "live");
    const auto record = s.get(f.record, "RAMP_RECORD", "record");
    std::function<std::shared_ptr<llm::ChatProvider>()> base;
    if (kind == "scripted") {
        const auto path = s.get(f.transcript, "RAMP_TRANSCRIPT", "transcript");
        if (path.empty()) throw ConfigError("the scripted provider needs --transcript");
        auto entries = llm::load_transcript(path);
        base = [entries] { return std::make_shared<llm::ScriptedProvider>(entries); };
    } else if (kind == "live") {
        llm::LiveConfig cfg;
        cfg.model_id = s.get(f.model, "RAMP_MODEL", "model", cfg.model_id);
        cfg.endpoint_url = s.get(f.endpoint, "RAMP_ENDPOINT", "endpoint", cfg.endpoint_url);
        auto live = std::make_shared<llm::LiveProvider>(cfg);
        base = [live] { return live; };
    } else {
        throw ConfigError("provider must be live or scripted, got " + kind);
    }
    if (record.empty()) return base;
    return [base, record] { return std::make_shared<llm::RecordingProvider>(base(), std::filesystem::path(record)); };
}

CustomerTable load_table_settings(const cli::Settings& s, const std::string& table, const std::string& schema) {
    const auto t = s.get(table, "RAMP_TABLE", "table");
    const auto sc = s.get(schema, "RAMP_SCHEMA", "schema");
    if (t.empty() || sc.empty()) throw ConfigError("--table and --schema are required");
    return load_table(t, sc);
}

std::filesystem::path memory_file(const cli::Settings& s, const std::string& dir_flag) {
    const auto dir = s.get(dir_flag, "RAMP_MEMORY_DIR", "memory_dir");
    if (dir.empty()) return {};
    return std::filesystem::path(dir) / "memory.jsonl";
}

httplib::Server* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Audience selection with plan/act/verify/reflect agents"};
    app.require_subcommand(1);
    std::string config_file;
    std::string log_level = "info";
    app.add_option("--config", config_file, "JSON config file (lowest precedence)");
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error")->capture_default_str();

    std::string table, schema, memory_dir;
    ProviderFlags pflags;

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
    std::optional<long long> port, ttl;
    std::string host;
    serve->add_option("--table", table, "Customer CSV (env RAMP_TABLE)");
    serve->add_option("--schema", schema, "Schema sidecar JSON (env RAMP_SCHEMA)");
    serve->add_option("--memory-dir", memory_dir, "Directory for memory.jsonl (env RAMP_MEMORY_DIR)");
    serve->add_option("--port", port, "Listen port (env RAMP_PORT, default 8080)");
    serve->add_option("--host", host, "Bind address (default 127.0.0.1)");
    serve->add_option("--session-ttl", ttl, "Idle session lifetime in seconds (default 3600)");
    add_provider_flags(serve, pflags);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Validate a table and print its metadata summary");
    ingest->add_option("--table", table, "Customer CSV");
    ingest->add_option("--schema", schema, "Schema sidecar JSON");

    // run
    auto* run = app.add_subcommand("run", "Run one query to completion and print the audience and report");
    std::string query, today, out_csv;
    std::optional<long long> max_iter, n_sem, n_epi;
    bool self_learning = false;
    run->add_option("--table", table, "Customer CSV");
    run->add_option("--schema", schema, "Schema sidecar JSON");
    run->add_option("--memory-dir", memory_dir, "Directory for memory.jsonl");
    run->add_option("--query", query, "Audience request")->required();
    run->add_option("--today", today, "Date anchor YYYY-MM-DD (env RAMP_TODAY)");
    run->add_option("--max-iterations", max_iter, "Plan/act/verify cycles (default 1)");
    run->add_option("--n-semantic", n_sem, "Semantic memories per retrieval (default 2)");
    run->add_option("--n-episodic", n_epi, "Episodic memories per reflection (default 2)");
    run->add_flag("--self-learning", self_learning, "Write reflector insights back to memory");
    run->add_option("--out-csv", out_csv, "Write the audience as CSV");
    add_provider_flags(run, pflags);

    // bench
    auto* bench = app.add_subcommand("bench", "Run an ablation config");
    std::string ablation, results_csv;
    bench->add_option("ablation", ablation, "Ablation config JSON")->required();
    bench->add_option("--csv", results_csv, "Per-case results CSV");
    add_provider_flags(bench, pflags);

    // gen-bench
    auto* gen = app.add_subcommand("gen-bench", "Generate the synthetic table, benchmark and transcripts");
    std::string out_dir;
    std::uint64_t seed = 42;
    GenConfig gcfg;
    gen->add_option("--out", out_dir, "Output directory")->required();
    gen->add_option("--seed", seed, "Generator seed")->capture_default_str();
    gen->add_option("--rows", gcfg.rows, "Table rows")->capture_default_str();
    gen->add_option("--cases", gcfg.cases, "Filter cases")->capture_default_str();
    gen->add_option("--challenges", gcfg.challenge_cases, "Challenge cases")->capture_default_str();

    // memory
    auto* mem = app.add_subcommand("memory", "Manage the memory store");
    mem->require_subcommand(1);
    mem->add_option("--memory-dir", memory_dir, "Directory for memory.jsonl");
    std::string kind, text, source = "human", id;
    auto* mem_add = mem->add_subcommand("add", "Add a memory");
    mem_add->add_option("--kind", kind, "semantic or episodic")->required();
    mem_add->add_option("--text", text, "Memory text")->required();
    mem_add->add_option("--source", source, "human or self_learned")->capture_default_str();
    auto* mem_list = mem->add_subcommand("list", "List memories");
    mem_list->add_option("--kind", kind, "semantic or episodic");
    auto* mem_rm = mem->add_subcommand("rm", "Remove a memory");
    mem_rm->add_option("--id", id, "Memory id")->required();

    CLI11_PARSE(app, argc, argv);

    spdlog::set_default_logger(spdlog::stderr_color_mt("ramp"));
    spdlog::set_level(spdlog::level::from_str(log_level));

    try {
        const cli::Settings settings = config_file.empty() ? cli::Settings{} : cli::Settings{config_file};

        if (*serve) {
            ServiceOptions opts;
            const auto t = settings.get(table, "RAMP_TABLE", "table");
            if (!t.empty()) opts.table = load_table_settings(settings, table, schema);
            opts.memory_dir = settings.get(memory_dir, "RAMP_MEMORY_DIR", "memory_dir");
            opts.session_ttl = std::chrono::seconds(settings.get_int(ttl, "RAMP_SESSION_TTL", "session_ttl", 3600));
            opts.defaults.model_id = settings.get(pflags.model, "RAMP_MODEL", "model", opts.defaults.model_id);
            auto factory = provider_factory(settings, pflags);
            opts.provider = [factory](const std::string&) { return factory(); };
            ServiceApi api(std::move(opts));
            httplib::Server server;
            api.register_routes(server);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            const auto bind = settings.get(host, "RAMP_HOST", "host", "127.0.0.1");
            const auto p = static_cast<int>(settings.get_int(port, "RAMP_PORT", "port", 8080));
            spdlog::info("listening on {}:{}", bind, p);
            if (!server.listen(bind, p)) {
                spdlog::error("cannot listen on {}:{}", bind, p);
                return 1;
            }
            return 0;
        }

        if (*ingest) {
            const auto t = load_table_settings(settings, table, schema);
            std::cout << "rows: " << t.row_count() << "\ncolumns: " << t.column_count() << "\nid column: "
                      << t.id_column() << "\n\n"
                      << metadata_summary(t) << "\n";
            return 0;
        }

        if (*run) {
            const auto t = load_table_settings(settings, table, schema);
            SessionConfig cfg;
            cfg.max_iterations = static_cast<std::size_t>(settings.get_int(max_iter, "RAMP_MAX_ITERATIONS", "max_iterations", 1));
            cfg.n_semantic = static_cast<std::size_t>(settings.get_int(n_sem, "RAMP_N_SEMANTIC", "n_semantic", 2));
            cfg.n_episodic = static_cast<std::size_t>(settings.get_int(n_epi, "RAMP_N_EPISODIC", "n_episodic", 2));
            cfg.self_learning = self_learning;
            cfg.model_id = settings.get(pflags.model, "RAMP_MODEL", "model", cfg.model_id);
            const auto today_s = settings.get(today, "RAMP_TODAY", "today");
            if (today_s.empty()) throw ConfigError("--today is required");
            cfg.today = Date::parse_or_throw(today_s);

            const auto mem_path = memory_file(settings, memory_dir);
            auto store = std::make_shared<MemoryStore>(mem_path.empty() ? MemoryStore{} : MemoryStore::load(mem_path));
            const auto before = store->content_hash();
            Session session("cli", query, cfg, t, store, provider_factory(settings, pflags)());
            session.run_to_completion();
            if (!mem_path.empty() && store->content_hash() != before) store->persist(mem_path);

            const auto snap = session.snapshot();
            json out{{"status", std::string(to_string(snap.status))},
                     {"iterations", snap.iteration},
                     {"working_query", snap.working_query},
                     {"audience_size", snap.audience_ids.size()},
                     {"audience_ids", snap.audience_ids}};
            out["plan"] = snap.plan ? json(snap.plan->steps) : json(nullptr);
            out["report"] = snap.report ? to_json(*snap.report) : json(nullptr);
            if (snap.status == Status::Error) out["error"] = {{"phase", snap.error_phase}, {"message", snap.error_message}};
            std::cout << out.dump(2) << "\n";
            if (!out_csv.empty()) {
                std::ofstream csv(out_csv, std::ios::binary);
                csv << to_csv(session.audience());
            }
            return snap.status == Status::Error ? 2 : 0;
        }

        if (*bench) {
            const auto cfg = load_ablation_config(ablation);
            ProviderFactory live;
            if (cfg.provider == "live") {
                auto factory = provider_factory(settings, pflags);
                live = [factory](const BenchmarkCase&, std::size_t) { return factory(); };
            }
            std::ofstream csv;
            if (!results_csv.empty()) {
                csv.open(results_csv, std::ios::binary);
                if (!csv) throw ConfigError("cannot write " + results_csv);
            }
            const auto results = run_ablation(cfg, live, results_csv.empty() ? nullptr : &csv);
            for (const auto& r : results) {
                std::cout << fmt::format("{:<16} accuracy {}  precision {}  recall {}", r.name,
                                         format_mean_std(r.report.accuracy), format_mean_std(r.report.precision),
                                         format_mean_std(r.report.recall));
                if (r.mw_p) std::cout << fmt::format("  p={:.3f} vs {}", *r.mw_p, cfg.baseline);
                std::cout << "\n";
            }
            return 0;
        }

        if (*gen) {
            cli::write_benchmark_bundle(out_dir, gcfg, seed);
            return 0;
        }

        if (*mem) {
            const auto path = memory_file(settings, memory_dir);
            if (path.empty()) throw ConfigError("--memory-dir is required");
            auto store = MemoryStore::load(path);
            if (*mem_add) {
                const auto k = parse_memory_kind(kind);
                const auto src = parse_memory_source(source);
                if (!k) throw ConfigError("--kind must be semantic or episodic");
                if (!src) throw ConfigError("--source must be human or self_learned");
                std::filesystem::create_directories(path.parent_path());
                std::cout << store.add(*k, text, *src) << "\n";
                store.persist(path);
            } else if (*mem_list) {
                std::optional<MemoryKind> k;
                if (!kind.empty()) {
                    k = parse_memory_kind(kind);
                    if (!k) throw ConfigError("--kind must be semantic or episodic");
                }
                for (const auto& m : store.all()) {
                    if (k && m.kind != *k) continue;
                    std::cout << m.id << '\t' << to_string(m.kind) << '\t' << to_string(m.source) << '\t' << m.text
                              << "\n";
                }
            } else if (*mem_rm) {
                store.remove(id);
                store.persist(path);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
