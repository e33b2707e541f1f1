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
#include "ramp/benchmark_runner.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "ramp/mann_whitney.hpp"
#include "ramp/text.hpp"

namespace ramp {

using nlohmann::json;

json to_json(const BenchmarkCase& c) {
    return json{{"query_id", c.query_id},
                {"query", c.query},
                {"gold_ids", c.gold_ids},
                {"today", c.today.to_string()},
                {"tags", c.tags}};
}

BenchmarkCase benchmark_case_from_json(const json& j) {
    if (!j.is_object()) throw Error("benchmark case must be an object");
    BenchmarkCase c;
    try {
        c.query_id = j.at("query_id").get<std::string>();
        c.query = j.at("query").get<std::string>();
        c.gold_ids = j.at("gold_ids").get<std::vector<std::string>>();
        c.today = Date::parse_or_throw(j.at("today").get<std::string>());
        if (j.contains("tags")) c.tags = j.at("tags").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw Error(std::string("bad benchmark case: ") + e.what());
    }
    if (c.query_id.empty()) throw Error("benchmark case has an empty query_id");
    return c;
}

std::vector<BenchmarkCase> parse_benchmark_jsonl(std::string_view body) {
    std::vector<BenchmarkCase> out;
    std::size_t lineno = 0;
    for (const auto& line : text::split_lines(body)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(benchmark_case_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw Error("benchmark line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::vector<BenchmarkCase> load_benchmark(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open benchmark file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_benchmark_jsonl(ss.str());
}

std::string to_jsonl(const std::vector<BenchmarkCase>& cases) {
    std::string out;
    for (const auto& c : cases) {
        out += to_json(c).dump();
        out += '\n';
    }
    return out;
}

std::vector<double> MetricsReport::trial_accuracies() const {
    std::vector<double> v;
    for (const auto& t : trials) v.push_back(t.accuracy);
    return v;
}

MetricsReport run_benchmark(const std::vector<BenchmarkCase>& cases, const BenchmarkSetup& setup) {
    if (!setup.provider) throw ConfigError("run_benchmark needs a provider factory");
    if (setup.trials < 1) throw ConfigError("trials must be at least 1");
    if (setup.config.approval_mode != ApprovalMode::Auto) throw ConfigError("benchmarks run in auto mode");

    std::vector<const BenchmarkCase*> ordered;
    for (const auto& c : cases) ordered.push_back(&c);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const BenchmarkCase* a, const BenchmarkCase* b) { return a->query_id < b->query_id; });

    MetricsReport report;
    std::vector<double> acc, prec, rec;
    for (std::size_t trial = 0; trial < setup.trials; ++trial) {
        std::shared_ptr<MemoryStore> memory;
        if (setup.memory) memory = std::make_shared<MemoryStore>(*setup.memory);

        TrialMetrics tm;
        for (const auto* c : ordered) {
            CaseResult cr;
            cr.query_id = c->query_id;
            cr.trial = trial;
            try {
                auto cfg = setup.config;
                cfg.today = c->today;
                Session session(c->query_id, c->query, cfg, setup.table, memory, setup.provider(*c, trial));
                session.run_to_completion();
                const auto st = session.snapshot();
                cr.status = std::string(to_string(st.status));
                if (st.status == Status::Error) {
                    cr.note = st.error_phase + ": " + st.error_message;
                } else {
                    cr.score = score(st.audience_ids, c->gold_ids);
                    cr.predicted_size = st.audience_ids.size();
                }
            } catch (const std::exception& e) {
                cr.status = "error";
                cr.note = e.what();
                cr.score = CaseScore{};
            }
            if (!cr.note.empty()) spdlog::warn("case {} trial {}: {}", cr.query_id, trial, cr.note);
            tm.cases.push_back(std::move(cr));
        }
        double e = 0, p = 0, r = 0;
        for (const auto& cr : tm.cases) {
            e += cr.score.exact ? 1.0 : 0.0;
            p += cr.score.precision;
            r += cr.score.recall;
        }
        const double n = tm.cases.empty() ? 1.0 : static_cast<double>(tm.cases.size());
        tm.accuracy = e / n;
        tm.mean_precision = p / n;
        tm.mean_recall = r / n;
        acc.push_back(tm.accuracy);
        prec.push_back(tm.mean_precision);
        rec.push_back(tm.mean_recall);
        report.trials.push_back(std::move(tm));
    }
    report.accuracy = mean_stddev(acc);
    report.precision = mean_stddev(prec);
    report.recall = mean_stddev(rec);
    return report;
}

namespace {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

void write_case_csv_header(std::ostream& out) {
    out << "kind,arm,trial,query_id,exact,precision,recall,status,predicted_size,note\n";
}

void write_case_csv(std::ostream& out, std::string_view arm, const MetricsReport& report) {
    for (const auto& t : report.trials) {
        for (const auto& c : t.cases) {
            out << "case," << csv_field(arm) << ',' << c.trial << ',' << csv_field(c.query_id) << ','
                << (c.score.exact ? 1 : 0) << ',' << fmt::format("{:.6f}", c.score.precision) << ','
                << fmt::format("{:.6f}", c.score.recall) << ',' << c.status << ',' << c.predicted_size << ','
                << csv_field(c.note) << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, std::string_view arm, const MetricsReport& report) {
    const auto note = fmt::format("accuracy {}; precision {}; recall {}", format_mean_std(report.accuracy),
                                  format_mean_std(report.precision), format_mean_std(report.recall));
    out << "summary," << csv_field(arm) << ",,," << fmt::format("{:.6f}", report.accuracy.mean) << ','
        << fmt::format("{:.6f}", report.precision.mean) << ',' << fmt::format("{:.6f}", report.recall.mean) << ",,,"
        << csv_field(note) << '\n';
}

ProviderFactory scripted_provider_factory(std::filesystem::path transcript_dir, bool verify_digests) {
    return [dir = std::move(transcript_dir), verify_digests](const BenchmarkCase& c, std::size_t) {
        return std::make_shared<llm::ScriptedProvider>(llm::load_transcript(dir / (c.query_id + ".jsonl")),
                                                       verify_digests);
    };
}

// ---------------------------------------------------------------------------

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

AblationConfig parse_ablation_config(const json& j, const std::filesystem::path& base_dir) {
    AblationConfig cfg;
    try {
        cfg.table = resolve(base_dir, j.at("table").get<std::string>());
        cfg.schema = resolve(base_dir, j.at("schema").get<std::string>());
        cfg.cases = resolve(base_dir, j.at("cases").get<std::string>());
        if (j.contains("memory")) cfg.memory = resolve(base_dir, j.at("memory").get<std::string>());
        cfg.provider = j.value("provider", std::string("scripted"));
        cfg.trials = j.value("trials", std::size_t{3});
        cfg.baseline = j.value("baseline", std::string());
        for (const auto& a : j.at("arms")) {
            AblationArm arm;
            arm.name = a.at("name").get<std::string>();
            SessionConfig sc;
            sc.use_planner = a.value("planner", true);
            sc.n_semantic = a.value("n_semantic", std::size_t{2});
            sc.n_episodic = a.value("n_episodic", std::size_t{2});
            sc.verify = a.value("verify", true);
            sc.reflect = a.value("reflect", sc.verify);
            sc.self_learning = a.value("self_learning", false);
            sc.max_iterations = a.value("max_iterations", std::size_t{1});
            sc.include_self_learned = a.value("include_self_learned", true);
            sc.model_id = a.value("model_id", sc.model_id);
            arm.config = sc;
            if (a.contains("transcript_dir")) arm.transcript_dir = resolve(base_dir, a.at("transcript_dir").get<std::string>());
            cfg.arms.push_back(std::move(arm));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad ablation config: ") + e.what());
    }
    if (cfg.provider != "scripted" && cfg.provider != "live") throw ConfigError("provider must be scripted or live");
    if (cfg.arms.empty()) throw ConfigError("ablation config has no arms");
    if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
    if (!cfg.baseline.empty() && std::none_of(cfg.arms.begin(), cfg.arms.end(),
                                              [&](const AblationArm& a) { return a.name == cfg.baseline; })) {
        throw ConfigError("baseline arm not found: " + cfg.baseline);
    }
    for (const auto& a : cfg.arms) {
        if (cfg.provider == "scripted" && a.transcript_dir.empty()) {
            throw ConfigError("arm " + a.name + " needs transcript_dir for the scripted provider");
        }
    }
    return cfg;
}

AblationConfig load_ablation_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open ablation config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("ablation config is not JSON: ") + e.what());
    }
    return parse_ablation_config(j, path.parent_path());
}

std::vector<ArmResult> run_ablation(const AblationConfig& cfg, const ProviderFactory& live, std::ostream* case_csv) {
    const auto table = load_table(cfg.table, cfg.schema);
    const auto cases = load_benchmark(cfg.cases);
    std::optional<MemoryStore> memory;
    if (!cfg.memory.empty()) memory = MemoryStore::load(cfg.memory);

    std::vector<ArmResult> results;
    if (case_csv) write_case_csv_header(*case_csv);
    for (const auto& arm : cfg.arms) {
        spdlog::info("running arm {}", arm.name);
        BenchmarkSetup setup;
        setup.table = table;
        setup.memory = memory ? &*memory : nullptr;
        setup.config = arm.config;
        setup.config.today = cases.empty() ? Date{} : cases.front().today;
        setup.trials = cfg.trials;
        setup.provider = cfg.provider == "scripted" ? scripted_provider_factory(arm.transcript_dir) : live;
        ArmResult r{arm.name, run_benchmark(cases, setup), std::nullopt, std::nullopt};
        if (case_csv) write_case_csv(*case_csv, arm.name, r.report);
        results.push_back(std::move(r));
    }
    if (!cfg.baseline.empty()) {
        const auto base = std::find_if(results.begin(), results.end(),
                                       [&](const ArmResult& r) { return r.name == cfg.baseline; });
        const auto base_acc = base->report.trial_accuracies();
        for (auto& r : results) {
            if (r.name == cfg.baseline) continue;
            const auto acc = r.report.trial_accuracies();
            if (acc.size() > kMannWhitneyMaxSample) continue;
            const auto mw = mann_whitney_one_sided(acc, base_acc);
            r.mw_u = mw.u;
            r.mw_p = mw.p;
        }
    }
    if (case_csv) {
        for (const auto& r : results) write_summary_csv(*case_csv, r.name, r.report);
    }
    return results;
}

json to_json(const ArmResult& r) {
    auto ms = [](const MeanStd& v) { return json{{"mean", v.mean}, {"stddev", v.stddev}}; };
    json j{{"arm", r.name},
           {"accuracy", ms(r.report.accuracy)},
           {"precision", ms(r.report.precision)},
           {"recall", ms(r.report.recall)},
           {"trial_accuracy", r.report.trial_accuracies()}};
    if (r.mw_p) j["mann_whitney_vs_baseline"] = {{"u", *r.mw_u}, {"p", *r.mw_p}};
    return j;
}

}  // namespace ramp
