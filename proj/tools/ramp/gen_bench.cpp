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
#include "gen_bench.hpp"

#include <fstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

namespace ramp::cli {

namespace {

void write_file(const std::filesystem::path& path, std::string_view body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << body;
    if (!out) throw Error("write failed for " + path.string());
}

nlohmann::json arm(const char* name, bool planner, int n_semantic, int n_episodic, int max_iterations,
                   const char* transcripts) {
    return {{"name", name},
            {"planner", planner},
            {"n_semantic", n_semantic},
            {"n_episodic", n_episodic},
            {"verify", true},
            {"reflect", true},
            {"self_learning", false},
            {"max_iterations", max_iterations},
            {"transcript_dir", std::string("transcripts/") + transcripts}};
}

}  // namespace

void write_benchmark_bundle(const std::filesystem::path& dir, const GenConfig& config, std::uint64_t seed) {
    const auto data = generate_synthetic(config, seed);
    std::filesystem::create_directories(dir);
    write_file(dir / "customers.csv", to_csv(data.table));
    write_file(dir / "schema.json", schema_to_json(data.table));
    write_file(dir / "memory.jsonl", data.memory.to_jsonl());
    write_file(dir / "benchmark.jsonl", to_jsonl(benchmark_cases(data.cases)));
    write_file(dir / "challenge.jsonl", to_jsonl(benchmark_cases(data.challenges)));

    const std::pair<const char*, ScriptStyle> styles[] = {
        {"reference", ScriptStyle::Reference},
        {"no_memory", ScriptStyle::NoMemory},
        {"no_planner", ScriptStyle::NoPlanner},
    };
    for (const auto& [name, style] : styles) {
        const auto sub = dir / "transcripts" / name;
        std::filesystem::create_directories(sub);
        for (const auto& c : data.cases) {
            write_file(sub / (c.bench.query_id + ".jsonl"), llm::to_jsonl(scripted_transcript(c, style)));
        }
    }
    const auto chal = dir / "transcripts" / "challenge";
    std::filesystem::create_directories(chal);
    for (const auto& c : data.challenges) {
        write_file(chal / (c.bench.query_id + ".jsonl"), llm::to_jsonl(challenge_transcript(c)));
    }

    nlohmann::json ablation{{"table", "customers.csv"},
                            {"schema", "schema.json"},
                            {"cases", "benchmark.jsonl"},
                            {"memory", "memory.jsonl"},
                            {"provider", "scripted"},
                            {"trials", 3},
                            {"baseline", "no_memory"},
                            {"arms",
                             {arm("with_memory", true, 2, 2, 1, "reference"),
                              arm("no_memory", true, 0, 0, 1, "no_memory"),
                              arm("no_planner", false, 2, 2, 1, "no_planner")}}};
    write_file(dir / "ablation.json", ablation.dump(2) + "\n");

    nlohmann::json challenge{{"table", "customers.csv"},
                             {"schema", "schema.json"},
                             {"cases", "challenge.jsonl"},
                             {"memory", "memory.jsonl"},
                             {"provider", "scripted"},
                             {"trials", 3},
                             {"baseline", "loops_1"},
                             {"arms",
                              {arm("loops_1", true, 2, 2, 1, "challenge"), arm("loops_2", true, 2, 2, 2, "challenge"),
                               arm("loops_3", true, 2, 2, 3, "challenge")}}};
    write_file(dir / "challenge_ablation.json", challenge.dump(2) + "\n");

    spdlog::info("wrote {} rows, {} cases and {} challenge cases to {}", data.table.row_count(), data.cases.size(),
                 data.challenges.size(), dir.string());
}

}  // namespace ramp::cli
