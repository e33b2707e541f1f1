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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ramp/date.hpp"
#include "ramp/error.hpp"
#include "ramp/llm_gateway.hpp"
#include "ramp/memory_store.hpp"
#include "ramp/metrics.hpp"
#include "ramp/orchestrator.hpp"
#include "ramp/table.hpp"

namespace ramp {

struct BenchmarkCase {
    std::string query_id;
    std::string query;
    std::vector<std::string> gold_ids;
    Date today;
    std::vector<std::string> tags;
};

nlohmann::json to_json(const BenchmarkCase& c);
BenchmarkCase benchmark_case_from_json(const nlohmann::json& j);
/// One case per non-blank line; errors name the line.
std::vector<BenchmarkCase> parse_benchmark_jsonl(std::string_view text);
std::vector<BenchmarkCase> load_benchmark(const std::filesystem::path& path);
std::string to_jsonl(const std::vector<BenchmarkCase>& cases);

struct CaseResult {
    std::string query_id;
    std::size_t trial = 0;
    CaseScore score;
    std::string status;
    std::size_t predicted_size = 0;
    std::string note;  // error text for failed runs
};

struct TrialMetrics {
    double accuracy = 0.0;
    double mean_precision = 0.0;
    double mean_recall = 0.0;
    std::vector<CaseResult> cases;  // ordered by query_id
};

struct MetricsReport {
    std::vector<TrialMetrics> trials;
    MeanStd accuracy;
    MeanStd precision;
    MeanStd recall;

    [[nodiscard]] std::vector<double> trial_accuracies() const;
};

/// Builds a fresh provider for one (case, trial) session.
using ProviderFactory = std::function<std::shared_ptr<llm::ChatProvider>(const BenchmarkCase&, std::size_t trial)>;

struct BenchmarkSetup {
    CustomerTable table;
    /// Copied once per trial; sessions in a trial share the copy so that
    /// self-learned insights carry over between cases. Null: no memory.
    const MemoryStore* memory = nullptr;
    SessionConfig config;  // today is taken from each case
    ProviderFactory provider;
    std::size_t trials = 3;
};

/// Runs every case as an independent auto-mode session per trial. A case
/// that ends in error scores 0 with the error kept as a note.
MetricsReport run_benchmark(const std::vector<BenchmarkCase>& cases, const BenchmarkSetup& setup);

/// Per-case rows: kind,arm,trial,query_id,exact,precision,recall,status,predicted_size,note
void write_case_csv_header(std::ostream& out);
void write_case_csv(std::ostream& out, std::string_view arm, const MetricsReport& report);
void write_summary_csv(std::ostream& out, std::string_view arm, const MetricsReport& report);

/// Provider that replays <dir>/<query_id>.jsonl.
ProviderFactory scripted_provider_factory(std::filesystem::path transcript_dir, bool verify_digests = false);

// ---------------------------------------------------------------------------
// Ablation configs

struct AblationArm {
    std::string name;
    SessionConfig config;
    std::filesystem::path transcript_dir;  // scripted provider only
};

struct AblationConfig {
    std::filesystem::path table;
    std::filesystem::path schema;
    std::filesystem::path cases;
    std::filesystem::path memory;  // optional
    std::string provider = "scripted";
    std::size_t trials = 3;
    std::string baseline;
    std::vector<AblationArm> arms;
};

/// Relative paths resolve against `base_dir`.
AblationConfig parse_ablation_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
AblationConfig load_ablation_config(const std::filesystem::path& path);

struct ArmResult {
    std::string name;
    MetricsReport report;
    std::optional<double> mw_u;  // accuracy vs baseline, one-sided
    std::optional<double> mw_p;
};

/// Runs every arm; `live` builds the provider for non-scripted configs.
std::vector<ArmResult> run_ablation(const AblationConfig& cfg, const ProviderFactory& live,
                                    std::ostream* case_csv = nullptr);

nlohmann::json to_json(const ArmResult& r);

}  // namespace ramp
