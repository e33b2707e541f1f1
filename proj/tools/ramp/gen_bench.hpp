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

#include <cstdint>
#include <filesystem>

#include "ramp/synthetic.hpp"

namespace ramp::cli {

/// Writes a self-contained benchmark bundle:
///   customers.csv, schema.json, memory.jsonl,
///   benchmark.jsonl, challenge.jsonl,
///   transcripts/{reference,no_memory,no_planner,challenge}/<query_id>.jsonl,
///   ablation.json, challenge_ablation.json
void write_benchmark_bundle(const std::filesystem::path& dir, const GenConfig& config, std::uint64_t seed);

}  // namespace ramp::cli
