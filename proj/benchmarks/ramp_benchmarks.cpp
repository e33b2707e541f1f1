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
#include <benchmark/benchmark.h>

#include <vector>

#include "ramp/filter_dsl.hpp"
#include "ramp/mann_whitney.hpp"
#include "ramp/memory_store.hpp"
#include "ramp/synthetic.hpp"

namespace {

const ramp::SyntheticData& data() {
    static const auto d = ramp::generate_synthetic(ramp::GenConfig{}, 42);
    return d;
}

void BM_ParseFilter(benchmark::State& state) {
    const std::string src =
        R"(propensity_hotels >= 50 and search_date within_last 120 days and (state in ["MA", "NY"] or not has_app = true))";
    for (auto _ : state) benchmark::DoNotOptimize(ramp::dsl::parse_filter(src));
}
BENCHMARK(BM_ParseFilter);

void BM_ApplyFilter(benchmark::State& state) {
    const auto& d = data();
    const auto bound = ramp::dsl::bind(
        ramp::dsl::parse_filter(R"(propensity_hotels >= 50 and search_date within_last 120 days and state = "MA")"),
        d.table);
    for (auto _ : state) benchmark::DoNotOptimize(ramp::dsl::apply_filter(d.table, bound, d.today));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.table.row_count()));
}
BENCHMARK(BM_ApplyFilter);

void BM_ApplyLimit(benchmark::State& state) {
    const auto& d = data();
    const auto bound = ramp::dsl::bind(ramp::dsl::parse_limit("limit 300 by propensity_hotels desc"), d.table);
    for (auto _ : state) benchmark::DoNotOptimize(ramp::dsl::apply_limit(d.table, bound));
}
BENCHMARK(BM_ApplyLimit);

void BM_MemoryRetrieve(benchmark::State& state) {
    ramp::MemoryStore store;
    for (int i = 0; i < state.range(0); ++i) {
        store.add(ramp::MemoryKind::Semantic, "customers in region " + std::to_string(i % 50) +
                                                  " prefer hotels near the coast and book flights in summer " +
                                                  std::to_string(i));
    }
    ramp::RetrievalConfig cfg;
    cfg.n = 6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(store.retrieve(ramp::MemoryKind::Semantic, "hotels near the coast region 7", cfg));
    }
}
BENCHMARK(BM_MemoryRetrieve)->Arg(100)->Arg(1000);

void BM_MannWhitney(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> a, b;
    for (std::size_t i = 0; i < n; ++i) {
        a.push_back(static_cast<double>(i % 4) + 0.5);
        b.push_back(static_cast<double>(i % 3));
    }
    for (auto _ : state) benchmark::DoNotOptimize(ramp::mann_whitney_one_sided(a, b));
}
BENCHMARK(BM_MannWhitney)->Arg(3)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
