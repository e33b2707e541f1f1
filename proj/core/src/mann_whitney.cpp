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
#include "ramp/mann_whitney.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace ramp {

MannWhitneyResult mann_whitney_one_sided(std::span<const double> a, std::span<const double> b) {
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    if (na < 1 || nb < 1 || na > kMannWhitneyMaxSample || nb > kMannWhitneyMaxSample) {
        throw Error("mann_whitney: sample sizes must be in [1, " + std::to_string(kMannWhitneyMaxSample) + "], got " +
                    std::to_string(na) + " and " + std::to_string(nb));
    }
    const std::size_t n = na + nb;
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    for (double v : pooled) {
        if (!std::isfinite(v)) throw Error("mann_whitney: values must be finite");
    }

    // Twice the midrank of every pooled value, kept integral.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });
    std::vector<std::int64_t> rank2(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        const auto r2 = static_cast<std::int64_t>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = r2;
        i = j + 1;
    }

    std::int64_t observed = 0;
    for (std::size_t i = 0; i < na; ++i) observed += rank2[i];

    // Walk every na-subset of n positions (n <= 24) as a bitmask.
    std::uint64_t extreme = 0;
    std::uint64_t total = 0;
    const std::uint32_t limit = 1u << n;
    for (std::uint32_t mask = (1u << na) - 1; mask < limit;) {
        std::int64_t sum = 0;
        for (std::uint32_t m = mask; m != 0; m &= m - 1) sum += rank2[static_cast<std::size_t>(std::countr_zero(m))];
        ++total;
        if (sum >= observed) ++extreme;
        const std::uint32_t c = mask & -mask;
        const std::uint32_t r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }

    const double base = static_cast<double>(na) * static_cast<double>(na + 1);
    MannWhitneyResult res;
    res.u = (static_cast<double>(observed) - base) / 2.0;
    res.p = static_cast<double>(extreme) / static_cast<double>(total);
    return res;
}

}  // namespace ramp
