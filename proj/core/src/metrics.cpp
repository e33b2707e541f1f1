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
#include "ramp/metrics.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

namespace ramp {

CaseScore score(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
    const std::unordered_set<std::string> p(pred.begin(), pred.end());
    const std::unordered_set<std::string> g(gold.begin(), gold.end());
    std::size_t hit = 0;
    for (const auto& id : p) hit += g.contains(id) ? 1 : 0;

    CaseScore s;
    s.exact = hit == p.size() && hit == g.size();
    if (p.empty() && g.empty()) {
        s.precision = s.recall = 1.0;
        return s;
    }
    s.precision = p.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(p.size());
    s.recall = g.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(g.size());
    return s;
}

MeanStd mean_stddev(const std::vector<double>& values) {
    MeanStd r;
    if (values.empty()) return r;
    const double n = static_cast<double>(values.size());
    r.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - r.mean) * (v - r.mean);
        r.stddev = std::sqrt(ss / (n - 1.0));
    }
    return r;
}

std::string format_mean_std(const MeanStd& v, int decimals) {
    return fmt::format("{:.{}f} ± {:.{}f}", v.mean, decimals, v.stddev, decimals);
}

}  // namespace ramp
