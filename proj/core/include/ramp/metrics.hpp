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

#include <string>
#include <vector>

namespace ramp {

struct CaseScore {
    bool exact = false;
    double precision = 0.0;
    double recall = 0.0;
};

/// Set comparison of predicted and gold ids. Both empty scores 1/1/1; an
/// empty prediction against a non-empty gold set scores 0/0/0.
CaseScore score(const std::vector<std::string>& pred, const std::vector<std::string>& gold);

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;  // sample (n-1); zero for a single value
};

MeanStd mean_stddev(const std::vector<double>& values);

/// "0.870 ± 0.021"
std::string format_mean_std(const MeanStd& v, int decimals = 3);

}  // namespace ramp
