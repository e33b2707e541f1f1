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
#include <span>

#include "ramp/error.hpp"

namespace ramp {

struct MannWhitneyResult {
    double u = 0.0;  // U of sample a, midranks for ties
    double p = 1.0;  // exact P(U >= u) under random relabeling
};

inline constexpr std::size_t kMannWhitneyMaxSample = 12;

/// One-sided exact test for the alternative "a tends to be larger than b".
/// The null distribution is enumerated over every assignment of the pooled
/// values to a group of size |a|, so ties are handled exactly.
/// Requires 1 <= |a|, |b| <= 12 and finite values.
MannWhitneyResult mann_whitney_one_sided(std::span<const double> a, std::span<const double> b);

}  // namespace ramp
