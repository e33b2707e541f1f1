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
#include "ramp/bm25.hpp"

#include <cmath>
#include <unordered_set>

namespace ramp {

Bm25Index::Bm25Index(std::vector<std::vector<std::string>> docs, Bm25Params params) : params_(params) {
    std::size_t total = 0;
    for (auto& doc : docs) {
        std::unordered_map<std::string, std::size_t> tf;
        for (auto& term : doc) ++tf[term];
        for (const auto& [term, _] : tf) ++df_[term];
        doc_len_.push_back(doc.size());
        total += doc.size();
        tf_.push_back(std::move(tf));
    }
    avgdl_ = docs.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(docs.size());
}

double Bm25Index::idf(const std::string& term) const {
    const double n = static_cast<double>(doc_len_.size());
    auto it = df_.find(term);
    const double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

std::vector<double> Bm25Index::scores(const std::vector<std::string>& query_terms) const {
    std::vector<double> out(doc_len_.size(), 0.0);
    if (avgdl_ <= 0.0) return out;
    std::unordered_set<std::string> seen;
    for (const auto& q : query_terms) {
        if (!seen.insert(q).second || !df_.contains(q)) continue;
        const double w = idf(q);
        for (std::size_t d = 0; d < tf_.size(); ++d) {
            auto it = tf_[d].find(q);
            if (it == tf_[d].end()) continue;
            const double tf = static_cast<double>(it->second);
            const double norm = params_.k1 * (1.0 - params_.b + params_.b * static_cast<double>(doc_len_[d]) / avgdl_);
            out[d] += w * tf * (params_.k1 + 1.0) / (tf + norm);
        }
    }
    return out;
}

}  // namespace ramp
