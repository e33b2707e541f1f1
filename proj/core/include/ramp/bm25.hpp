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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ramp {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

/// Okapi BM25 over a small in-memory corpus of pre-tokenized documents.
///
///   score(D, Q) = sum over distinct q in Q of
///       idf(q) * tf(q, D) * (k1 + 1) / (tf(q, D) + k1 * (1 - b + b * |D| / avgdl))
///   idf(q) = ln(1 + (N - df(q) + 0.5) / (df(q) + 0.5))
///
/// The "+1" inside the log keeps idf positive, so a document's score is zero
/// exactly when it shares no term with the query.
class Bm25Index {
public:
    explicit Bm25Index(std::vector<std::vector<std::string>> docs, Bm25Params params = {});

    [[nodiscard]] std::size_t size() const { return doc_len_.size(); }
    [[nodiscard]] double avg_doc_len() const { return avgdl_; }
    [[nodiscard]] double idf(const std::string& term) const;
    [[nodiscard]] std::vector<double> scores(const std::vector<std::string>& query_terms) const;

private:
    Bm25Params params_;
    std::vector<std::unordered_map<std::string, std::size_t>> tf_;
    std::vector<std::size_t> doc_len_;
    std::unordered_map<std::string, std::size_t> df_;
    double avgdl_ = 0.0;
};

}  // namespace ramp
