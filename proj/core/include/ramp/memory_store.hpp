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
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "ramp/error.hpp"

namespace ramp {

enum class MemoryKind { Semantic, Episodic };
enum class MemorySource { Human, SelfLearned };

std::string_view to_string(MemoryKind k);
std::string_view to_string(MemorySource s);
std::optional<MemoryKind> parse_memory_kind(std::string_view s);
std::optional<MemorySource> parse_memory_source(std::string_view s);

/// Semantic items are planner facts; episodic items are issue -> solution
/// sentences used by the reflector.
struct MemoryItem {
    std::string id;
    MemoryKind kind = MemoryKind::Semantic;
    std::string text;
    MemorySource source = MemorySource::Human;
    std::string created_at;

    friend bool operator==(const MemoryItem&, const MemoryItem&) = default;
};

struct RetrievalConfig {
    double k1 = 1.2;
    double b = 0.75;
    std::size_t n = 0;
    bool include_self_learned = true;
};

struct ScoredMemory {
    MemoryItem item;
    double score = 0.0;
};

class MemoryError : public Error {
public:
    using Error::Error;
};

/// Line-numbered JSONL decode failure.
class MemoryFormatError : public MemoryError {
public:
    MemoryFormatError(std::size_t line, const std::string& message);
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Single-writer, multi-reader store of semantic and episodic memories.
class MemoryStore {
public:
    using Clock = std::function<std::string()>;

    MemoryStore();
    explicit MemoryStore(Clock clock);
    MemoryStore(const MemoryStore& other);
    MemoryStore& operator=(const MemoryStore& other);

    /// Assigns an id when item.id is empty and created_at when unset.
    std::string add(MemoryItem item);
    std::string add(MemoryKind kind, std::string text, MemorySource source = MemorySource::Human);
    void remove(std::string_view id);

    [[nodiscard]] std::vector<MemoryItem> list(MemoryKind kind) const;
    [[nodiscard]] std::vector<MemoryItem> all() const;
    [[nodiscard]] std::optional<MemoryItem> find(std::string_view id) const;
    [[nodiscard]] std::size_t size() const;

    /// Top-n items of `kind` by BM25 against query_text, over that kind's
    /// corpus only. Zero-score items are never returned; ties keep insertion
    /// order.
    [[nodiscard]] std::vector<ScoredMemory> retrieve(MemoryKind kind, std::string_view query_text,
                                                     const RetrievalConfig& cfg) const;

    [[nodiscard]] std::string to_jsonl() const;
    static MemoryStore from_jsonl(std::string_view text);

    void persist(const std::filesystem::path& path) const;
    /// A missing file yields an empty store.
    static MemoryStore load(const std::filesystem::path& path);

    /// SHA-256 of to_jsonl(); changes iff contents change.
    [[nodiscard]] std::string content_hash() const;

private:
    mutable std::shared_mutex mu_;
    std::vector<MemoryItem> items_;
    std::size_t next_id_ = 1;
    Clock clock_;
};

/// Current UTC time as ISO-8601 with seconds.
std::string utc_now_iso8601();

}  // namespace ramp
