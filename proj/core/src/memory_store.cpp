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
#include "ramp/memory_store.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ramp/bm25.hpp"
#include "ramp/text.hpp"

namespace ramp {

using nlohmann::json;

std::string_view to_string(MemoryKind k) { return k == MemoryKind::Semantic ? "semantic" : "episodic"; }
std::string_view to_string(MemorySource s) { return s == MemorySource::Human ? "human" : "self_learned"; }

std::optional<MemoryKind> parse_memory_kind(std::string_view s) {
    if (s == "semantic") return MemoryKind::Semantic;
    if (s == "episodic") return MemoryKind::Episodic;
    return std::nullopt;
}

std::optional<MemorySource> parse_memory_source(std::string_view s) {
    if (s == "human") return MemorySource::Human;
    if (s == "self_learned") return MemorySource::SelfLearned;
    return std::nullopt;
}

MemoryFormatError::MemoryFormatError(std::size_t line, const std::string& message)
    : MemoryError("memory JSONL line " + std::to_string(line) + ": " + message), line_(line) {}

std::string utc_now_iso8601() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

MemoryStore::MemoryStore() : clock_(utc_now_iso8601) {}
MemoryStore::MemoryStore(Clock clock) : clock_(std::move(clock)) {}

MemoryStore::MemoryStore(const MemoryStore& other) {
    std::shared_lock lock(other.mu_);
    items_ = other.items_;
    next_id_ = other.next_id_;
    clock_ = other.clock_;
}

MemoryStore& MemoryStore::operator=(const MemoryStore& other) {
    if (this == &other) return *this;
    std::vector<MemoryItem> items;
    std::size_t next = 0;
    Clock clock;
    {
        std::shared_lock lock(other.mu_);
        items = other.items_;
        next = other.next_id_;
        clock = other.clock_;
    }
    std::unique_lock lock(mu_);
    items_ = std::move(items);
    next_id_ = next;
    clock_ = std::move(clock);
    return *this;
}

namespace {

// Ids of the form mem-<n> advance the counter so loaded stores never reissue them.
std::optional<std::size_t> numeric_suffix(const std::string& id) {
    if (!id.starts_with("mem-")) return std::nullopt;
    try {
        std::size_t pos = 0;
        auto v = std::stoull(id.substr(4), &pos);
        if (pos != id.size() - 4) return std::nullopt;
        return static_cast<std::size_t>(v);
    } catch (...) {
        return std::nullopt;
    }
}

}  // namespace

std::string MemoryStore::add(MemoryItem item) {
    if (text::trim(item.text).empty()) throw MemoryError("memory text must be non-empty");
    std::unique_lock lock(mu_);
    if (item.id.empty()) {
        do {
            item.id = "mem-" + std::to_string(next_id_++);
        } while (std::any_of(items_.begin(), items_.end(), [&](const MemoryItem& m) { return m.id == item.id; }));
    } else {
        if (std::any_of(items_.begin(), items_.end(), [&](const MemoryItem& m) { return m.id == item.id; })) {
            throw MemoryError("duplicate memory id '" + item.id + "'");
        }
        if (auto n = numeric_suffix(item.id)) next_id_ = std::max(next_id_, *n + 1);
    }
    if (item.created_at.empty()) item.created_at = clock_ ? clock_() : utc_now_iso8601();
    items_.push_back(item);
    return item.id;
}

std::string MemoryStore::add(MemoryKind kind, std::string text, MemorySource source) {
    MemoryItem item;
    item.kind = kind;
    item.text = std::move(text);
    item.source = source;
    return add(std::move(item));
}

void MemoryStore::remove(std::string_view id) {
    std::unique_lock lock(mu_);
    auto it = std::find_if(items_.begin(), items_.end(), [&](const MemoryItem& m) { return m.id == id; });
    if (it == items_.end()) throw MemoryError("unknown memory id '" + std::string(id) + "'");
    items_.erase(it);
}

std::vector<MemoryItem> MemoryStore::list(MemoryKind kind) const {
    std::shared_lock lock(mu_);
    std::vector<MemoryItem> out;
    for (const auto& m : items_) {
        if (m.kind == kind) out.push_back(m);
    }
    return out;
}

std::vector<MemoryItem> MemoryStore::all() const {
    std::shared_lock lock(mu_);
    return items_;
}

std::optional<MemoryItem> MemoryStore::find(std::string_view id) const {
    std::shared_lock lock(mu_);
    for (const auto& m : items_) {
        if (m.id == id) return m;
    }
    return std::nullopt;
}

std::size_t MemoryStore::size() const {
    std::shared_lock lock(mu_);
    return items_.size();
}

std::vector<ScoredMemory> MemoryStore::retrieve(MemoryKind kind, std::string_view query_text,
                                                const RetrievalConfig& cfg) const {
    if (cfg.n == 0) return {};
    std::vector<MemoryItem> corpus;
    {
        std::shared_lock lock(mu_);
        for (const auto& m : items_) {
            if (m.kind != kind) continue;
            if (!cfg.include_self_learned && m.source == MemorySource::SelfLearned) continue;
            corpus.push_back(m);
        }
    }
    if (corpus.empty()) return {};
    std::vector<std::vector<std::string>> docs;
    docs.reserve(corpus.size());
    for (const auto& m : corpus) docs.push_back(text::tokenize(m.text));
    const Bm25Index index(std::move(docs), Bm25Params{cfg.k1, cfg.b});
    const auto scores = index.scores(text::tokenize(query_text));

    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<ScoredMemory> out;
    for (auto i : order) {
        if (out.size() >= cfg.n || scores[i] <= 0.0) break;
        out.push_back({corpus[i], scores[i]});
    }
    return out;
}

namespace {

json to_json(const MemoryItem& m) {
    return json{{"id", m.id},
                {"kind", std::string(to_string(m.kind))},
                {"text", m.text},
                {"source", std::string(to_string(m.source))},
                {"created_at", m.created_at}};
}

}  // namespace

std::string MemoryStore::to_jsonl() const {
    std::shared_lock lock(mu_);
    std::string out;
    for (const auto& m : items_) out += to_json(m).dump() + "\n";
    return out;
}

MemoryStore MemoryStore::from_jsonl(std::string_view text) {
    MemoryStore store;
    std::size_t line_no = 0;
    for (const auto& line : text::split_lines(text)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw MemoryFormatError(line_no, e.what());
        }
        auto str = [&](const char* key) -> std::string {
            if (!j.is_object() || !j.contains(key) || !j[key].is_string()) {
                throw MemoryFormatError(line_no, std::string("missing string field '") + key + "'");
            }
            return j[key].get<std::string>();
        };
        MemoryItem m;
        m.id = str("id");
        auto kind = parse_memory_kind(str("kind"));
        if (!kind) throw MemoryFormatError(line_no, "kind must be semantic or episodic");
        m.kind = *kind;
        m.text = str("text");
        auto source = parse_memory_source(str("source"));
        if (!source) throw MemoryFormatError(line_no, "source must be human or self_learned");
        m.source = *source;
        m.created_at = str("created_at");
        try {
            store.add(std::move(m));
        } catch (const MemoryError& e) {
            throw MemoryFormatError(line_no, e.what());
        }
    }
    return store;
}

void MemoryStore::persist(const std::filesystem::path& path) const {
    const auto body = to_jsonl();
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw MemoryError("cannot write '" + tmp + "'");
        out << body;
        if (!out) throw MemoryError("write failed for '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

MemoryStore MemoryStore::load(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return MemoryStore{};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MemoryError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_jsonl(ss.str());
}

std::string MemoryStore::content_hash() const { return text::sha256_hex(to_jsonl()); }

}  // namespace ramp
