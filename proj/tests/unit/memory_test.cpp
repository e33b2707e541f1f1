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
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "ramp/bm25.hpp"
#include "ramp/memory_store.hpp"
#include "ramp/text.hpp"

namespace ramp {
namespace {

MemoryStore fixed_store() {
    return MemoryStore([] { return std::string("2025-06-30T00:00:00Z"); });
}

// Direct transcription of the Okapi formula for one document.
double okapi(const std::vector<std::vector<std::string>>& docs, std::size_t d, const std::vector<std::string>& q) {
    double avg = 0;
    for (const auto& x : docs) avg += static_cast<double>(x.size());
    avg /= static_cast<double>(docs.size());
    std::vector<std::string> terms;
    for (const auto& t : q) {
        if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);
    }
    double s = 0;
    for (const auto& t : terms) {
        double df = 0;
        for (const auto& x : docs) df += std::find(x.begin(), x.end(), t) != x.end() ? 1 : 0;
        if (df == 0) continue;
        const double idf = std::log(1 + (static_cast<double>(docs.size()) - df + 0.5) / (df + 0.5));
        const double tf = static_cast<double>(std::count(docs[d].begin(), docs[d].end(), t));
        const double len = static_cast<double>(docs[d].size());
        s += idf * tf * 2.2 / (tf + 1.2 * (0.25 + 0.75 * len / avg));
    }
    return s;
}

TEST(Bm25, MatchesFormula) {
    const std::vector<std::string> raw = {"gold gold members book hotels", "hotels near the beach",
                                          "members of the gold tier", "flights and cruises", "the the the"};
    std::vector<std::vector<std::string>> docs;
    for (const auto& r : raw) docs.push_back(text::tokenize(r));
    const Bm25Index idx(docs);
    const auto q = text::tokenize("gold hotels the gold");
    const auto s = idx.scores(q);
    for (std::size_t d = 0; d < docs.size(); ++d) EXPECT_NEAR(s[d], okapi(docs, d, q), 1e-12) << d;
    EXPECT_EQ(s[3], 0.0);
    EXPECT_GT(idx.idf("the"), 0.0);
}

TEST(MemoryStore, AssignsIdsAndTimestamps) {
    auto store = fixed_store();
    const auto a = store.add(MemoryKind::Semantic, "alpha");
    const auto b = store.add(MemoryKind::Episodic, "beta");
    EXPECT_NE(a, b);
    EXPECT_EQ(store.find(a)->created_at, "2025-06-30T00:00:00Z");
    EXPECT_EQ(store.list(MemoryKind::Semantic).size(), 1u);
    EXPECT_EQ(store.size(), 2u);
    store.remove(a);
    EXPECT_FALSE(store.find(a).has_value());
    EXPECT_THROW(store.remove(a), MemoryError);
    EXPECT_THROW(store.add(MemoryKind::Semantic, "   "), MemoryError);
}

TEST(MemoryStore, RetrievalIsPerKindAndSkipsZeroScores) {
    auto store = fixed_store();
    const auto s1 = store.add(MemoryKind::Semantic, "State is stored as a postal code such as MA");
    store.add(MemoryKind::Semantic, "Propensity scores range from 0 to 100");
    store.add(MemoryKind::Episodic, "Issue: state filter empty. Solution: use postal code");
    const auto hits = store.retrieve(MemoryKind::Semantic, "users in the state of MA", RetrievalConfig{.n = 5});
    ASSERT_EQ(hits.size(), 1u);
    EXPECT_EQ(hits[0].item.id, s1);
    EXPECT_TRUE(store.retrieve(MemoryKind::Semantic, "zebra", RetrievalConfig{.n = 5}).empty());
    EXPECT_TRUE(store.retrieve(MemoryKind::Semantic, "state", RetrievalConfig{.n = 0}).empty());
}

TEST(MemoryStore, TiesKeepInsertionOrder) {
    auto store = fixed_store();
    const auto a = store.add(MemoryKind::Semantic, "hotel fact one");
    const auto b = store.add(MemoryKind::Semantic, "hotel fact two");
    const auto hits = store.retrieve(MemoryKind::Semantic, "hotel", RetrievalConfig{.n = 2});
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_EQ(hits[0].item.id, a);
    EXPECT_EQ(hits[1].item.id, b);
}

TEST(MemoryStore, SelfLearnedCanBeExcluded) {
    auto store = fixed_store();
    store.add(MemoryKind::Semantic, "lower the hotel threshold", MemorySource::SelfLearned);
    EXPECT_EQ(store.retrieve(MemoryKind::Semantic, "hotel", RetrievalConfig{.n = 3}).size(), 1u);
    EXPECT_TRUE(
        store.retrieve(MemoryKind::Semantic, "hotel", RetrievalConfig{.n = 3, .include_self_learned = false}).empty());
}

TEST(MemoryStore, JsonlRoundTripAndHash) {
    auto store = fixed_store();
    store.add(MemoryKind::Semantic, "alpha \"quoted\"");
    store.add(MemoryKind::Episodic, "beta", MemorySource::SelfLearned);
    const auto h = store.content_hash();
    const auto copy = MemoryStore::from_jsonl(store.to_jsonl());
    EXPECT_EQ(copy.all(), store.all());
    EXPECT_EQ(copy.content_hash(), h);
    store.add(MemoryKind::Semantic, "gamma");
    EXPECT_NE(store.content_hash(), h);

    const auto dir = std::filesystem::temp_directory_path() / "ramp_memory_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    store.persist(dir / "memory.jsonl");
    EXPECT_EQ(MemoryStore::load(dir / "memory.jsonl").all(), store.all());
    EXPECT_EQ(MemoryStore::load(dir / "missing.jsonl").size(), 0u);
    std::filesystem::remove_all(dir);
}

TEST(MemoryStore, FormatErrorsNameTheLine) {
    const std::string good =
        R"({"id":"mem-1","kind":"semantic","text":"a","source":"human","created_at":"2025-06-30T00:00:00Z"})";
    for (const auto& bad : {std::string("{not json"), std::string(R"({"id":"x","kind":"procedural","text":"a"})"),
                            std::string(R"({"id":"x","kind":"semantic"})")}) {
        try {
            (void)MemoryStore::from_jsonl(good + "\n" + bad + "\n");
            FAIL() << "expected MemoryFormatError for " << bad;
        } catch (const MemoryFormatError& e) {
            EXPECT_EQ(e.line(), 2u) << e.what();
        }
    }
}

TEST(MemoryStore, CopiesAreIndependent) {
    auto store = fixed_store();
    store.add(MemoryKind::Semantic, "alpha");
    MemoryStore copy(store);
    copy.add(MemoryKind::Semantic, "beta");
    EXPECT_EQ(store.size(), 1u);
    EXPECT_EQ(copy.size(), 2u);
}

}  // namespace
}  // namespace ramp
