// Copyright 2026 The Corpus Studio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "cstudio/errors.hpp"
#include "cstudio/retrieve.hpp"
#include "support.hpp"

namespace cstudio {
namespace {

namespace oracle = testing::oracle;
using testing::make_document;

struct World {
  std::shared_ptr<const Corpus> corpus;
  LocalEmbeddingProvider provider{256};
  VectorIndex index;

  explicit World(std::vector<Document> docs, IndexMode mode = IndexMode::kExact)
      : corpus(std::make_shared<const Corpus>(std::move(docs))),
        index(build_corpus_index(*corpus, provider, mode)) {}

  RetrievalResult retrieve(const std::string& title, const std::string& text, std::size_t offset = 0,
                           std::size_t k = 25) const {
    return spatial_retrieve({title, text, offset}, index, provider, *corpus, k);
  }
};

World fixture_world() { return World(testing::load_fixture_documents()); }

TEST(Retrieve, SelfQueryIsRowOneAtZero) {
  World w = fixture_world();
  for (const auto* r : w.corpus->sentences()) {
    auto res = w.retrieve(r->section_path.back(), r->text);
    ASSERT_FALSE(res.rows.empty());
    EXPECT_EQ(res.rows[0].distance, 0.0) << r->sentence_id;
    EXPECT_EQ(res.rows[0].match.text, r->text);
  }
}

TEST(Retrieve, ThirtySentenceCorpusGivesTwentyFiveSortedRows) {
  World w(testing::synthetic_corpus(3, 30, 17));
  ASSERT_EQ(w.corpus->sentence_count(), 30u);
  auto res = w.retrieve("Method", "We study the design of the system.");
  ASSERT_EQ(res.rows.size(), 25u);
  for (std::size_t i = 1; i < res.rows.size(); ++i)
    EXPECT_LE(res.rows[i - 1].distance, res.rows[i].distance);
  // oracle: brute-force scan of the corpus, first 25 ids
  std::map<std::string, std::vector<float>> vs;
  for (const auto& [id, v] : embed_corpus(*w.corpus, w.provider))
    vs[id] = {v.values().begin(), v.values().end()};
  auto q = w.provider.embed_one({"Method", "We study the design of the system."});
  auto want = oracle::brute_knn(vs, {q.values().begin(), q.values().end()}, 25);
  for (std::size_t i = 0; i < 25; ++i) EXPECT_EQ(res.rows[i].match.sentence_id, want[i].first);
}

TEST(Retrieve, MatchingSectionTitleBreaksTextTies) {
  // Same sentence under two titles: the prepended title decides the order.
  World w({make_document("a", {{"Results", {"Sixteen students joined the study."}, {}}}),
           make_document("b", {{"Participants", {"Sixteen students joined the study."}, {}}}),
           make_document("c", {{"Discussion", {"Writers want more examples."}, {}}})});
  auto res = w.retrieve("Participants", "Students joined.");
  ASSERT_GE(res.rows.size(), 1u);
  EXPECT_EQ(res.rows[0].match.doc_id, "b");
  EXPECT_EQ(res.rows[0].match.section_path.back(), "Participants");
  // the identical text under the other title is suppressed as a repeat
  for (std::size_t i = 1; i < res.rows.size(); ++i) EXPECT_NE(res.rows[i].match.doc_id, "a");
}

TEST(Retrieve, FixtureParticipantsQueryLeadsWithParticipantsSections) {
  World w = fixture_world();
  auto res = w.retrieve("Participants", "We recruited 10 people.");
  ASSERT_EQ(res.rows.size(), 25u);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_EQ(res.rows[i].match.section_path.back(), "Participants") << i;
}

TEST(Retrieve, Preconditions) {
  World w = fixture_world();
  try {
    w.retrieve("Participants", "   ");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    EXPECT_NE(std::string(e.what()).find("nothing to query"), std::string::npos);
  }
  EXPECT_THROW(w.retrieve("", "text"), Error);
  LocalEmbeddingProvider other(128);
  try {
    spatial_retrieve({"T", "x", 0}, w.index, other, *w.corpus, 25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(Offset, IdentityAndDefinition) {
  auto corpus = testing::load_fixture_corpus();
  const auto* m = corpus->find("paper-a#0#1");
  ASSERT_NE(m, nullptr);
  EXPECT_EQ(apply_offset(*m, 0, *corpus)->sentence_id, m->sentence_id);
  EXPECT_EQ(apply_offset(*m, 1, *corpus)->text, *m->next_text);
}

TEST(Offset, PastSectionEndIsAbsent) {
  auto corpus = testing::load_fixture_corpus();
  // paper-a Introduction has 5 sentences; index 2 has two successors
  const auto* m = corpus->find("paper-a#0#2");
  EXPECT_TRUE(apply_offset(*m, 2, *corpus).has_value());
  EXPECT_FALSE(apply_offset(*m, 3, *corpus).has_value());
}

TEST(Offset, CrossesSubsectionsWithinTopLevelSection) {
  auto corpus = testing::load_fixture_corpus();
  // last Participants sentence of paper-a -> first Procedure sentence
  const auto* m = corpus->find("paper-a#3#2");
  EXPECT_EQ(apply_offset(*m, 1, *corpus)->sentence_id, "paper-a#4#0");
}

TEST(Offset, RowsAreTheOffsetSuccessors) {
  World w = fixture_world();
  for (std::size_t o = 0; o <= 3; ++o) {
    auto res = w.retrieve("Participants", "We recruited 10 people.", o);
    for (const auto& row : res.rows) {
      const auto* want = w.corpus->successor(row.match.sentence_id, o);
      ASSERT_NE(want, nullptr);
      EXPECT_EQ(row.display.sentence_id, want->sentence_id);
      const auto* nxt = w.corpus->successor(row.display.sentence_id, 1);
      EXPECT_EQ(row.next.has_value(), nxt != nullptr);
      if (nxt) EXPECT_EQ(row.next->sentence_id, nxt->sentence_id);
    }
  }
}

TEST(Offset, ConsistentWithOffsetZeroMatches) {
  World w = fixture_world();
  auto base = w.retrieve("Discussion", "Writers valued the examples.", 0, 40);
  auto shifted = w.retrieve("Discussion", "Writers valued the examples.", 2, 40);
  std::map<std::string, std::string> base_display;
  for (const auto& r : base.rows) base_display[r.match.sentence_id] = r.display.sentence_id;
  for (const auto& r : shifted.rows) {
    ASSERT_TRUE(base_display.count(r.match.sentence_id));
    EXPECT_EQ(r.display.sentence_id, w.corpus->successor(base_display[r.match.sentence_id], 2)->sentence_id);
  }
}

TEST(Retrieve, DuplicateDisplayTextsKeepNearer) {
  World w({make_document("a", {{"Results", {"The same sentence appears.", "Other words here."}, {}}}),
           make_document("b", {{"Method", {"The same sentence appears.", "Different text."}, {}}})});
  auto res = w.retrieve("Results", "The same sentence appears.");
  std::set<std::string> texts;
  for (const auto& r : res.rows) EXPECT_TRUE(texts.insert(r.display.text).second);
  EXPECT_EQ(res.rows[0].match.doc_id, "a");
  EXPECT_EQ(res.rows.size(), 3u);
}

TEST(Retrieve, SizeIsKWhenSupplyAllows) {
  World w(testing::synthetic_corpus(10, 400, 23));
  std::mt19937_64 rng(1);
  for (std::size_t o = 0; o <= 3; ++o)
    for (int q = 0; q < 5; ++q) {
      auto res = w.retrieve("Results", testing::random_sentence(rng), o, 25);
      EXPECT_EQ(res.rows.size(), 25u);
    }
}

TEST(Retrieve, ApproximateIndexAlsoServesQueries) {
  World w(testing::load_fixture_documents(), IndexMode::kApproximate);
  auto res = w.retrieve("Participants", "We recruited 16 participants from two universities.");
  ASSERT_FALSE(res.rows.empty());
  EXPECT_EQ(res.rows[0].distance, 0.0);
}

// ---- rerank

TEST(Rerank, ThreeRowsFollowPairwiseDistances) {
  World w({make_document("a", {{"S", {"Red green blue.", "Red green yellow.", "Cats and dogs."}, {}}})});
  auto res = w.retrieve("S", "Red green blue.", 0, 3);
  ASSERT_EQ(res.rows.size(), 3u);
  const std::size_t anchor = 2;
  auto rr = rerank(res, anchor, w.index);
  // oracle: pairwise distances computed here
  auto vec = [&](const SentenceRecord& r) {
    auto v = *w.index.vector_of(r.sentence_id);
    return std::vector<float>(v.begin(), v.end());
  };
  std::vector<std::pair<double, std::string>> rest;
  for (std::size_t i = 0; i < 3; ++i)
    if (i != anchor)
      rest.emplace_back(oracle::cosine(vec(res.rows[anchor].display), vec(res.rows[i].display)),
                        res.rows[i].display.sentence_id);
  std::sort(rest.begin(), rest.end());
  EXPECT_EQ(rr.rows[0], res.rows[anchor]);
  EXPECT_EQ(rr.rows[1].display.sentence_id, rest[0].second);
  EXPECT_EQ(rr.rows[2].display.sentence_id, rest[1].second);
  ASSERT_EQ(rr.anchor_distances.size(), 3u);
  EXPECT_EQ(rr.anchor_distances[0], 0.0);
  EXPECT_NEAR(rr.anchor_distances[1], rest[0].first, 1e-12);
}

TEST(Rerank, AnchorAtZeroStaysAndIsIdempotent) {
  World w = fixture_world();
  auto res = w.retrieve("Participants", "We recruited 10 people.");
  auto a = rerank(res, 0, w.index);
  EXPECT_EQ(a.rows[0], res.rows[0]);
  auto b = rerank(res, 0, w.index);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(rerank(a, 0, w.index).rows, a.rows);
}

TEST(Rerank, IsAPermutation) {
  World w = fixture_world();
  auto res = w.retrieve("Introduction", "Writing papers is hard.");
  for (std::size_t anchor = 0; anchor < res.rows.size(); ++anchor) {
    auto rr = rerank(res, anchor, w.index);
    ASSERT_EQ(rr.rows.size(), res.rows.size());
    for (const auto& r : res.rows)
      EXPECT_EQ(std::count(rr.rows.begin(), rr.rows.end(), r), 1);
    for (std::size_t i = 2; i < rr.rows.size(); ++i)
      EXPECT_LE(rr.anchor_distances[i - 1], rr.anchor_distances[i]);
  }
}

TEST(Rerank, AnchorOutOfRange) {
  World w = fixture_world();
  auto res = w.retrieve("Participants", "We recruited 10 people.");
  try {
    rerank(res, res.rows.size(), w.index);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

// ---- tooltip context

TEST(Context, FirstSentenceHasNoPrev) {
  auto corpus = testing::load_fixture_corpus();
  auto c = sentence_context("paper-a#0#0", *corpus);
  EXPECT_FALSE(c.prev_text);
  EXPECT_EQ(c.paper_title, "Scaffolding Novice Writers with Example Sentences");
  EXPECT_EQ(c.paper_url, std::optional<std::string>("https://example.org/papers/a"));
}

TEST(Context, MidSentenceHasBothNeighbours) {
  auto corpus = testing::load_fixture_corpus();
  auto c = sentence_context("paper-a#3#1", *corpus);
  EXPECT_EQ(c.prev_text, std::optional<std::string>("We recruited 16 participants from two universities."));
  EXPECT_EQ(c.next_text, std::optional<std::string>("Each participant received a gift card."));
  EXPECT_EQ(c.section_path, (std::vector<std::string>{"Method", "Participants"}));
}

TEST(Context, CitationResolvedFromBibliography) {
  auto corpus = testing::load_fixture_corpus();
  auto c = sentence_context("paper-a#0#2", *corpus);
  ASSERT_EQ(c.citations.size(), 1u);
  EXPECT_EQ(c.citations[0].marker, "[12]");
  EXPECT_EQ(c.citations[0].authors, "Lee, J. and Park, S.");
  EXPECT_EQ(c.citations[0].cited_title, "Learning from Examples in Academic Writing");
}

TEST(Context, UnknownIdIsNotFound) {
  auto corpus = testing::load_fixture_corpus();
  try {
    sentence_context("nope#0#0", *corpus);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(Embedding, IndexTimeEqualsQueryTimeVector) {
  World w = fixture_world();
  for (const auto* r : w.corpus->sentences()) {
    auto q = w.provider.embed_one({r->section_path.back(), r->text});
    auto stored = *w.index.vector_of(r->sentence_id);
    ASSERT_TRUE(std::equal(stored.begin(), stored.end(), q.values().begin(), q.values().end()))
        << r->sentence_id;
  }
}

}  // namespace
}  // namespace cstudio
