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

#include <thread>

#include "cstudio/errors.hpp"
#include "cstudio/notebook.hpp"
#include "notebook_fixture.hpp"
#include "support.hpp"

namespace cstudio {
namespace {

using testing::TempDir;

TEST(Time, Iso8601RoundTrip) {
  const auto t = parse_iso8601("2026-01-02T03:04:05Z");
  EXPECT_EQ(format_iso8601(t), "2026-01-02T03:04:05Z");
  EXPECT_EQ(t.time_since_epoch().count(), 1767323045);
  EXPECT_THROW(parse_iso8601("yesterday"), Error);
}

TEST(Bookmarks, AddTwiceIsIdempotent) {
  auto corpus = testing::load_fixture_corpus();
  NotebookStore s({}, testing::StepClock());
  auto a = s.add_bookmark("paper-a#0#2", *corpus);
  auto b = s.add_bookmark("paper-a#0#2", *corpus);
  EXPECT_EQ(a.bookmark_id, b.bookmark_id);
  EXPECT_EQ(a.bookmark_id, "bm-000001");
  EXPECT_EQ(s.bookmarks().size(), 1u);
  EXPECT_EQ(a.snapshot.section_path, (std::vector<std::string>{"Introduction"}));
}

TEST(Bookmarks, UnknownSentenceIsNotFound) {
  auto corpus = testing::load_fixture_corpus();
  NotebookStore s;
  try {
    s.add_bookmark("nope", *corpus);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  EXPECT_THROW(s.remove_bookmark("bm-000009"), Error);
  EXPECT_THROW(s.upsert_note("bm-000009", "x"), Error);
}

TEST(Bookmarks, RemoveCascadesToNote) {
  auto corpus = testing::load_fixture_corpus();
  NotebookStore s;
  auto b = s.add_bookmark("paper-a#0#2", *corpus);
  s.upsert_note(b.bookmark_id, "why");
  s.remove_bookmark(b.bookmark_id);
  EXPECT_TRUE(s.bookmarks().empty());
  EXPECT_FALSE(s.note_for(b.bookmark_id));
}

TEST(Bookmarks, SnapshotSurvivesReingestWithChangedText) {
  TempDir tmp;
  auto corpus = testing::load_fixture_corpus();
  const std::string original = corpus->find("paper-a#0#2")->text;
  {
    NotebookStore s(tmp / "nb.jsonl");
    s.add_bookmark("paper-a#0#2", *corpus);
  }
  auto docs = testing::load_fixture_documents();
  docs[0].sections[0].sentences[2].text = "Rewritten sentence.";
  docs[0].sections[0].sentences[2].citations.clear();
  attach_sentence_metadata(docs[0]);
  Corpus changed(std::move(docs));
  ASSERT_EQ(changed.find("paper-a#0#2")->text, "Rewritten sentence.");
  NotebookStore s(tmp / "nb.jsonl");
  auto again = s.add_bookmark("paper-a#0#2", changed);
  EXPECT_EQ(again.snapshot.sentence_text, original);
  EXPECT_EQ(s.bookmarks()[0].snapshot.sentence_text, original);
}

TEST(Notes, UpsertKeepsIdAndRefreshesTime) {
  auto corpus = testing::load_fixture_corpus();
  NotebookStore s({}, testing::StepClock());
  auto b = s.add_bookmark("paper-a#0#2", *corpus);
  auto n1 = s.upsert_note(b.bookmark_id, "first");
  auto n2 = s.upsert_note(b.bookmark_id, "second");
  EXPECT_EQ(n1.note_id, n2.note_id);
  EXPECT_EQ(n2.text, "second");
  EXPECT_GT(n2.updated_at, n1.updated_at);
  EXPECT_EQ(s.note_for(b.bookmark_id)->text, "second");
}

TEST(Notes, EmptyTextClearsButKeepsBookmark) {
  TempDir tmp;
  auto corpus = testing::load_fixture_corpus();
  std::string bid;
  {
    NotebookStore s(tmp / "nb.jsonl");
    bid = s.add_bookmark("paper-a#0#2", *corpus).bookmark_id;
    s.upsert_note(bid, "something");
    s.upsert_note(bid, "");
  }
  NotebookStore s(tmp / "nb.jsonl");
  ASSERT_EQ(s.bookmarks().size(), 1u);
  auto n = s.note_for(bid);
  EXPECT_TRUE(!n || n->text.empty());
}

TEST(Csv, EmptyStoreIsHeaderOnly) {
  NotebookStore s;
  EXPECT_EQ(s.export_csv(), std::string(kBookmarkCsvHeader) + "\r\n");
}

TEST(Csv, EscapingFollowsRfc4180) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, ThreeBookmarkGoldenFile) {
  NotebookStore s({}, testing::StepClock());
  testing::populate_three_bookmarks(s, *testing::load_fixture_corpus());
  const std::string golden =
      testing::read_file(testing::fixture_dir() / "golden" / "bookmarks_3.csv");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(s.export_csv(), golden);
}

TEST(Csv, ExportRoundTripsEveryField) {
  auto corpus = testing::load_fixture_corpus();
  NotebookStore s({}, testing::StepClock());
  testing::populate_three_bookmarks(s, *corpus);
  auto rows = testing::parse_csv(s.export_csv());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].size(), 9u);
  auto bms = s.bookmarks();
  for (std::size_t i = 0; i < bms.size(); ++i) {
    const auto& r = rows[i + 1];
    const auto& b = bms[i];
    EXPECT_EQ(r[0], b.bookmark_id);
    EXPECT_EQ(r[1], b.sentence_id);
    EXPECT_EQ(r[2], b.snapshot.paper_title);
    EXPECT_EQ(r[3], b.snapshot.paper_url.value_or(""));
    std::string path;
    for (const auto& p : b.snapshot.section_path) path += (path.empty() ? "" : " > ") + p;
    EXPECT_EQ(r[4], path);
    EXPECT_EQ(r[5], b.snapshot.sentence_text);
    auto note = s.note_for(b.bookmark_id);
    EXPECT_EQ(r[6], note ? note->text : "");
    EXPECT_EQ(r[7], format_iso8601(b.created_at));
    EXPECT_EQ(r[8], note ? format_iso8601(note->updated_at) : "");
  }
}

TEST(Journal, ReplayRestoresState) {
  TempDir tmp;
  auto corpus = testing::load_fixture_corpus();
  std::string csv;
  {
    NotebookStore s(tmp / "nb.jsonl", testing::StepClock());
    testing::populate_three_bookmarks(s, *corpus);
    csv = s.export_csv();
  }
  NotebookStore back(tmp / "nb.jsonl");
  EXPECT_EQ(back.export_csv(), csv);
  EXPECT_FALSE(back.dropped_truncated_tail());
}

TEST(Journal, TruncatedLastLineIsDropped) {
  TempDir tmp;
  auto corpus = testing::load_fixture_corpus();
  {
    NotebookStore s(tmp / "nb.jsonl", testing::StepClock());
    auto b = s.add_bookmark("paper-a#0#2", *corpus);
    s.upsert_note(b.bookmark_id, "kept");
    s.add_bookmark("paper-b#5#0", *corpus);
  }
  // simulate a crash halfway through writing a fourth event
  const std::string full = testing::read_file(tmp / "nb.jsonl");
  testing::write_file(tmp / "nb.jsonl",
                      full + R"({"op":"upsert_note","payload":{"bookmark_id":"bm-000002","te)");
  NotebookStore s(tmp / "nb.jsonl");
  EXPECT_TRUE(s.dropped_truncated_tail());
  EXPECT_EQ(s.replayed_events(), 3u);
  ASSERT_EQ(s.bookmarks().size(), 2u);
  EXPECT_EQ(s.note_for("bm-000001")->text, "kept");
  EXPECT_FALSE(s.note_for("bm-000002"));
  // compaction rewrote the journal without the fragment
  NotebookStore again(tmp / "nb.jsonl");
  EXPECT_FALSE(again.dropped_truncated_tail());
  EXPECT_EQ(again.bookmarks().size(), 2u);
}

TEST(Journal, CorruptMiddleLineIsAnError) {
  TempDir tmp;
  testing::write_file(tmp / "nb.jsonl", "{not json}\n{\"op\":\"add_bookmark\"}\n");
  EXPECT_THROW(NotebookStore(tmp / "nb.jsonl"), Error);
}

TEST(Journal, IdsContinueAfterReopen) {
  TempDir tmp;
  auto corpus = testing::load_fixture_corpus();
  {
    NotebookStore s(tmp / "nb.jsonl");
    s.add_bookmark("paper-a#0#0", *corpus);
    auto b = s.add_bookmark("paper-a#0#1", *corpus);
    s.remove_bookmark(b.bookmark_id);
  }
  NotebookStore s(tmp / "nb.jsonl");
  EXPECT_EQ(s.add_bookmark("paper-a#0#3", *corpus).bookmark_id, "bm-000003");
}

TEST(Concurrency, InterleavedAddsAreSerializable) {
  auto corpus = testing::load_fixture_corpus();
  NotebookStore s;
  std::vector<std::thread> ts;
  const auto& sents = corpus->sentences();
  for (int t = 0; t < 4; ++t)
    ts.emplace_back([&, t] {
      for (std::size_t i = 0; i < sents.size(); ++i)
        if (i % 4 == static_cast<std::size_t>(t) || i % 3 == 0) s.add_bookmark(sents[i]->sentence_id, *corpus);
    });
  for (auto& t : ts) t.join();
  auto bms = s.bookmarks();
  EXPECT_EQ(bms.size(), sents.size());
  std::set<std::string> ids;
  for (const auto& b : bms) ids.insert(b.bookmark_id);
  EXPECT_EQ(ids.size(), bms.size());
}

}  // namespace
}  // namespace cstudio
