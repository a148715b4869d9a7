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

#ifndef CSTUDIO_NOTEBOOK_HPP_
#define CSTUDIO_NOTEBOOK_HPP_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "cstudio/model.hpp"

namespace cstudio {

using Timestamp = std::chrono::sys_seconds;
using Clock = std::function<Timestamp()>;

Timestamp system_clock_now();
std::string format_iso8601(Timestamp t);  // 2026-01-02T03:04:05Z
Timestamp parse_iso8601(std::string_view s);

// Frozen copy of what the writer saw; never refreshed from the corpus.
struct BookmarkSnapshot {
  std::string sentence_text;
  std::string paper_title;
  std::optional<std::string> paper_url;
  std::vector<std::string> section_path;

  bool operator==(const BookmarkSnapshot&) const = default;
};

struct Bookmark {
  std::string bookmark_id;
  std::string sentence_id;
  Timestamp created_at{};
  BookmarkSnapshot snapshot;

  bool operator==(const Bookmark&) const = default;
};

struct UserNote {
  std::string note_id;
  std::string bookmark_id;
  std::string text;
  Timestamp updated_at{};

  bool operator==(const UserNote&) const = default;
};

// Bookmarks and notes backed by an append-only JSON-lines journal
// ({op, payload, ts} per line). Opening replays the journal, tolerating a
// truncated final line, then rewrites it compacted. Writers are serialized;
// readers share a lock. An empty journal path keeps everything in memory.
class NotebookStore {
 public:
  explicit NotebookStore(std::filesystem::path journal = {}, Clock clock = system_clock_now);

  NotebookStore(const NotebookStore&) = delete;
  NotebookStore& operator=(const NotebookStore&) = delete;

  // Idempotent per sentence id: returns the existing bookmark if present.
  Bookmark add_bookmark(std::string_view sentence_id, const Corpus& corpus);
  // Also removes the bookmark's note.
  void remove_bookmark(std::string_view bookmark_id);
  // One note per bookmark; empty text clears it but keeps the bookmark.
  UserNote upsert_note(std::string_view bookmark_id, std::string text);

  // Ordered by created_at, then bookmark_id.
  std::vector<Bookmark> bookmarks() const;
  std::optional<UserNote> note_for(std::string_view bookmark_id) const;

  // RFC 4180 with CRLF line ends.
  std::string export_csv() const;

  std::size_t replayed_events() const { return replayed_events_; }
  bool dropped_truncated_tail() const { return dropped_tail_; }

 private:
  void replay(const std::string& contents);
  void compact();
  void append(const std::string& op, const std::string& payload_json, Timestamp ts);
  std::vector<Bookmark> ordered_unlocked() const;
  std::string next_bookmark_id();

  std::filesystem::path journal_path_;
  Clock clock_;
  mutable std::shared_mutex mu_;
  std::ofstream journal_;
  std::map<std::string, Bookmark> bookmarks_;          // by bookmark_id
  std::map<std::string, std::string> by_sentence_;     // sentence_id -> bookmark_id
  std::map<std::string, UserNote> notes_;              // by bookmark_id
  std::size_t next_seq_ = 1;
  std::size_t replayed_events_ = 0;
  bool dropped_tail_ = false;
};

// CSV helpers shared with tests and tooling.
std::string csv_escape(std::string_view field);
inline constexpr std::string_view kBookmarkCsvHeader =
    "bookmark_id,sentence_id,paper_title,paper_url,section_path,sentence_text,note_text,"
    "created_at,note_updated_at";

}  // namespace cstudio

#endif  // CSTUDIO_NOTEBOOK_HPP_
