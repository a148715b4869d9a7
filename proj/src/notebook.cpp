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

#include "cstudio/notebook.hpp"

#include <cstdio>
#include <ctime>
#include <mutex>
#include <sstream>

#include "cstudio/errors.hpp"
#include "cstudio/serialize.hpp"

namespace cstudio {

Timestamp system_clock_now() {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

std::string format_iso8601(Timestamp t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Timestamp parse_iso8601(std::string_view s) {
  std::tm tm{};
  char z = 0;
  const std::string str(s);
  if (std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                  &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &z) != 7 ||
      z != 'Z')
    throw Error(ErrorCode::kParse, "bad timestamp: " + str);
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  return Timestamp(std::chrono::seconds(timegm(&tm)));
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

json bookmark_json(const Bookmark& b) {
  return json{{"bookmark_id", b.bookmark_id},
              {"sentence_id", b.sentence_id},
              {"created_at", format_iso8601(b.created_at)},
              {"snapshot",
               {{"sentence_text", b.snapshot.sentence_text},
                {"paper_title", b.snapshot.paper_title},
                {"paper_url", b.snapshot.paper_url ? json(*b.snapshot.paper_url) : json(nullptr)},
                {"section_path", b.snapshot.section_path}}}};
}

Bookmark bookmark_from_json(const json& j) {
  Bookmark b;
  b.bookmark_id = j.at("bookmark_id").get<std::string>();
  b.sentence_id = j.at("sentence_id").get<std::string>();
  b.created_at = parse_iso8601(j.at("created_at").get<std::string>());
  const auto& s = j.at("snapshot");
  b.snapshot.sentence_text = s.at("sentence_text").get<std::string>();
  b.snapshot.paper_title = s.at("paper_title").get<std::string>();
  if (s.contains("paper_url") && !s["paper_url"].is_null())
    b.snapshot.paper_url = s["paper_url"].get<std::string>();
  b.snapshot.section_path = s.at("section_path").get<std::vector<std::string>>();
  return b;
}

json note_json(const UserNote& n) {
  return json{{"note_id", n.note_id},
              {"bookmark_id", n.bookmark_id},
              {"text", n.text},
              {"updated_at", format_iso8601(n.updated_at)}};
}

UserNote note_from_json(const json& j) {
  return UserNote{j.at("note_id").get<std::string>(), j.at("bookmark_id").get<std::string>(),
                  j.at("text").get<std::string>(),
                  parse_iso8601(j.at("updated_at").get<std::string>())};
}

std::size_t seq_of(const std::string& id) {
  const auto dash = id.rfind('-');
  if (dash == std::string::npos) return 0;
  try {
    return std::stoul(id.substr(dash + 1));
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

NotebookStore::NotebookStore(std::filesystem::path journal, Clock clock)
    : journal_path_(std::move(journal)), clock_(std::move(clock)) {
  if (journal_path_.empty()) return;
  if (std::filesystem::exists(journal_path_)) {
    std::ifstream in(journal_path_, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read journal: " + journal_path_.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    replay(ss.str());
  }
  compact();
}

void NotebookStore::replay(const std::string& contents) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < contents.size()) {
    std::size_t nl = contents.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    if (!terminated) nl = contents.size();
    const std::string line = contents.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;

    json ev;
    try {
      ev = json::parse(line);
      const std::string op = ev.at("op").get<std::string>();
      const json& p = ev.at("payload");
      if (op == "add_bookmark") {
        Bookmark b = bookmark_from_json(p);
        next_seq_ = std::max(next_seq_, seq_of(b.bookmark_id) + 1);
        if (!by_sentence_.count(b.sentence_id) && !bookmarks_.count(b.bookmark_id)) {
          by_sentence_[b.sentence_id] = b.bookmark_id;
          bookmarks_[b.bookmark_id] = std::move(b);
        }
      } else if (op == "remove_bookmark") {
        const auto id = p.at("bookmark_id").get<std::string>();
        if (auto it = bookmarks_.find(id); it != bookmarks_.end()) {
          by_sentence_.erase(it->second.sentence_id);
          bookmarks_.erase(it);
          notes_.erase(id);
        }
      } else if (op == "upsert_note") {
        UserNote n = note_from_json(p);
        if (bookmarks_.count(n.bookmark_id)) notes_[n.bookmark_id] = std::move(n);
      } else {
        throw Error(ErrorCode::kParse, "unknown journal op: " + op);
      }
    } catch (const std::exception& e) {
      // A crash mid-append leaves an unterminated final line; skip it.
      if (!terminated) {
        dropped_tail_ = true;
        break;
      }
      throw Error(ErrorCode::kParse, "journal " + journal_path_.string() + ":" +
                                         std::to_string(line_no) + ": " + e.what());
    }
    ++replayed_events_;
  }
}

void NotebookStore::compact() {
  const auto tmp = journal_path_.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write journal: " + tmp);
    const auto all = ordered_unlocked();
    const Timestamp now = all.empty() ? Timestamp{} : clock_();
    for (const auto& b : all) {
      out << json{{"op", "add_bookmark"}, {"payload", bookmark_json(b)}, {"ts", format_iso8601(now)}}.dump()
          << '\n';
      if (auto it = notes_.find(b.bookmark_id); it != notes_.end()) {
        out << json{{"op", "upsert_note"}, {"payload", note_json(it->second)}, {"ts", format_iso8601(now)}}
                   .dump()
            << '\n';
      }
    }
    if (!out) throw Error(ErrorCode::kIo, "error writing journal: " + tmp);
  }
  std::filesystem::rename(tmp, journal_path_);
  journal_.open(journal_path_, std::ios::binary | std::ios::app);
  if (!journal_) throw Error(ErrorCode::kIo, "cannot append to journal: " + journal_path_.string());
}

void NotebookStore::append(const std::string& op, const std::string& payload_json, Timestamp ts) {
  if (!journal_.is_open()) return;
  journal_ << "{\"op\":" << json(op).dump() << ",\"payload\":" << payload_json
           << ",\"ts\":" << json(format_iso8601(ts)).dump() << "}\n";
  journal_.flush();
  if (!journal_) throw Error(ErrorCode::kIo, "error appending to journal: " + journal_path_.string());
}

std::string NotebookStore::next_bookmark_id() {
  char buf[32];
  std::snprintf(buf, sizeof buf, "bm-%06zu", next_seq_++);
  return buf;
}

Bookmark NotebookStore::add_bookmark(std::string_view sentence_id, const Corpus& corpus) {
  std::unique_lock lock(mu_);
  if (auto it = by_sentence_.find(std::string(sentence_id)); it != by_sentence_.end())
    return bookmarks_.at(it->second);
  const SentenceRecord* r = corpus.find(sentence_id);
  if (r == nullptr) throw Error(ErrorCode::kNotFound, "unknown sentence id: " + std::string(sentence_id));
  const Document* doc = corpus.find_document(r->doc_id);

  Bookmark b;
  b.bookmark_id = next_bookmark_id();
  b.sentence_id = r->sentence_id;
  b.created_at = clock_();
  b.snapshot.sentence_text = r->text;
  b.snapshot.paper_title = doc ? doc->title : std::string();
  b.snapshot.paper_url = doc ? doc->url : std::nullopt;
  b.snapshot.section_path = r->section_path;
  append("add_bookmark", bookmark_json(b).dump(), b.created_at);
  by_sentence_[b.sentence_id] = b.bookmark_id;
  bookmarks_[b.bookmark_id] = b;
  return b;
}

void NotebookStore::remove_bookmark(std::string_view bookmark_id) {
  std::unique_lock lock(mu_);
  auto it = bookmarks_.find(std::string(bookmark_id));
  if (it == bookmarks_.end()) throw Error(ErrorCode::kNotFound, "unknown bookmark: " + std::string(bookmark_id));
  append("remove_bookmark", json{{"bookmark_id", it->first}}.dump(), clock_());
  by_sentence_.erase(it->second.sentence_id);
  notes_.erase(it->first);
  bookmarks_.erase(it);
}

UserNote NotebookStore::upsert_note(std::string_view bookmark_id, std::string text) {
  std::unique_lock lock(mu_);
  const std::string id(bookmark_id);
  if (!bookmarks_.count(id)) throw Error(ErrorCode::kNotFound, "unknown bookmark: " + id);
  UserNote n;
  if (auto it = notes_.find(id); it != notes_.end()) {
    n = it->second;
  } else {
    n.note_id = "note-" + id.substr(id.rfind('-') + 1);
    n.bookmark_id = id;
  }
  n.text = std::move(text);
  n.updated_at = clock_();
  append("upsert_note", note_json(n).dump(), n.updated_at);
  notes_[id] = n;
  return n;
}

std::vector<Bookmark> NotebookStore::ordered_unlocked() const {
  std::vector<Bookmark> out;
  out.reserve(bookmarks_.size());
  for (const auto& [id, b] : bookmarks_) out.push_back(b);
  std::stable_sort(out.begin(), out.end(),
                   [](const Bookmark& a, const Bookmark& b) { return a.created_at < b.created_at; });
  return out;
}

std::vector<Bookmark> NotebookStore::bookmarks() const {
  std::shared_lock lock(mu_);
  return ordered_unlocked();
}

std::optional<UserNote> NotebookStore::note_for(std::string_view bookmark_id) const {
  std::shared_lock lock(mu_);
  auto it = notes_.find(std::string(bookmark_id));
  if (it == notes_.end()) return std::nullopt;
  return it->second;
}

std::string NotebookStore::export_csv() const {
  std::shared_lock lock(mu_);
  std::string out(kBookmarkCsvHeader);
  out += "\r\n";
  for (const auto& b : ordered_unlocked()) {
    std::string path;
    for (const auto& p : b.snapshot.section_path) path += (path.empty() ? "" : " > ") + p;
    const auto note = notes_.find(b.bookmark_id);
    const std::string fields[] = {
        b.bookmark_id,
        b.sentence_id,
        b.snapshot.paper_title,
        b.snapshot.paper_url.value_or(""),
        path,
        b.snapshot.sentence_text,
        note != notes_.end() ? note->second.text : "",
        format_iso8601(b.created_at),
        note != notes_.end() ? format_iso8601(note->second.updated_at) : ""};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i) out += ',';
      out += csv_escape(fields[i]);
    }
    out += "\r\n";
  }
  return out;
}

}  // namespace cstudio
