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

#include "cstudio/highlight.hpp"

#include <algorithm>
#include <map>

#include "cstudio/text.hpp"

namespace cstudio {

const char* column_name(Column c) { return c == Column::kMatch ? "match" : "next"; }

std::optional<std::size_t> ColorMap::color_of(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const SentenceRecord* column_sentence(const RetrievedRow& row, Column column) {
  if (column == Column::kMatch) return &row.display;
  return row.next ? &*row.next : nullptr;
}

namespace {

// Tokens of `s` with codepoint offsets, in order.
std::vector<TokenSpan> spans_of(const SentenceRecord& s, std::size_t row, Column column) {
  std::vector<TokenSpan> out;
  std::size_t byte_pos = 0;
  std::size_t cp_pos = 0;
  for (auto& tok : text::tokenize_spans(s.text)) {
    cp_pos += text::codepoint_offset(std::string_view(s.text).substr(byte_pos), tok.begin - byte_pos);
    const std::size_t start = cp_pos;
    cp_pos += text::codepoint_offset(std::string_view(s.text).substr(tok.begin), tok.end - tok.begin);
    byte_pos = tok.end;
    out.push_back(TokenSpan{s.sentence_id, start, cp_pos, std::move(tok.normalized), row, column});
  }
  return out;
}

}  // namespace

ColorMap build_color_map(const RetrievalResult& rows, const std::unordered_set<std::string>& stopwords,
                         std::size_t n_colors) {
  std::map<std::string, std::size_t> counts;
  for (const auto& row : rows.rows) {
    for (Column col : {Column::kMatch, Column::kNext}) {
      const SentenceRecord* s = column_sentence(row, col);
      if (s == nullptr) continue;
      for (const auto& tok : text::tokenize(s->text)) {
        if (!stopwords.count(tok)) ++counts[tok];
      }
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  ColorMap map;
  for (std::size_t i = 0; i < ranked.size() && i < n_colors; ++i) {
    map.index_.emplace(ranked[i].first, i);
    map.ranked_words.push_back(ranked[i].first);
  }
  return map;
}

std::vector<ColoredSpan> colorize(const RetrievalResult& rows, const ColorMap& map) {
  std::vector<ColoredSpan> out;
  for (std::size_t r = 0; r < rows.rows.size(); ++r) {
    for (Column col : {Column::kMatch, Column::kNext}) {
      const SentenceRecord* s = column_sentence(rows.rows[r], col);
      if (s == nullptr) continue;
      for (auto& span : spans_of(*s, r, col)) {
        if (auto c = map.color_of(span.token)) out.push_back(ColoredSpan{std::move(span), *c});
      }
    }
  }
  return out;
}

GreyAnnotation grey_out(const RetrievalResult& rows, Column column) {
  GreyAnnotation out;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < rows.rows.size(); ++r) {
    const SentenceRecord* s = column_sentence(rows.rows[r], column);
    if (s == nullptr) continue;
    auto spans = spans_of(*s, r, column);
    for (const auto& span : spans) {
      if (seen.count(span.token)) out.spans.push_back(span);
    }
    for (auto& span : spans) seen.insert(std::move(span.token));
  }
  return out;
}

}  // namespace cstudio
