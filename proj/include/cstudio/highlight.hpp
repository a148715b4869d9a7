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

#ifndef CSTUDIO_HIGHLIGHT_HPP_
#define CSTUDIO_HIGHLIGHT_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cstudio/retrieve.hpp"

namespace cstudio {

// The two displayed columns: "What others wrote" shows each row's display
// sentence, "What they wrote next" shows its successor.
enum class Column { kMatch, kNext };

const char* column_name(Column c);

// Offsets count Unicode scalar values.
struct TokenSpan {
  std::string sentence_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string token;
  std::size_t row = 0;
  Column column = Column::kMatch;

  bool operator==(const TokenSpan&) const = default;
};

struct ColoredSpan {
  TokenSpan span;
  std::size_t color_index = 0;

  bool operator==(const ColoredSpan&) const = default;
};

struct ColorMap {
  std::vector<std::string> ranked_words;  // color index = position
  std::optional<std::size_t> color_of(const std::string& token) const;

 private:
  friend ColorMap build_color_map(const RetrievalResult&, const std::unordered_set<std::string>&,
                                  std::size_t);
  std::unordered_map<std::string, std::size_t> index_;
};

struct GreyAnnotation {
  std::vector<TokenSpan> spans;
};

// Sentence displayed in `column` for `row`, if any.
const SentenceRecord* column_sentence(const RetrievedRow& row, Column column);

// Top n_colors non-stopwords by total occurrence count over both columns,
// ties broken lexicographically.
ColorMap build_color_map(const RetrievalResult& rows, const std::unordered_set<std::string>& stopwords,
                         std::size_t n_colors);

// One span per occurrence of a mapped word, in row order, match column first.
std::vector<ColoredSpan> colorize(const RetrievalResult& rows, const ColorMap& map);

// Greys every occurrence of a token already seen in an earlier sentence of
// the same column, in current row order. Stopwords are eligible.
GreyAnnotation grey_out(const RetrievalResult& rows, Column column);

}  // namespace cstudio

#endif  // CSTUDIO_HIGHLIGHT_HPP_
