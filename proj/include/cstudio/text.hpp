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

#ifndef CSTUDIO_TEXT_HPP_
#define CSTUDIO_TEXT_HPP_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace cstudio::text {

// A normalized word occurrence. Offsets are byte offsets into the source.
struct Token {
  std::string normalized;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Word characters are ASCII letters and digits plus every non-ASCII byte, so
// UTF-8 words stay whole. Normalization lowercases ASCII only.
bool is_word_byte(unsigned char c);

std::vector<Token> tokenize_spans(std::string_view s);
std::vector<std::string> tokenize(std::string_view s);

// Tokens in first-appearance order with duplicates removed.
std::vector<std::string> distinct_tokens(std::string_view s);

// |a ∩ b| / |a ∪ b|. Two empty sets are identical (1.0).
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

std::string trim(std::string_view s);
bool is_blank(std::string_view s);

// Replaces every run of whitespace with a single space and trims.
std::string collapse_whitespace(std::string_view s);

// Replaces every run of CR/LF characters with a single space.
std::string collapse_newlines(std::string_view s);

// Number of Unicode scalar values in s[0, byte_offset).
std::size_t codepoint_offset(std::string_view s, std::size_t byte_offset);

// Parses a newline-separated word list, skipping blank lines and '#' comments.
std::vector<std::string> parse_word_list(std::string_view contents);

const std::unordered_set<std::string>& default_stopwords();

}  // namespace cstudio::text

#endif  // CSTUDIO_TEXT_HPP_
