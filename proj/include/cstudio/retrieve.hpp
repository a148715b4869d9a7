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

#ifndef CSTUDIO_RETRIEVE_HPP_
#define CSTUDIO_RETRIEVE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cstudio/embed.hpp"
#include "cstudio/index.hpp"
#include "cstudio/model.hpp"

namespace cstudio {

// Where the writer's cursor is: the containing section title, the text of
// the focused (or nearest preceding non-empty) paragraph cell, and how many
// empty cells follow it.
struct CursorContext {
  std::string section_title;
  std::string paragraph_text;
  std::size_t offset = 0;

  bool operator==(const CursorContext&) const = default;
};

struct RetrievedRow {
  SentenceRecord match;
  std::optional<SentenceRecord> next;  // successor of `display`
  double distance = 0.0;               // query to match
  SentenceRecord display;              // `offset` sentences after match

  bool operator==(const RetrievedRow&) const = default;
};

struct RetrievalResult {
  std::vector<RetrievedRow> rows;
  CursorContext query_echo;
  // Filled by rerank only: distance from each row's display sentence to the
  // anchor's, parallel to `rows`.
  std::vector<double> anchor_distances;
};

// Embeds every corpus sentence as (deepest section title, text).
std::map<std::string, EmbeddingVector> embed_corpus(const Corpus& corpus,
                                                    const EmbeddingProvider& provider,
                                                    std::size_t batch_size = 256);

VectorIndex build_corpus_index(const Corpus& corpus, const EmbeddingProvider& provider,
                               IndexMode mode, const HnswParams& params = {});

// The sentence `o` positions after `match` within its top-level section.
std::optional<SentenceRecord> apply_offset(const SentenceRecord& match, std::size_t o,
                                           const Corpus& corpus);

// kNN over the composed (section title, paragraph) query, offset applied,
// duplicate display texts dropped (nearer kept), truncated to k. The
// candidate pool starts at 2k and widens until k rows survive or the index
// is exhausted.
RetrievalResult spatial_retrieve(const CursorContext& ctx, const VectorIndex& index,
                                 const EmbeddingProvider& provider, const Corpus& corpus,
                                 std::size_t k, std::size_t ef_search = kDefaultEfSearch);

// Moves `anchor_row` to the top and orders the rest by ascending cosine
// distance between display sentences and the anchor's, ties by sentence id.
RetrievalResult rerank(const RetrievalResult& result, std::size_t anchor_row,
                       const VectorIndex& index);

struct TooltipContext {
  std::string sentence_id;
  std::string paper_title;
  std::optional<std::string> paper_url;
  std::vector<std::string> section_path;
  std::optional<std::string> prev_text;
  std::optional<std::string> next_text;
  std::vector<CitationRef> citations;
};

TooltipContext sentence_context(std::string_view sentence_id, const Corpus& corpus);

}  // namespace cstudio

#endif  // CSTUDIO_RETRIEVE_HPP_
