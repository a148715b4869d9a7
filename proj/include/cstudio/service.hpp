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

#ifndef CSTUDIO_SERVICE_HPP_
#define CSTUDIO_SERVICE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cstudio/embed.hpp"
#include "cstudio/highlight.hpp"
#include "cstudio/index.hpp"
#include "cstudio/model.hpp"
#include "cstudio/notebook.hpp"
#include "cstudio/pdc.hpp"
#include "cstudio/retrieve.hpp"
#include "cstudio/serialize.hpp"

namespace cstudio {

enum class RenderMode { kColor, kGrey, kPlain };

const char* render_mode_name(RenderMode m);
RenderMode parse_render_mode(std::string_view name);

// Everything a read request needs. Immutable once constructed.
class Engine {
 public:
  Engine(std::shared_ptr<const Corpus> corpus, std::shared_ptr<const VectorIndex> index,
         std::shared_ptr<const EmbeddingProvider> provider, EngineConfig config);

  const Corpus& corpus() const { return *corpus_; }
  const VectorIndex& index() const { return *index_; }
  const EmbeddingProvider& provider() const { return *provider_; }
  const EngineConfig& config() const { return config_; }
  std::shared_ptr<const Corpus> corpus_ptr() const { return corpus_; }

  // Identifies the indexed sentence set; result tokens carry it.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::shared_ptr<const Corpus> corpus_;
  std::shared_ptr<const VectorIndex> index_;
  std::shared_ptr<const EmbeddingProvider> provider_;
  EngineConfig config_;
  std::uint64_t fingerprint_ = 0;
};

PdcResult compute_pdc(const Corpus& corpus, const EngineConfig& config);

// {total_titles, clusters:[{name, count, mean_position, underline_tokens,
//   members:[{title, doc_id, position, tokens, grey_token_indices}]}]}
json pdc_to_json(const PdcResult& result);

json row_to_json(const RetrievedRow& row, std::size_t index);

// [{row, column, sentence_id, spans:[{start, end, kind, color_index?}]}],
// only for sentences that carry at least one span.
json annotations_to_json(const RetrievalResult& result, RenderMode mode, std::size_t n_colors,
                         std::vector<std::string>* color_words = nullptr);

json context_to_json(const TooltipContext& ctx);
json bookmark_to_json(const Bookmark& b, const std::optional<UserNote>& note);

// Retrieval requests are replayable: the result token encodes the query and
// every rerank anchor applied so far, so rerank needs no server-side state.
struct ResultToken {
  CursorContext query;
  std::size_t k = 0;
  std::vector<std::size_t> anchors;
  std::uint64_t fingerprint = 0;
};

std::string encode_result_token(const ResultToken& token);
ResultToken decode_result_token(std::string_view token);  // throws kConflict

// POST /retrieve body: {section_title, paragraph_text, offset?, mode?, k?}
json retrieve_response(const Engine& engine, const json& request);
// POST /retrieve/rerank body: {result_token, anchor_row, mode?}
json rerank_response(const Engine& engine, const json& request);

}  // namespace cstudio

#endif  // CSTUDIO_SERVICE_HPP_
