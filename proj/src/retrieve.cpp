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

#include "cstudio/retrieve.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "cstudio/errors.hpp"
#include "cstudio/text.hpp"

namespace cstudio {

std::map<std::string, EmbeddingVector> embed_corpus(const Corpus& corpus,
                                                    const EmbeddingProvider& provider,
                                                    std::size_t batch_size) {
  const auto& all = corpus.sentences();
  std::map<std::string, EmbeddingVector> out;
  std::vector<EmbeddingInput> batch;
  for (std::size_t start = 0; start < all.size(); start += batch_size) {
    const std::size_t end = std::min(all.size(), start + batch_size);
    batch.clear();
    for (std::size_t i = start; i < end; ++i)
      batch.push_back(EmbeddingInput{all[i]->section_path.back(), all[i]->text});
    auto vecs = provider.embed_batch(batch);
    if (vecs.size() != batch.size())
      throw Error(ErrorCode::kInternal, "provider returned wrong batch size");
    for (std::size_t i = start; i < end; ++i) {
      if (vecs[i - start].dim() != provider.dim())
        throw Error(ErrorCode::kConfig, "provider returned a vector of unexpected dim");
      out.emplace(all[i]->sentence_id, std::move(vecs[i - start]));
    }
  }
  return out;
}

VectorIndex build_corpus_index(const Corpus& corpus, const EmbeddingProvider& provider,
                               IndexMode mode, const HnswParams& params) {
  return VectorIndex::build(embed_corpus(corpus, provider), mode, params);
}

std::optional<SentenceRecord> apply_offset(const SentenceRecord& match, std::size_t o,
                                           const Corpus& corpus) {
  const SentenceRecord* s = corpus.successor(match.sentence_id, o);
  if (s == nullptr) return std::nullopt;
  return *s;
}

RetrievalResult spatial_retrieve(const CursorContext& ctx, const VectorIndex& index,
                                 const EmbeddingProvider& provider, const Corpus& corpus,
                                 std::size_t k, std::size_t ef_search) {
  if (text::is_blank(ctx.section_title))
    throw Error(ErrorCode::kInvalidArgument, "cursor is not inside a titled section");
  if (text::is_blank(ctx.paragraph_text)) throw Error(ErrorCode::kInvalidArgument, "nothing to query");
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (index.dim() != provider.dim())
    throw Error(ErrorCode::kConfig, "index dim " + std::to_string(index.dim()) +
                                        " does not match provider dim " +
                                        std::to_string(provider.dim()));

  const EmbeddingVector query =
      provider.embed_one(EmbeddingInput{text::trim(ctx.section_title), ctx.paragraph_text});

  RetrievalResult result;
  result.query_echo = ctx;
  std::size_t pool = std::min(index.size(), 2 * k);
  for (;;) {
    const auto neighbors = index.knn(query.values(), pool, std::max(ef_search, pool));
    result.rows.clear();
    std::unordered_set<std::string> shown;
    for (const auto& nb : neighbors) {
      const SentenceRecord* match = corpus.find(nb.sentence_id);
      if (match == nullptr)
        throw Error(ErrorCode::kConfig, "index entry " + nb.sentence_id + " is not in the corpus");
      const SentenceRecord* display = corpus.successor(match->sentence_id, ctx.offset);
      if (display == nullptr) continue;
      if (!shown.insert(display->text).second) continue;
      RetrievedRow row;
      row.match = *match;
      row.display = *display;
      row.distance = nb.distance;
      if (const SentenceRecord* nx = corpus.successor(display->sentence_id, 1)) row.next = *nx;
      result.rows.push_back(std::move(row));
      if (result.rows.size() == k) break;
    }
    if (result.rows.size() == k || pool >= index.size() || neighbors.size() < pool) break;
    pool = std::min(index.size(), pool * 2);
  }
  return result;
}

RetrievalResult rerank(const RetrievalResult& result, std::size_t anchor_row,
                       const VectorIndex& index) {
  if (anchor_row >= result.rows.size())
    throw Error(ErrorCode::kInvalidArgument, "anchor row " + std::to_string(anchor_row) +
                                                 " is out of range");
  auto vec = [&](const RetrievedRow& r) {
    auto v = index.vector_of(r.display.sentence_id);
    if (!v) throw Error(ErrorCode::kNotFound, "no vector for " + r.display.sentence_id);
    return *v;
  };
  const auto anchor_vec = vec(result.rows[anchor_row]);

  std::vector<double> dist(result.rows.size());
  for (std::size_t i = 0; i < result.rows.size(); ++i)
    dist[i] = i == anchor_row ? 0.0 : cosine_distance(anchor_vec, vec(result.rows[i]));

  std::vector<std::size_t> order(result.rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (a == anchor_row || b == anchor_row) return a == anchor_row && b != anchor_row;
    if (dist[a] != dist[b]) return dist[a] < dist[b];
    return result.rows[a].display.sentence_id < result.rows[b].display.sentence_id;
  });

  RetrievalResult out;
  out.query_echo = result.query_echo;
  for (std::size_t i : order) {
    out.rows.push_back(result.rows[i]);
    out.anchor_distances.push_back(dist[i]);
  }
  return out;
}

TooltipContext sentence_context(std::string_view sentence_id, const Corpus& corpus) {
  const SentenceRecord* r = corpus.find(sentence_id);
  if (r == nullptr) throw Error(ErrorCode::kNotFound, "unknown sentence id: " + std::string(sentence_id));
  const Document* doc = corpus.find_document(r->doc_id);
  TooltipContext ctx;
  ctx.sentence_id = r->sentence_id;
  ctx.paper_title = doc ? doc->title : std::string();
  ctx.paper_url = doc ? doc->url : std::nullopt;
  ctx.section_path = r->section_path;
  ctx.prev_text = r->prev_text;
  ctx.next_text = r->next_text;
  ctx.citations = r->citations;
  return ctx;
}

}  // namespace cstudio
