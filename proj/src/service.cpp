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

#include "cstudio/service.hpp"

#include <map>

#include "cstudio/errors.hpp"
#include "cstudio/text.hpp"

namespace cstudio {

const char* render_mode_name(RenderMode m) {
  switch (m) {
    case RenderMode::kColor: return "color";
    case RenderMode::kGrey: return "grey";
    case RenderMode::kPlain: return "plain";
  }
  return "plain";
}

RenderMode parse_render_mode(std::string_view name) {
  if (name == "color") return RenderMode::kColor;
  if (name == "grey" || name == "gray") return RenderMode::kGrey;
  if (name == "plain") return RenderMode::kPlain;
  throw Error(ErrorCode::kInvalidArgument, "unknown render mode: " + std::string(name));
}

Engine::Engine(std::shared_ptr<const Corpus> corpus, std::shared_ptr<const VectorIndex> index,
               std::shared_ptr<const EmbeddingProvider> provider, EngineConfig config)
    : corpus_(std::move(corpus)), index_(std::move(index)), provider_(std::move(provider)),
      config_(config) {
  if (!corpus_ || !index_ || !provider_) throw Error(ErrorCode::kConfig, "engine is missing a component");
  config_.validate();
  if (index_->dim() != provider_->dim())
    throw Error(ErrorCode::kConfig, "index dim " + std::to_string(index_->dim()) +
                                        " does not match provider dim " +
                                        std::to_string(provider_->dim()));
  std::string all;
  for (const auto& id : index_->ids()) {
    if (corpus_->find(id) == nullptr)
      throw Error(ErrorCode::kConfig, "index entry " + id + " is not in the corpus (stale index?)");
    all += id;
    all += '\n';
  }
  fingerprint_ = seeded_hash64(all, index_->dim());
}

PdcResult compute_pdc(const Corpus& corpus, const EngineConfig& config) {
  return cluster_titles(extract_title_occurrences(corpus.documents(), config.n_titles_clustered),
                        config.pdc_alpha, config.pdc_cut);
}

json pdc_to_json(const PdcResult& result) {
  json clusters = json::array();
  for (const auto& c : result.clusters) {
    json members = json::array();
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      const auto& m = c.members[i];
      json grey = json::array();
      for (std::size_t t = 0; t < c.grey_flags[i].size(); ++t) {
        if (c.grey_flags[i][t]) grey.push_back(t);
      }
      members.push_back(json{{"title", m.title},
                             {"doc_id", m.doc_id},
                             {"position", m.position},
                             {"tokens", m.tokens},
                             {"grey_token_indices", std::move(grey)}});
    }
    clusters.push_back(json{{"name", c.name},
                            {"count", c.count},
                            {"mean_position", c.mean_position},
                            {"underline_tokens", c.underline_tokens},
                            {"members", std::move(members)}});
  }
  return json{{"total_titles", result.total_titles}, {"clusters", std::move(clusters)}};
}

json row_to_json(const RetrievedRow& row, std::size_t index) {
  return json{{"row", index},
              {"distance", row.distance},
              {"match", sentence_brief(row.match)},
              {"display", sentence_brief(row.display)},
              {"next", row.next ? sentence_brief(*row.next) : json(nullptr)}};
}

json annotations_to_json(const RetrievalResult& result, RenderMode mode, std::size_t n_colors,
                         std::vector<std::string>* color_words) {
  // Keyed by (row, column) so output order is row-major, match column first.
  std::map<std::pair<std::size_t, int>, json> groups;
  auto group_for = [&](const TokenSpan& s) -> json& {
    auto& g = groups[{s.row, static_cast<int>(s.column)}];
    if (g.is_null()) {
      g = json{{"row", s.row},
               {"column", column_name(s.column)},
               {"sentence_id", s.sentence_id},
               {"spans", json::array()}};
    }
    return g;
  };

  if (mode == RenderMode::kColor) {
    const ColorMap map = build_color_map(result, text::default_stopwords(), n_colors);
    if (color_words) *color_words = map.ranked_words;
    for (const auto& cs : colorize(result, map)) {
      group_for(cs.span)["spans"].push_back(json{{"start", cs.span.start},
                                                 {"end", cs.span.end},
                                                 {"kind", "color"},
                                                 {"color_index", cs.color_index}});
    }
  } else if (mode == RenderMode::kGrey) {
    for (Column col : {Column::kMatch, Column::kNext}) {
      for (const auto& s : grey_out(result, col).spans) {
        group_for(s)["spans"].push_back(json{{"start", s.start}, {"end", s.end}, {"kind", "grey"}});
      }
    }
  }
  json out = json::array();
  for (auto& [key, g] : groups) out.push_back(std::move(g));
  return out;
}

json context_to_json(const TooltipContext& ctx) {
  return json{{"sentence_id", ctx.sentence_id},
              {"paper_title", ctx.paper_title},
              {"paper_url", ctx.paper_url ? json(*ctx.paper_url) : json(nullptr)},
              {"section_path", ctx.section_path},
              {"prev_text", ctx.prev_text ? json(*ctx.prev_text) : json(nullptr)},
              {"next_text", ctx.next_text ? json(*ctx.next_text) : json(nullptr)},
              {"citations", ctx.citations}};
}

json bookmark_to_json(const Bookmark& b, const std::optional<UserNote>& note) {
  json j{{"bookmark_id", b.bookmark_id},
         {"sentence_id", b.sentence_id},
         {"created_at", format_iso8601(b.created_at)},
         {"sentence_text", b.snapshot.sentence_text},
         {"paper_title", b.snapshot.paper_title},
         {"paper_url", b.snapshot.paper_url ? json(*b.snapshot.paper_url) : json(nullptr)},
         {"section_path", b.snapshot.section_path},
         {"note", nullptr}};
  if (note) {
    j["note"] = json{{"note_id", note->note_id},
                     {"text", note->text},
                     {"updated_at", format_iso8601(note->updated_at)}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// Result tokens

std::string encode_result_token(const ResultToken& token) {
  const std::string payload = json{{"t", token.query.section_title},
                                   {"p", token.query.paragraph_text},
                                   {"o", token.query.offset},
                                   {"k", token.k},
                                   {"a", token.anchors},
                                   {"f", token.fingerprint}}
                                  .dump();
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "rt1.";
  out.reserve(4 + payload.size() * 2);
  for (unsigned char c : payload) {
    out.push_back(kHex[c >> 4]);
    out.push_back(kHex[c & 0xF]);
  }
  return out;
}

ResultToken decode_result_token(std::string_view token) {
  auto bad = [] { return Error(ErrorCode::kConflict, "stale or malformed result token"); };
  if (!token.starts_with("rt1.") || token.size() % 2 != 0) throw bad();
  token.remove_prefix(4);
  auto nibble = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw bad();
  };
  std::string payload;
  payload.reserve(token.size() / 2);
  for (std::size_t i = 0; i < token.size(); i += 2)
    payload.push_back(static_cast<char>(nibble(token[i]) * 16 + nibble(token[i + 1])));
  try {
    const json j = json::parse(payload);
    ResultToken t;
    t.query.section_title = j.at("t").get<std::string>();
    t.query.paragraph_text = j.at("p").get<std::string>();
    t.query.offset = j.at("o").get<std::size_t>();
    t.k = j.at("k").get<std::size_t>();
    t.anchors = j.at("a").get<std::vector<std::size_t>>();
    t.fingerprint = j.at("f").get<std::uint64_t>();
    return t;
  } catch (const json::exception&) {
    throw bad();
  }
}

namespace {

template <typename T>
T field_or(const json& request, const char* key, T fallback) {
  auto it = request.find(key);
  if (it == request.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kInvalidArgument, std::string("field '") + key + "' has the wrong type");
  }
}

json respond(const Engine& engine, const RetrievalResult& result, const ResultToken& token,
             RenderMode mode) {
  json rows = json::array();
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    json r = row_to_json(result.rows[i], i);
    if (!result.anchor_distances.empty()) r["anchor_distance"] = result.anchor_distances[i];
    rows.push_back(std::move(r));
  }
  std::vector<std::string> color_words;
  json annotations = annotations_to_json(result, mode, engine.config().n_colors, &color_words);
  json out{{"query",
            {{"section_title", result.query_echo.section_title},
             {"paragraph_text", result.query_echo.paragraph_text},
             {"offset", result.query_echo.offset}}},
           {"mode", render_mode_name(mode)},
           {"rows", std::move(rows)},
           {"annotations", std::move(annotations)},
           {"result_token", encode_result_token(token)}};
  if (mode == RenderMode::kColor) out["color_map"] = color_words;
  return out;
}

RetrievalResult replay(const Engine& engine, const ResultToken& token) {
  RetrievalResult r = spatial_retrieve(token.query, engine.index(), engine.provider(), engine.corpus(),
                                       token.k, engine.config().ef_search);
  for (std::size_t a : token.anchors) r = rerank(r, a, engine.index());
  return r;
}

}  // namespace

json retrieve_response(const Engine& engine, const json& request) {
  if (!request.is_object()) throw Error(ErrorCode::kInvalidArgument, "request body must be a JSON object");
  ResultToken token;
  token.query.section_title = field_or<std::string>(request, "section_title", "");
  token.query.paragraph_text = field_or<std::string>(request, "paragraph_text", "");
  const auto offset = field_or<long long>(request, "offset", 0);
  const auto k = field_or<long long>(request, "k", static_cast<long long>(engine.config().k_results));
  if (offset < 0) throw Error(ErrorCode::kInvalidArgument, "offset must be >= 0");
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  token.query.offset = static_cast<std::size_t>(offset);
  token.k = static_cast<std::size_t>(k);
  token.fingerprint = engine.fingerprint();
  const RenderMode mode = parse_render_mode(field_or<std::string>(request, "mode", "color"));
  return respond(engine, replay(engine, token), token, mode);
}

json rerank_response(const Engine& engine, const json& request) {
  if (!request.is_object()) throw Error(ErrorCode::kInvalidArgument, "request body must be a JSON object");
  const auto raw = field_or<std::string>(request, "result_token", "");
  if (raw.empty()) throw Error(ErrorCode::kInvalidArgument, "result_token is required");
  ResultToken token = decode_result_token(raw);
  if (token.fingerprint != engine.fingerprint())
    throw Error(ErrorCode::kConflict, "result token was issued for a different index; retrieve again");
  const auto anchor = field_or<long long>(request, "anchor_row", -1);
  if (anchor < 0) throw Error(ErrorCode::kInvalidArgument, "anchor_row is required and must be >= 0");
  const RenderMode mode = parse_render_mode(field_or<std::string>(request, "mode", "color"));

  RetrievalResult current = replay(engine, token);
  RetrievalResult next = rerank(current, static_cast<std::size_t>(anchor), engine.index());
  token.anchors.push_back(static_cast<std::size_t>(anchor));
  return respond(engine, next, token, mode);
}

}  // namespace cstudio
