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

#include "corpus_studio.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "cstudio/embed.hpp"
#include "cstudio/errors.hpp"
#include "cstudio/index.hpp"
#include "cstudio/ingest.hpp"
#include "cstudio/model.hpp"
#include "cstudio/notebook.hpp"
#include "cstudio/retrieve.hpp"
#include "cstudio/serialize.hpp"
#include "cstudio/server.hpp"
#include "cstudio/server_config.hpp"
#include "cstudio/service.hpp"

using namespace cstudio;

struct cs_corpus {
  std::shared_ptr<const Corpus> corpus;
};
struct cs_provider {
  std::shared_ptr<const EmbeddingProvider> provider;
};
struct cs_index {
  std::shared_ptr<const VectorIndex> index;
};
struct cs_engine {
  std::shared_ptr<const Engine> engine;
};
struct cs_notebook {
  std::shared_ptr<NotebookStore> store;
};
struct cs_server {
  std::unique_ptr<ApiServer> server;
};

namespace {

thread_local std::string g_last_error;

cs_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument: return CS_ERR_INVALID_ARGUMENT;
    case ErrorCode::kNotFound: return CS_ERR_NOT_FOUND;
    case ErrorCode::kConflict: return CS_ERR_CONFLICT;
    case ErrorCode::kConfig: return CS_ERR_CONFIG;
    case ErrorCode::kIo: return CS_ERR_IO;
    case ErrorCode::kParse: return CS_ERR_PARSE;
    case ErrorCode::kTransport: return CS_ERR_TRANSPORT;
    case ErrorCode::kInternal: return CS_ERR_INTERNAL;
  }
  return CS_ERR_INTERNAL;
}

template <typename F>
cs_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return CS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const json::exception& e) {
    g_last_error = std::string("malformed JSON: ") + e.what();
    return CS_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CS_ERR_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw Error(ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size());
  p[s.size()] = '\0';
  return p;
}

void put(char** out, const std::string& s) {
  require(out != nullptr, "output pointer is null");
  *out = dup_string(s);
}

EngineConfig from_c(const cs_engine_config* c) {
  EngineConfig e;
  if (!c) return e;
  e.k_results = c->k_results;
  e.n_titles_clustered = c->n_titles_clustered;
  e.n_colors = c->n_colors;
  e.pdc_alpha = c->pdc_alpha;
  e.pdc_cut = c->pdc_cut;
  e.embedding_dim = c->embedding_dim;
  e.ef_search = c->ef_search;
  e.validate();
  return e;
}

json parse_request(const char* text) {
  require(text != nullptr, "request is null");
  json j = json::parse(text);
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "request must be a JSON object");
  return j;
}

}  // namespace

extern "C" {

const char* cs_version(void) { return "0.1.0"; }

const char* cs_status_name(cs_status status) {
  switch (status) {
    case CS_OK: return "ok";
    case CS_ERR_INVALID_ARGUMENT: return error_code_name(ErrorCode::kInvalidArgument);
    case CS_ERR_NOT_FOUND: return error_code_name(ErrorCode::kNotFound);
    case CS_ERR_CONFLICT: return error_code_name(ErrorCode::kConflict);
    case CS_ERR_CONFIG: return error_code_name(ErrorCode::kConfig);
    case CS_ERR_IO: return error_code_name(ErrorCode::kIo);
    case CS_ERR_PARSE: return error_code_name(ErrorCode::kParse);
    case CS_ERR_TRANSPORT: return error_code_name(ErrorCode::kTransport);
    case CS_ERR_INTERNAL: return error_code_name(ErrorCode::kInternal);
  }
  return "unknown";
}

const char* cs_last_error(void) { return g_last_error.c_str(); }

void cs_string_free(char* s) { std::free(s); }

// ---- corpus

cs_status cs_corpus_load(const char* const* paths, size_t n_paths, cs_corpus** out) {
  return guard([&] {
    require(out != nullptr, "output pointer is null");
    require(paths != nullptr || n_paths == 0, "paths is null");
    if (n_paths == 0) throw Error(ErrorCode::kInvalidArgument, "no corpus files given");
    std::vector<CorpusSourceFile> files;
    for (size_t i = 0; i < n_paths; ++i) {
      require(paths[i] != nullptr, "path is null");
      std::filesystem::path p(paths[i]);
      files.push_back({p, detect_format(p)});
    }
    auto corpus = std::make_shared<const Corpus>(parse_corpus(files));
    *out = new cs_corpus{std::move(corpus)};
  });
}

void cs_corpus_free(cs_corpus* corpus) { delete corpus; }

size_t cs_corpus_document_count(const cs_corpus* corpus) {
  return corpus ? corpus->corpus->documents().size() : 0;
}

size_t cs_corpus_sentence_count(const cs_corpus* corpus) {
  return corpus ? corpus->corpus->sentence_count() : 0;
}

cs_status cs_corpus_to_jsonl(const cs_corpus* corpus, char** out) {
  return guard([&] {
    require(corpus != nullptr, "corpus is null");
    put(out, to_jsonl(corpus->corpus->documents()));
  });
}

cs_status cs_corpus_sentence_context(const cs_corpus* corpus, const char* sentence_id,
                                     char** out_json) {
  return guard([&] {
    require(corpus != nullptr && sentence_id != nullptr, "corpus or sentence id is null");
    put(out_json, context_to_json(sentence_context(sentence_id, *corpus->corpus)).dump());
  });
}

// ---- config / pdc

void cs_engine_config_default(cs_engine_config* config) {
  if (!config) return;
  EngineConfig e;
  config->k_results = static_cast<uint32_t>(e.k_results);
  config->n_titles_clustered = static_cast<uint32_t>(e.n_titles_clustered);
  config->n_colors = static_cast<uint32_t>(e.n_colors);
  config->pdc_alpha = e.pdc_alpha;
  config->pdc_cut = e.pdc_cut;
  config->embedding_dim = static_cast<uint32_t>(e.embedding_dim);
  config->ef_search = static_cast<uint32_t>(e.ef_search);
}

cs_status cs_pdc_compute(const cs_corpus* corpus, const cs_engine_config* config,
                         char** out_json) {
  return guard([&] {
    require(corpus != nullptr, "corpus is null");
    put(out_json, pdc_to_json(compute_pdc(*corpus->corpus, from_c(config))).dump());
  });
}

// ---- providers

cs_status cs_provider_create_local(uint32_t dim, cs_provider** out) {
  return guard([&] {
    require(out != nullptr, "output pointer is null");
    *out = new cs_provider{std::make_shared<LocalEmbeddingProvider>(dim)};
  });
}

cs_status cs_provider_create_remote(const char* config_json, cs_provider** out) {
  return guard([&] {
    require(out != nullptr, "output pointer is null");
    json j = parse_request(config_json);
    RemoteConfig rc;
    rc.base_url = j.at("base_url").get<std::string>();
    rc.model = j.at("model").get<std::string>();
    rc.expected_dim = j.at("expected_dim").get<std::size_t>();
    if (j.contains("path")) rc.path = j["path"].get<std::string>();
    if (j.contains("api_key_env")) rc.api_key_env = j["api_key_env"].get<std::string>();
    if (j.contains("max_batch")) rc.max_batch = j["max_batch"].get<std::size_t>();
    if (j.contains("max_retries")) rc.max_retries = j["max_retries"].get<int>();
    if (j.contains("initial_backoff_ms"))
      rc.initial_backoff = std::chrono::milliseconds(j["initial_backoff_ms"].get<long>());
    if (j.contains("timeout_s")) rc.timeout = std::chrono::seconds(j["timeout_s"].get<long>());
    *out = new cs_provider{std::make_shared<RemoteEmbeddingProvider>(rc)};
  });
}

void cs_provider_free(cs_provider* provider) { delete provider; }

uint32_t cs_provider_dim(const cs_provider* provider) {
  return provider ? static_cast<uint32_t>(provider->provider->dim()) : 0;
}

// ---- index

void cs_index_params_default(cs_index_params* params) {
  if (!params) return;
  HnswParams h;
  params->mode = CS_INDEX_EXACT;
  params->m = static_cast<uint32_t>(h.m);
  params->ef_construction = static_cast<uint32_t>(h.ef_construction);
  params->seed = h.seed;
}

cs_status cs_index_build(const cs_corpus* corpus, const cs_provider* provider,
                         const cs_index_params* params, cs_index** out) {
  return guard([&] {
    require(corpus != nullptr && provider != nullptr, "corpus or provider is null");
    require(out != nullptr, "output pointer is null");
    cs_index_params p;
    cs_index_params_default(&p);
    if (params) p = *params;
    require(p.mode == CS_INDEX_EXACT || p.mode == CS_INDEX_APPROXIMATE, "unknown index mode");
    HnswParams h;
    h.m = p.m;
    h.ef_construction = p.ef_construction;
    h.seed = p.seed;
    auto mode = p.mode == CS_INDEX_EXACT ? IndexMode::kExact : IndexMode::kApproximate;
    auto idx = std::make_shared<const VectorIndex>(
        build_corpus_index(*corpus->corpus, *provider->provider, mode, h));
    *out = new cs_index{std::move(idx)};
  });
}

cs_status cs_index_save(const cs_index* index, const char* path) {
  return guard([&] {
    require(index != nullptr && path != nullptr, "index or path is null");
    index->index->save(path);
  });
}

cs_status cs_index_load(const char* path, cs_index** out) {
  return guard([&] {
    require(path != nullptr && out != nullptr, "path or output pointer is null");
    *out = new cs_index{std::make_shared<const VectorIndex>(VectorIndex::load(path))};
  });
}

void cs_index_free(cs_index* index) { delete index; }

size_t cs_index_size(const cs_index* index) { return index ? index->index->size() : 0; }

uint32_t cs_index_dim(const cs_index* index) {
  return index ? static_cast<uint32_t>(index->index->dim()) : 0;
}

cs_index_mode cs_index_get_mode(const cs_index* index) {
  return index && index->index->mode() == IndexMode::kApproximate ? CS_INDEX_APPROXIMATE
                                                                   : CS_INDEX_EXACT;
}

// ---- engine

cs_status cs_engine_create(const cs_corpus* corpus, const cs_index* index,
                           const cs_provider* provider, const cs_engine_config* config,
                           cs_engine** out) {
  return guard([&] {
    require(corpus && index && provider, "corpus, index or provider is null");
    require(out != nullptr, "output pointer is null");
    EngineConfig cfg = from_c(config);
    if (!config) cfg.embedding_dim = provider->provider->dim();
    *out = new cs_engine{std::make_shared<const Engine>(corpus->corpus, index->index,
                                                        provider->provider, cfg)};
  });
}

void cs_engine_free(cs_engine* engine) { delete engine; }

cs_status cs_retrieve(const cs_engine* engine, const char* request_json, char** out_json) {
  return guard([&] {
    require(engine != nullptr, "engine is null");
    put(out_json, retrieve_response(*engine->engine, parse_request(request_json)).dump());
  });
}

cs_status cs_rerank(const cs_engine* engine, const char* request_json, char** out_json) {
  return guard([&] {
    require(engine != nullptr, "engine is null");
    put(out_json, rerank_response(*engine->engine, parse_request(request_json)).dump());
  });
}

// ---- notebook

cs_status cs_notebook_open(const char* journal_path, cs_notebook** out) {
  return guard([&] {
    require(out != nullptr, "output pointer is null");
    std::filesystem::path p = journal_path ? journal_path : "";
    *out = new cs_notebook{std::make_shared<NotebookStore>(p)};
  });
}

void cs_notebook_free(cs_notebook* notebook) { delete notebook; }

cs_status cs_notebook_add_bookmark(cs_notebook* notebook, const cs_corpus* corpus,
                                   const char* sentence_id, char** out_json) {
  return guard([&] {
    require(notebook && corpus && sentence_id, "notebook, corpus or sentence id is null");
    Bookmark b = notebook->store->add_bookmark(sentence_id, *corpus->corpus);
    std::string body = bookmark_to_json(b, notebook->store->note_for(b.bookmark_id)).dump();
    if (out_json) *out_json = dup_string(body);
  });
}

cs_status cs_notebook_remove_bookmark(cs_notebook* notebook, const char* bookmark_id) {
  return guard([&] {
    require(notebook && bookmark_id, "notebook or bookmark id is null");
    notebook->store->remove_bookmark(bookmark_id);
  });
}

cs_status cs_notebook_upsert_note(cs_notebook* notebook, const char* bookmark_id,
                                  const char* text, char** out_json) {
  return guard([&] {
    require(notebook && bookmark_id && text, "notebook, bookmark id or text is null");
    UserNote n = notebook->store->upsert_note(bookmark_id, text);
    json j = {{"note_id", n.note_id},
              {"bookmark_id", n.bookmark_id},
              {"text", n.text},
              {"updated_at", format_iso8601(n.updated_at)}};
    if (out_json) *out_json = dup_string(j.dump());
  });
}

cs_status cs_notebook_list(const cs_notebook* notebook, char** out_json) {
  return guard([&] {
    require(notebook != nullptr, "notebook is null");
    json arr = json::array();
    for (const auto& b : notebook->store->bookmarks())
      arr.push_back(bookmark_to_json(b, notebook->store->note_for(b.bookmark_id)));
    put(out_json, arr.dump());
  });
}

cs_status cs_notebook_export_csv(const cs_notebook* notebook, char** out_csv, size_t* out_len) {
  return guard([&] {
    require(notebook != nullptr, "notebook is null");
    std::string csv = notebook->store->export_csv();
    put(out_csv, csv);
    if (out_len) *out_len = csv.size();
  });
}

// ---- server

cs_status cs_server_create_from_config(const char* config_path, int port_override,
                                       cs_server** out) {
  return guard([&] {
    require(config_path != nullptr && out != nullptr, "config path or output pointer is null");
    ServerConfig cfg = load_server_config(config_path);
    if (port_override >= 0) cfg.port = port_override;
    auto engine = load_engine(cfg);
    auto store = std::make_shared<NotebookStore>(cfg.notebook_path.value_or(""));
    auto server = std::make_unique<ApiServer>(engine, store);
    server->bind(cfg.host, cfg.port);
    *out = new cs_server{std::move(server)};
  });
}

cs_status cs_server_create(const cs_engine* engine, cs_notebook* notebook, const char* host,
                           int port, cs_server** out) {
  return guard([&] {
    require(engine != nullptr && out != nullptr, "engine or output pointer is null");
    auto store = notebook ? notebook->store : std::make_shared<NotebookStore>();
    auto server = std::make_unique<ApiServer>(engine->engine, store);
    server->bind(host ? host : "127.0.0.1", port);
    *out = new cs_server{std::move(server)};
  });
}

int cs_server_port(const cs_server* server) { return server ? server->server->port() : -1; }

cs_status cs_server_run(cs_server* server) {
  return guard([&] {
    require(server != nullptr, "server is null");
    server->server->serve_forever();
  });
}

cs_status cs_server_start(cs_server* server) {
  return guard([&] {
    require(server != nullptr, "server is null");
    server->server->start();
  });
}

void cs_server_stop(cs_server* server) {
  if (server) server->server->stop();
}

void cs_server_free(cs_server* server) { delete server; }

}  // extern "C"
