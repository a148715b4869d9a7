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

#ifndef CORPUS_STUDIO_H_
#define CORPUS_STUDIO_H_

/*
 * C interface to the corpus studio engine.
 *
 * All objects are opaque handles created by a create, load or open call and
 * released with the matching free function. Every fallible call returns a cs_status;
 * on failure cs_last_error() describes the problem for the calling thread.
 * Strings returned through char** out-parameters are heap-allocated UTF-8 and
 * must be released with cs_string_free.
 *
 * Structured results (PDC clusters, retrieval rows, tooltips, bookmarks) are
 * returned as JSON text using the same schemas as the HTTP API.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(CSTUDIO_BUILDING_LIBRARY)
#define CS_API __declspec(dllexport)
#else
#define CS_API __declspec(dllimport)
#endif
#else
#define CS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cs_status {
  CS_OK = 0,
  CS_ERR_INVALID_ARGUMENT = 1,
  CS_ERR_NOT_FOUND = 2,
  CS_ERR_CONFLICT = 3,
  CS_ERR_CONFIG = 4,
  CS_ERR_IO = 5,
  CS_ERR_PARSE = 6,
  CS_ERR_TRANSPORT = 7,
  CS_ERR_INTERNAL = 8
} cs_status;

CS_API const char* cs_version(void);
CS_API const char* cs_status_name(cs_status status);
/* Message for the last failed call on this thread; "" if none. */
CS_API const char* cs_last_error(void);
CS_API void cs_string_free(char* s);

/* ---- Corpus ------------------------------------------------------------ */

typedef struct cs_corpus cs_corpus;

/* Files ending in .jsonl/.ndjson are JSON lines; others are markdown-like. */
CS_API cs_status cs_corpus_load(const char* const* paths, size_t n_paths, cs_corpus** out);
CS_API void cs_corpus_free(cs_corpus* corpus);
CS_API size_t cs_corpus_document_count(const cs_corpus* corpus);
CS_API size_t cs_corpus_sentence_count(const cs_corpus* corpus);
/* One Document per line. */
CS_API cs_status cs_corpus_to_jsonl(const cs_corpus* corpus, char** out);
/* {sentence_id, paper_title, paper_url, section_path, prev_text, next_text, citations} */
CS_API cs_status cs_corpus_sentence_context(const cs_corpus* corpus, const char* sentence_id,
                                            char** out_json);

/* ---- Engine configuration ---------------------------------------------- */

typedef struct cs_engine_config {
  uint32_t k_results;          /* 25 */
  uint32_t n_titles_clustered; /* 1000 */
  uint32_t n_colors;           /* 20 */
  double pdc_alpha;            /* 0.7 */
  double pdc_cut;              /* 0.35 */
  uint32_t embedding_dim;      /* 256 */
  uint32_t ef_search;          /* 64 */
} cs_engine_config;

CS_API void cs_engine_config_default(cs_engine_config* config);

/* PdcResult JSON for the corpus. config may be NULL for defaults. */
CS_API cs_status cs_pdc_compute(const cs_corpus* corpus, const cs_engine_config* config,
                                char** out_json);

/* ---- Embedding providers ----------------------------------------------- */

typedef struct cs_provider cs_provider;

CS_API cs_status cs_provider_create_local(uint32_t dim, cs_provider** out);
/* config_json: {base_url, model, expected_dim, path?, api_key_env?,
 *               max_batch?, max_retries?, initial_backoff_ms?, timeout_s?} */
CS_API cs_status cs_provider_create_remote(const char* config_json, cs_provider** out);
CS_API void cs_provider_free(cs_provider* provider);
CS_API uint32_t cs_provider_dim(const cs_provider* provider);

/* ---- Vector index ------------------------------------------------------ */

typedef struct cs_index cs_index;

typedef enum cs_index_mode { CS_INDEX_EXACT = 0, CS_INDEX_APPROXIMATE = 1 } cs_index_mode;

typedef struct cs_index_params {
  cs_index_mode mode;
  uint32_t m;               /* 16 */
  uint32_t ef_construction; /* 200 */
  uint64_t seed;
} cs_index_params;

CS_API void cs_index_params_default(cs_index_params* params);
CS_API cs_status cs_index_build(const cs_corpus* corpus, const cs_provider* provider,
                                const cs_index_params* params, cs_index** out);
CS_API cs_status cs_index_save(const cs_index* index, const char* path);
CS_API cs_status cs_index_load(const char* path, cs_index** out);
CS_API void cs_index_free(cs_index* index);
CS_API size_t cs_index_size(const cs_index* index);
CS_API uint32_t cs_index_dim(const cs_index* index);
CS_API cs_index_mode cs_index_get_mode(const cs_index* index);

/* ---- Engine: retrieval ------------------------------------------------- */

typedef struct cs_engine cs_engine;

/* The engine keeps its own references; the inputs may be freed afterwards. */
CS_API cs_status cs_engine_create(const cs_corpus* corpus, const cs_index* index,
                                  const cs_provider* provider, const cs_engine_config* config,
                                  cs_engine** out);
CS_API void cs_engine_free(cs_engine* engine);
/* request: {section_title, paragraph_text, offset?, mode?: "color"|"grey"|"plain", k?}
 * response: {query, mode, rows:[...], annotations:[...], result_token, color_map?} */
CS_API cs_status cs_retrieve(const cs_engine* engine, const char* request_json, char** out_json);
/* request: {result_token, anchor_row, mode?}; response as cs_retrieve. */
CS_API cs_status cs_rerank(const cs_engine* engine, const char* request_json, char** out_json);

/* ---- Notebook ---------------------------------------------------------- */

typedef struct cs_notebook cs_notebook;

/* journal_path NULL or "" keeps the notebook in memory. */
CS_API cs_status cs_notebook_open(const char* journal_path, cs_notebook** out);
CS_API void cs_notebook_free(cs_notebook* notebook);
CS_API cs_status cs_notebook_add_bookmark(cs_notebook* notebook, const cs_corpus* corpus,
                                          const char* sentence_id, char** out_json);
CS_API cs_status cs_notebook_remove_bookmark(cs_notebook* notebook, const char* bookmark_id);
CS_API cs_status cs_notebook_upsert_note(cs_notebook* notebook, const char* bookmark_id,
                                         const char* text, char** out_json);
CS_API cs_status cs_notebook_list(const cs_notebook* notebook, char** out_json);
/* RFC 4180 CSV; *out_len receives the byte length (may be NULL). */
CS_API cs_status cs_notebook_export_csv(const cs_notebook* notebook, char** out_csv,
                                        size_t* out_len);

/* ---- HTTP server ------------------------------------------------------- */

typedef struct cs_server cs_server;

/* Loads the TOML-like config, ingests the corpus, loads or builds the index
 * and binds host:port. port_override >= 0 replaces the configured port
 * (0 picks a free port). */
CS_API cs_status cs_server_create_from_config(const char* config_path, int port_override,
                                              cs_server** out);
/* notebook may be NULL (in-memory). */
CS_API cs_status cs_server_create(const cs_engine* engine, cs_notebook* notebook,
                                  const char* host, int port, cs_server** out);
CS_API int cs_server_port(const cs_server* server);
/* Blocks until cs_server_stop is called from another thread. */
CS_API cs_status cs_server_run(cs_server* server);
/* Serves on a background thread and returns once accepting. */
CS_API cs_status cs_server_start(cs_server* server);
CS_API void cs_server_stop(cs_server* server);
CS_API void cs_server_free(cs_server* server);

#ifdef __cplusplus
}
#endif

#endif /* CORPUS_STUDIO_H_ */
