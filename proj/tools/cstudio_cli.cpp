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

// cstudio: headless operator tool over the C API.
//
//   cstudio ingest --corpus A.md B.md --out corpus.jsonl
//   cstudio index  --corpus corpus.jsonl --provider local --mode approx --out corpus.csix
//   cstudio pdc    --corpus corpus.jsonl [--n 1000] [--out pdc.json]
//   cstudio query  --corpus corpus.jsonl [--index corpus.csix] --title T --text P
//                  [--offset O] [--k K] [--render color|grey|plain]
//   cstudio export-notes --store notes.jsonl [--out notes.csv]
//   cstudio serve  --config studio.toml [--port P]
//
// Output is line-delimited JSON unless --pretty is given. Exit codes: 0 ok,
// 1 usage error, 2 data error.

#include <corpus_studio.h>

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

using json = nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Raised for anything wrong with the inputs rather than the command line.
struct DataError {
  std::string message;
};

void check(cs_status st, const std::string& context) {
  if (st == CS_OK) return;
  std::string msg = context.empty() ? "" : context + ": ";
  throw DataError{msg + cs_status_name(st) + ": " + cs_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  cs_string_free(s);
  return out;
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() {
    if (p) Free(p);
  }
};

using CorpusH = Handle<cs_corpus, cs_corpus_free>;
using ProviderH = Handle<cs_provider, cs_provider_free>;
using IndexH = Handle<cs_index, cs_index_free>;
using EngineH = Handle<cs_engine, cs_engine_free>;
using NotebookH = Handle<cs_notebook, cs_notebook_free>;
using ServerH = Handle<cs_server, cs_server_free>;

void require_files(const std::vector<std::string>& paths) {
  for (const auto& p : paths)
    if (!std::filesystem::is_regular_file(p)) throw DataError{"no such file: " + p};
}

struct Options {
  std::vector<std::string> corpus;
  std::string out;
  std::string provider = "local";
  std::string mode = "exact";
  int k = -1;
  int offset = 0;
  std::string title;
  std::string text;
  std::string render = "color";
  bool pretty = false;
  std::string index;
  std::string store;
  int n = -1;
  std::string config;
  int port = -1;
  int dim = 256;
};

std::string render_json(const json& j, bool pretty) { return pretty ? j.dump(2) : j.dump(); }

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError{"cannot write " + out_path};
  f << text;
  if (!f) throw DataError{"cannot write " + out_path};
}

void load_corpus(const Options& o, CorpusH& c) {
  require_files(o.corpus);
  std::vector<const char*> paths;
  for (const auto& p : o.corpus) paths.push_back(p.c_str());
  check(cs_corpus_load(paths.data(), paths.size(), &c.p), "loading corpus");
}

// Remote settings come from the environment so credentials never appear on
// the command line.
void make_provider(const Options& o, ProviderH& p) {
  if (o.provider == "local") {
    check(cs_provider_create_local(static_cast<uint32_t>(o.dim), &p.p), "provider");
    return;
  }
  auto env = [](const char* name) -> std::string {
    const char* v = std::getenv(name);
    if (!v || !*v) throw DataError{std::string("remote provider needs ") + name};
    return v;
  };
  json cfg = {{"base_url", env("CSTUDIO_EMBED_URL")},
              {"model", env("CSTUDIO_EMBED_MODEL")},
              {"expected_dim", std::stoul(env("CSTUDIO_EMBED_DIM"))}};
  check(cs_provider_create_remote(cfg.dump().c_str(), &p.p), "provider");
}

cs_engine_config engine_config(const Options& o, uint32_t dim) {
  cs_engine_config c;
  cs_engine_config_default(&c);
  c.embedding_dim = dim;
  if (o.k >= 0) c.k_results = static_cast<uint32_t>(o.k);
  if (o.n >= 0) c.n_titles_clustered = static_cast<uint32_t>(o.n);
  return c;
}

int cmd_ingest(const Options& o) {
  CorpusH c;
  load_corpus(o, c);
  char* jsonl = nullptr;
  check(cs_corpus_to_jsonl(c.p, &jsonl), "serializing corpus");
  emit(take(jsonl), o.out);
  if (!o.out.empty()) {
    json summary = {{"out", o.out},
                    {"documents", cs_corpus_document_count(c.p)},
                    {"sentences", cs_corpus_sentence_count(c.p)}};
    std::cout << render_json(summary, o.pretty) << "\n";
  }
  return 0;
}

int cmd_index(const Options& o) {
  CorpusH c;
  load_corpus(o, c);
  ProviderH p;
  make_provider(o, p);
  cs_index_params params;
  cs_index_params_default(&params);
  params.mode = o.mode == "exact" ? CS_INDEX_EXACT : CS_INDEX_APPROXIMATE;
  IndexH idx;
  check(cs_index_build(c.p, p.p, &params, &idx.p), "building index");
  check(cs_index_save(idx.p, o.out.c_str()), o.out);
  json summary = {{"out", o.out},
                  {"mode", o.mode},
                  {"size", cs_index_size(idx.p)},
                  {"dim", cs_index_dim(idx.p)}};
  std::cout << render_json(summary, o.pretty) << "\n";
  return 0;
}

int cmd_pdc(const Options& o) {
  CorpusH c;
  load_corpus(o, c);
  cs_engine_config cfg = engine_config(o, 256);
  char* out = nullptr;
  check(cs_pdc_compute(c.p, &cfg, &out), "pdc");
  emit(render_json(json::parse(take(out)), o.pretty) + "\n", o.out);
  return 0;
}

// One line per result row; each row carries its own annotation groups.
int cmd_query(const Options& o) {
  CorpusH c;
  load_corpus(o, c);
  ProviderH p;
  make_provider(o, p);
  IndexH idx;
  if (!o.index.empty()) {
    require_files({o.index});
    check(cs_index_load(o.index.c_str(), &idx.p), o.index);
  } else {
    cs_index_params params;
    cs_index_params_default(&params);
    params.mode = o.mode == "exact" ? CS_INDEX_EXACT : CS_INDEX_APPROXIMATE;
    check(cs_index_build(c.p, p.p, &params, &idx.p), "building index");
  }
  cs_engine_config cfg = engine_config(o, cs_provider_dim(p.p));
  EngineH e;
  check(cs_engine_create(c.p, idx.p, p.p, &cfg, &e.p), "engine");

  json req = {{"section_title", o.title},
              {"paragraph_text", o.text},
              {"offset", o.offset},
              {"mode", o.render}};
  if (o.k >= 0) req["k"] = o.k;
  char* out = nullptr;
  check(cs_retrieve(e.p, req.dump().c_str(), &out), "query");
  json resp = json::parse(take(out));

  std::string text;
  for (const auto& row : resp["rows"]) {
    json line = row;
    json groups = json::array();
    for (const auto& g : resp["annotations"])
      if (g["row"] == row["row"]) groups.push_back(g);
    line["annotations"] = std::move(groups);
    text += render_json(line, o.pretty) + "\n";
  }
  emit(text, o.out);
  return 0;
}

int cmd_export_notes(const Options& o) {
  require_files({o.store});
  NotebookH nb;
  check(cs_notebook_open(o.store.c_str(), &nb.p), o.store);
  char* csv = nullptr;
  size_t len = 0;
  check(cs_notebook_export_csv(nb.p, &csv, &len), "export");
  emit(take(csv), o.out);
  return 0;
}

cs_server* g_server = nullptr;

void on_signal(int) {
  if (g_server) cs_server_stop(g_server);
}

int cmd_serve(const Options& o) {
  require_files({o.config});
  ServerH s;
  check(cs_server_create_from_config(o.config.c_str(), o.port, &s.p), o.config);
  g_server = s.p;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  json ready = {{"listening", cs_server_port(s.p)}};
  std::cout << ready.dump() << std::endl;
  check(cs_server_run(s.p), "serve");
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus studio operator tool"};
  app.require_subcommand(1);
  Options o;

  auto corpus_opt = [&](CLI::App* sub) {
    return sub->add_option("--corpus", o.corpus, "Corpus files (.md or .jsonl)")
        ->required()
        ->expected(1, -1);
  };
  auto pretty = [&](CLI::App* sub) { sub->add_flag("--pretty", o.pretty, "Indented JSON"); };
  auto provider_opts = [&](CLI::App* sub) {
    sub->add_option("--provider", o.provider, "Embedding provider")
        ->check(CLI::IsMember({"local", "remote"}));
    sub->add_option("--mode", o.mode, "Index mode")->check(CLI::IsMember({"exact", "approx"}));
  };

  auto* ingest = app.add_subcommand("ingest", "Parse and validate a corpus, write JSON lines");
  corpus_opt(ingest);
  ingest->add_option("--out", o.out, "Output corpus .jsonl (stdout if omitted)");
  pretty(ingest);

  auto* index = app.add_subcommand("index", "Embed a corpus and save a vector index");
  corpus_opt(index);
  provider_opts(index);
  index->add_option("--out", o.out, "Output index file")->required();
  pretty(index);

  auto* pdc = app.add_subcommand("pdc", "Cluster section titles");
  corpus_opt(pdc);
  pdc->add_option("--n", o.n, "Number of titles to cluster")->check(CLI::NonNegativeNumber);
  pdc->add_option("--out", o.out, "Output file (stdout if omitted)");
  pretty(pdc);

  auto* query = app.add_subcommand("query", "Retrieve sentences for a cursor context");
  corpus_opt(query);
  provider_opts(query);
  query->add_option("--index", o.index, "Saved index (built in memory if omitted)");
  query->add_option("--title", o.title, "Section title")->required();
  query->add_option("--text", o.text, "Paragraph text")->required();
  query->add_option("--offset", o.offset, "Sentence offset")->check(CLI::NonNegativeNumber);
  query->add_option("--k", o.k, "Result rows")->check(CLI::PositiveNumber);
  query->add_option("--render", o.render, "Annotation mode")
      ->check(CLI::IsMember({"color", "grey", "plain"}));
  query->add_option("--out", o.out, "Output file (stdout if omitted)");
  pretty(query);

  auto* export_notes = app.add_subcommand("export-notes", "Export bookmarks and notes as CSV");
  export_notes->add_option("--store", o.store, "Notebook journal")->required();
  export_notes->add_option("--out", o.out, "Output CSV (stdout if omitted)");

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--config", o.config, "Server config file")->required();
  serve->add_option("--port", o.port, "Override the configured port (0 = any)")
      ->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(o);
    if (*index) return cmd_index(o);
    if (*pdc) return cmd_pdc(o);
    if (*query) return cmd_query(o);
    if (*export_notes) return cmd_export_notes(o);
    if (*serve) return cmd_serve(o);
  } catch (const DataError& e) {
    std::cerr << "cstudio: " << e.message << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "cstudio: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
