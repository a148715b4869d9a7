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

#ifndef CSTUDIO_SERVER_CONFIG_HPP_
#define CSTUDIO_SERVER_CONFIG_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cstudio/embed.hpp"
#include "cstudio/index.hpp"
#include "cstudio/model.hpp"

namespace cstudio {

class Engine;

// Key/value configuration in a TOML subset:
//
//   corpus = ["papers/a.md", "papers/b.md"]
//   index_path = "corpus.csix"     # optional; built at startup when absent
//   index_mode = "exact"           # or "approx"
//   provider = "local"             # or "remote"
//   k_results = 25
//   notebook_path = "notes.jsonl"
//   port = 8080
//   [hnsw]
//   m = 16
//   [remote]
//   base_url = "https://embeddings.example.com"
//   model = "text-embed"
//
// Relative paths resolve against the config file's directory.
struct ServerConfig {
  std::vector<std::filesystem::path> corpus_paths;
  std::optional<std::filesystem::path> index_path;
  IndexMode index_mode = IndexMode::kExact;
  HnswParams hnsw;
  std::string provider = "local";
  RemoteConfig remote;
  EngineConfig engine;
  std::optional<std::filesystem::path> notebook_path;
  std::string host = "127.0.0.1";
  int port = 8080;
};

ServerConfig parse_server_config(std::string_view text, const std::filesystem::path& base_dir);
ServerConfig load_server_config(const std::filesystem::path& path);

std::shared_ptr<const EmbeddingProvider> make_provider(const ServerConfig& config);

// Ingests the corpus and loads (or builds) the index. A configured index
// file that does not exist is a startup error.
std::shared_ptr<const Engine> load_engine(const ServerConfig& config);

}  // namespace cstudio

#endif  // CSTUDIO_SERVER_CONFIG_HPP_
