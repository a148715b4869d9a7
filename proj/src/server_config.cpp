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

#include "cstudio/server_config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "cstudio/errors.hpp"
#include "cstudio/ingest.hpp"
#include "cstudio/retrieve.hpp"
#include "cstudio/service.hpp"
#include "cstudio/text.hpp"

namespace cstudio {

namespace {

using Value = std::variant<std::string, double, bool, std::vector<std::string>>;

[[noreturn]] void config_fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kConfig, "config line " + std::to_string(line) + ": " + msg);
}

// Reads a double-quoted string starting at s[pos] == '"'; advances pos.
std::string read_quoted(std::string_view s, std::size_t& pos, std::size_t line) {
  std::string out;
  ++pos;
  while (pos < s.size() && s[pos] != '"') {
    char c = s[pos++];
    if (c == '\\') {
      if (pos >= s.size()) config_fail(line, "unterminated escape");
      const char e = s[pos++];
      switch (e) {
        case 'n': c = '\n'; break;
        case 't': c = '\t'; break;
        case '"': c = '"'; break;
        case '\\': c = '\\'; break;
        default: config_fail(line, std::string("unknown escape \\") + e);
      }
    }
    out.push_back(c);
  }
  if (pos >= s.size()) config_fail(line, "unterminated string");
  ++pos;
  return out;
}

std::string strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && quoted) {
      ++i;
    } else if (s[i] == '"') {
      quoted = !quoted;
    } else if (s[i] == '#' && !quoted) {
      return std::string(s.substr(0, i));
    }
  }
  return std::string(s);
}

Value parse_value(std::string_view raw, std::size_t line) {
  const std::string v = text::trim(raw);
  if (v.empty()) config_fail(line, "missing value");
  std::size_t pos = 0;
  if (v.front() == '"') {
    std::string s = read_quoted(v, pos, line);
    if (!text::is_blank(std::string_view(v).substr(pos))) config_fail(line, "text after string");
    return s;
  }
  if (v.front() == '[') {
    std::vector<std::string> items;
    pos = 1;
    for (;;) {
      while (pos < v.size() && (v[pos] == ' ' || v[pos] == '\t')) ++pos;
      if (pos < v.size() && v[pos] == ']') break;
      if (pos >= v.size() || v[pos] != '"') config_fail(line, "arrays hold quoted strings only");
      items.push_back(read_quoted(v, pos, line));
      while (pos < v.size() && (v[pos] == ' ' || v[pos] == '\t')) ++pos;
      if (pos < v.size() && v[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < v.size() && v[pos] == ']') break;
      config_fail(line, "malformed array");
    }
    return items;
  }
  if (v == "true") return true;
  if (v == "false") return false;
  double d = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec != std::errc() || ptr != v.data() + v.size()) config_fail(line, "cannot parse value: " + v);
  return d;
}

class Settings {
 public:
  void set(std::string key, Value v, std::size_t line) {
    if (!values_.emplace(key, std::move(v)).second) config_fail(line, "duplicate key " + key);
    lines_[key] = line;
  }

  std::optional<std::string> str(const std::string& key) {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (auto* s = std::get_if<std::string>(&*v)) return *s;
    config_fail(lines_[key], key + " must be a string");
  }

  std::optional<double> num(const std::string& key) {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (auto* d = std::get_if<double>(&*v)) return *d;
    config_fail(lines_[key], key + " must be a number");
  }

  std::optional<std::size_t> count(const std::string& key) {
    auto d = num(key);
    if (!d) return std::nullopt;
    if (*d < 0 || *d != static_cast<double>(static_cast<std::size_t>(*d)))
      config_fail(lines_[key], key + " must be a non-negative integer");
    return static_cast<std::size_t>(*d);
  }

  std::optional<std::vector<std::string>> list(const std::string& key) {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (auto* l = std::get_if<std::vector<std::string>>(&*v)) return *l;
    if (auto* s = std::get_if<std::string>(&*v)) return std::vector<std::string>{*s};
    config_fail(lines_[key], key + " must be a string or an array of strings");
  }

  void reject_leftovers() const {
    if (!values_.empty())
      config_fail(lines_.at(values_.begin()->first), "unknown key " + values_.begin()->first);
  }

 private:
  std::optional<Value> take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    Value v = std::move(it->second);
    values_.erase(it);
    return v;
  }

  std::map<std::string, Value> values_;
  std::map<std::string, std::size_t> lines_;
};

}  // namespace

ServerConfig parse_server_config(std::string_view text, const std::filesystem::path& base_dir) {
  Settings settings;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string line = text::trim(strip_comment(text.substr(pos, nl - pos)));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') config_fail(line_no, "malformed section header");
      section = text::trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) config_fail(line_no, "expected key = value");
    std::string key = text::trim(std::string_view(line).substr(0, eq));
    if (key.empty()) config_fail(line_no, "empty key");
    if (!section.empty()) key = section + "." + key;
    settings.set(std::move(key), parse_value(std::string_view(line).substr(eq + 1), line_no), line_no);
  }

  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  ServerConfig cfg;
  if (auto v = settings.list("corpus")) {
    for (const auto& p : *v) cfg.corpus_paths.push_back(resolve(p));
  }
  if (auto v = settings.str("index_path")) cfg.index_path = resolve(*v);
  if (auto v = settings.str("index_mode")) cfg.index_mode = parse_index_mode(*v);
  if (auto v = settings.count("hnsw.m")) cfg.hnsw.m = *v;
  if (auto v = settings.count("hnsw.ef_construction")) cfg.hnsw.ef_construction = *v;
  if (auto v = settings.count("hnsw.seed")) cfg.hnsw.seed = *v;
  if (auto v = settings.str("provider")) cfg.provider = *v;
  if (auto v = settings.count("embedding_dim")) cfg.engine.embedding_dim = *v;
  if (auto v = settings.count("k_results")) cfg.engine.k_results = *v;
  if (auto v = settings.count("n_titles_clustered")) cfg.engine.n_titles_clustered = *v;
  if (auto v = settings.count("n_colors")) cfg.engine.n_colors = *v;
  if (auto v = settings.num("pdc_alpha")) cfg.engine.pdc_alpha = *v;
  if (auto v = settings.num("pdc_cut")) cfg.engine.pdc_cut = *v;
  if (auto v = settings.count("ef_search")) cfg.engine.ef_search = *v;
  if (auto v = settings.str("notebook_path")) cfg.notebook_path = resolve(*v);
  if (auto v = settings.str("host")) cfg.host = *v;
  if (auto v = settings.count("port")) cfg.port = static_cast<int>(*v);
  if (auto v = settings.str("remote.base_url")) cfg.remote.base_url = *v;
  if (auto v = settings.str("remote.path")) cfg.remote.path = *v;
  if (auto v = settings.str("remote.model")) cfg.remote.model = *v;
  if (auto v = settings.str("remote.api_key_env")) cfg.remote.api_key_env = *v;
  if (auto v = settings.count("remote.max_batch")) cfg.remote.max_batch = *v;
  if (auto v = settings.count("remote.max_retries")) cfg.remote.max_retries = static_cast<int>(*v);
  if (auto v = settings.count("remote.initial_backoff_ms"))
    cfg.remote.initial_backoff = std::chrono::milliseconds(*v);
  if (auto v = settings.count("remote.timeout_s")) cfg.remote.timeout = std::chrono::seconds(*v);
  settings.reject_leftovers();

  cfg.remote.expected_dim = cfg.engine.embedding_dim;
  if (cfg.provider != "local" && cfg.provider != "remote")
    throw Error(ErrorCode::kConfig, "provider must be \"local\" or \"remote\"");
  if (cfg.port < 0 || cfg.port > 65535) throw Error(ErrorCode::kConfig, "port out of range");
  cfg.engine.validate();
  return cfg;
}

ServerConfig load_server_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_server_config(ss.str(), path.parent_path());
}

std::shared_ptr<const EmbeddingProvider> make_provider(const ServerConfig& config) {
  if (config.provider == "remote") return std::make_shared<RemoteEmbeddingProvider>(config.remote);
  return std::make_shared<LocalEmbeddingProvider>(config.engine.embedding_dim);
}

std::shared_ptr<const Engine> load_engine(const ServerConfig& config) {
  if (config.corpus_paths.empty()) throw Error(ErrorCode::kConfig, "config lists no corpus files");
  std::vector<CorpusSourceFile> files;
  for (const auto& p : config.corpus_paths) files.push_back({p, detect_format(p)});
  auto corpus = std::make_shared<const Corpus>(parse_corpus(files));
  auto provider = make_provider(config);

  std::shared_ptr<const VectorIndex> index;
  if (config.index_path) {
    if (!std::filesystem::exists(*config.index_path))
      throw Error(ErrorCode::kConfig,
                  "index file not found: " + config.index_path->string() +
                      " (build it with `cstudio index --corpus ... --out " +
                      config.index_path->string() + "`, or remove index_path to build at startup)");
    index = std::make_shared<const VectorIndex>(VectorIndex::load(*config.index_path));
  } else {
    index = std::make_shared<const VectorIndex>(
        build_corpus_index(*corpus, *provider, config.index_mode, config.hnsw));
  }
  return std::make_shared<const Engine>(corpus, index, provider, config.engine);
}

}  // namespace cstudio
