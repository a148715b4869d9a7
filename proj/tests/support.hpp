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

#ifndef CSTUDIO_TESTS_SUPPORT_HPP_
#define CSTUDIO_TESTS_SUPPORT_HPP_

// Fixture loading, synthetic corpora and brute-force oracles shared by the
// unit and acceptance tests. The oracles deliberately avoid the library's
// own helpers so they can disagree with it.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cstudio/ingest.hpp"
#include "cstudio/model.hpp"

namespace cstudio::testing {

inline std::filesystem::path fixture_dir() { return CSTUDIO_FIXTURES; }

inline std::vector<std::filesystem::path> fixture_papers() {
  auto d = fixture_dir() / "corpus";
  return {d / "paper_a.md", d / "paper_b.md", d / "paper_c.md"};
}

inline std::vector<Document> load_fixture_documents() {
  std::vector<CorpusSourceFile> files;
  for (const auto& p : fixture_papers()) files.push_back({p, SourceFormat::kMarkdown});
  return parse_corpus(files);
}

inline std::shared_ptr<const Corpus> load_fixture_corpus() {
  return std::make_shared<const Corpus>(load_fixture_documents());
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f << s;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("cstudio-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// ---- document construction

struct SectionSpec {
  std::string title;
  std::vector<std::string> sentences;
  std::vector<SectionSpec> subsections;
};

inline Section make_section(const SectionSpec& def, int level) {
  Section s;
  s.title = def.title;
  s.level = level;
  for (const auto& t : def.sentences) {
    SentenceRecord r;
    r.text = t;
    s.sentences.push_back(std::move(r));
  }
  for (const auto& sub : def.subsections) s.subsections.push_back(make_section(sub, level + 1));
  return s;
}

inline Document make_document(const std::string& doc_id, const std::vector<SectionSpec>& sections,
                              const std::string& title = "Untitled") {
  Document d;
  d.doc_id = doc_id;
  d.title = title;
  d.venue = "TEST";
  d.year = 2024;
  for (const auto& s : sections) d.sections.push_back(make_section(s, 1));
  attach_sentence_metadata(d);
  return d;
}

// ---- synthetic corpora

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "study",   "participants", "system",   "design",  "model",    "data",     "results",
      "method",  "users",        "task",     "writing", "paper",    "section",  "analysis",
      "we",      "the",          "of",       "and",     "a",        "to",       "in",
      "interface", "corpus",     "examples", "novice",  "expert",   "sentence", "retrieval",
      "index",   "vector",       "cluster",  "title",   "survey",   "interview", "prototype",
      "feedback", "evaluation",  "baseline", "accuracy", "latency", "tool",     "norms",
      "community", "genre",      "draft",    "revision", "reader",  "author",   "venue"};
  return words;
}

inline std::string random_sentence(std::mt19937_64& rng, std::size_t min_words = 4,
                                   std::size_t max_words = 12) {
  const auto& v = vocabulary();
  std::uniform_int_distribution<std::size_t> len(min_words, max_words);
  std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
  std::string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    std::string w = v[pick(rng)];
    if (i == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    if (i) s += ' ';
    s += w;
  }
  s += " " + std::to_string(pick(rng) * 1000 + pick(rng)) + ".";
  return s;
}

// `n_docs` papers, each with top-level sections drawn from `titles`,
// together holding about `n_sentences` sentences.
inline std::vector<Document> synthetic_corpus(std::size_t n_docs, std::size_t n_sentences,
                                              std::uint64_t seed) {
  static const std::vector<std::string> titles = {"Introduction", "Related Work", "Method",
                                                  "Participants", "Results",      "Discussion",
                                                  "Limitations",  "Conclusion"};
  std::mt19937_64 rng(seed);
  std::vector<Document> docs;
  const std::size_t per_doc = std::max<std::size_t>(1, n_sentences / n_docs);
  std::size_t made = 0;
  for (std::size_t d = 0; d < n_docs; ++d) {
    const std::size_t want = d + 1 == n_docs ? n_sentences - made : per_doc;
    std::vector<SectionSpec> secs;
    std::size_t left = want;
    std::size_t t = 0;
    while (left > 0) {
      std::uniform_int_distribution<std::size_t> sz(1, 8);
      const std::size_t n = std::min(left, sz(rng));
      SectionSpec s{titles[t % titles.size()] + (t >= titles.size() ? " " + std::to_string(t) : ""),
                    {},
                    {}};
      for (std::size_t i = 0; i < n; ++i) s.sentences.push_back(random_sentence(rng));
      secs.push_back(std::move(s));
      left -= n;
      ++t;
    }
    made += want;
    docs.push_back(make_document("doc" + std::to_string(d), secs, "Paper " + std::to_string(d)));
  }
  return docs;
}

// ---- oracles

namespace oracle {

// Lowercased runs of ASCII letters/digits; bytes >= 0x80 join words.
inline std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : s) {
    const bool word = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                      (c >= 'A' && c <= 'Z') || c >= 0x80;
    if (word) {
      cur += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::set<std::string> token_set(const std::string& s) {
  auto t = tokens(s);
  return {t.begin(), t.end()};
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

inline double cosine(const std::vector<float>& u, const std::vector<float>& v) {
  double dot = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += static_cast<double>(u[i]) * v[i];
    uu += static_cast<double>(u[i]) * u[i];
    vv += static_cast<double>(v[i]) * v[i];
  }
  return std::clamp(1.0 - dot / std::sqrt(uu * vv), 0.0, 2.0);
}

// Full scan sorted by (distance, id), first k.
inline std::vector<std::pair<std::string, double>> brute_knn(
    const std::map<std::string, std::vector<float>>& vectors, const std::vector<float>& q,
    std::size_t k) {
  std::vector<std::pair<std::string, double>> all;
  for (const auto& [id, v] : vectors) all.emplace_back(id, cosine(q, v));
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.second < b.second || (a.second == b.second && a.first < b.first);
  });
  if (all.size() > k) all.resize(k);
  return all;
}

// Every token occurrence over the given texts, stopwords removed, ranked by
// count descending then lexicographically.
inline std::vector<std::string> top_words(const std::vector<std::string>& texts,
                                          const std::unordered_set<std::string>& stop,
                                          std::size_t n) {
  std::map<std::string, std::size_t> count;
  for (const auto& t : texts)
    for (const auto& w : tokens(t))
      if (!stop.count(w)) ++count[w];
  std::vector<std::pair<std::string, std::size_t>> v(count.begin(), count.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a.second > b.second || (a.second == b.second && a.first < b.first);
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size() && i < n; ++i) out.push_back(v[i].first);
  return out;
}

// For each text, the set of token indices whose token appeared in an earlier
// text: quadratic walk over all predecessors.
inline std::vector<std::vector<std::size_t>> grey_indices(const std::vector<std::string>& texts) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto toks = tokens(texts[i]);
    std::vector<std::size_t> g;
    for (std::size_t t = 0; t < toks.size(); ++t) {
      bool seen = false;
      for (std::size_t j = 0; j < i && !seen; ++j)
        for (const auto& w : tokens(texts[j]))
          if (w == toks[t]) {
            seen = true;
            break;
          }
      if (seen) g.push_back(t);
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace oracle

}  // namespace cstudio::testing

#endif  // CSTUDIO_TESTS_SUPPORT_HPP_
