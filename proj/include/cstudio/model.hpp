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

#ifndef CSTUDIO_MODEL_HPP_
#define CSTUDIO_MODEL_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cstudio {

struct CitationRef {
  std::string marker;  // as it appears in the sentence text
  std::string authors;
  std::string cited_title;

  bool operator==(const CitationRef&) const = default;
};

struct SentenceRecord {
  std::string sentence_id;  // "<doc_id>#<section_idx>#<sentence_idx>"
  std::string text;
  std::string doc_id;
  std::vector<std::string> section_path;  // top level first
  std::size_t index_in_section = 0;
  std::optional<std::string> prev_text;
  std::optional<std::string> next_text;
  std::vector<CitationRef> citations;

  bool operator==(const SentenceRecord&) const = default;
};

struct Section {
  std::string title;
  int level = 1;
  std::vector<SentenceRecord> sentences;
  std::vector<Section> subsections;

  bool operator==(const Section&) const = default;
};

struct Document {
  std::string doc_id;
  std::string title;
  std::string venue;
  int year = 0;
  std::optional<std::string> url;
  std::vector<Section> sections;

  bool operator==(const Document&) const = default;
};

struct EngineConfig {
  std::size_t k_results = 25;
  std::size_t n_titles_clustered = 1000;
  std::size_t n_colors = 20;
  double pdc_alpha = 0.7;
  double pdc_cut = 0.35;
  std::size_t embedding_dim = 256;
  std::size_t ef_search = 64;

  // Throws Error(kConfig) naming the first out-of-range field.
  void validate() const;
};

struct Violation {
  std::string field;  // e.g. "Section.title"
  std::string rule;   // short rule identifier
  std::string where;  // human-readable location

  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate_document(const Document& doc);

// Also checks doc_id uniqueness and sentence_id uniqueness across documents.
std::vector<Violation> validate_corpus(const std::vector<Document>& docs);

// Sections in pre-order (parents before children), as ids are assigned.
std::vector<const Section*> sections_preorder(const Document& doc);

std::string make_sentence_id(std::string_view doc_id, std::size_t section_idx,
                             std::size_t sentence_idx);

// Immutable view over a set of documents with id lookup and top-level section
// ordering. Successors cross subsection boundaries but never leave the
// top-level section a sentence belongs to.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> docs);

  Corpus(const Corpus&) = delete;
  Corpus& operator=(const Corpus&) = delete;
  Corpus(Corpus&&) noexcept = default;
  Corpus& operator=(Corpus&&) noexcept = default;

  const std::vector<Document>& documents() const { return docs_; }
  std::size_t sentence_count() const { return sentences_.size(); }

  // All sentences in document order, each document in section pre-order.
  const std::vector<const SentenceRecord*>& sentences() const { return sentences_; }

  const SentenceRecord* find(std::string_view sentence_id) const;
  const Document* find_document(std::string_view doc_id) const;

  // The sentence `steps` positions after `sentence_id` within its top-level
  // section, or nullptr if the section ends first.
  const SentenceRecord* successor(std::string_view sentence_id, std::size_t steps) const;

 private:
  struct Slot {
    std::size_t doc = 0;
    std::size_t run = 0;       // index into runs_
    std::size_t position = 0;  // index within the run
  };

  std::vector<Document> docs_;
  std::vector<const SentenceRecord*> sentences_;
  // One run per top-level section: its sentences in reading order.
  std::vector<std::vector<const SentenceRecord*>> runs_;
  std::unordered_map<std::string, Slot> by_id_;
  std::unordered_map<std::string, std::size_t> doc_by_id_;
};

}  // namespace cstudio

#endif  // CSTUDIO_MODEL_HPP_
