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

#include "cstudio/model.hpp"

#include <set>

#include "cstudio/errors.hpp"
#include "cstudio/text.hpp"

namespace cstudio {

void EngineConfig::validate() const {
  if (k_results < 1) throw Error(ErrorCode::kConfig, "k_results must be >= 1");
  if (n_colors < 1) throw Error(ErrorCode::kConfig, "n_colors must be >= 1");
  if (n_titles_clustered < 1) throw Error(ErrorCode::kConfig, "n_titles_clustered must be >= 1");
  if (!(pdc_alpha >= 0.0 && pdc_alpha <= 1.0))
    throw Error(ErrorCode::kConfig, "pdc_alpha must be in [0, 1]");
  if (!(pdc_cut >= 0.0 && pdc_cut <= 1.0))
    throw Error(ErrorCode::kConfig, "pdc_cut must be in [0, 1]");
  if (embedding_dim < 8) throw Error(ErrorCode::kConfig, "embedding_dim must be >= 8");
  if (ef_search < 1) throw Error(ErrorCode::kConfig, "ef_search must be >= 1");
}

std::string make_sentence_id(std::string_view doc_id, std::size_t section_idx,
                             std::size_t sentence_idx) {
  std::string id(doc_id);
  id += '#';
  id += std::to_string(section_idx);
  id += '#';
  id += std::to_string(sentence_idx);
  return id;
}

namespace {

void collect_preorder(const Section& s, std::vector<const Section*>& out) {
  out.push_back(&s);
  for (const auto& sub : s.subsections) collect_preorder(sub, out);
}

class DocumentValidator {
 public:
  explicit DocumentValidator(const Document& doc) : doc_(doc) {}

  std::vector<Violation> run() {
    if (doc_.doc_id.empty()) add("Document.doc_id", "non_empty", "document");
    if (doc_.sections.empty()) add("Document.sections", "non_empty", doc_.doc_id);
    std::vector<std::string> path;
    for (const auto& s : doc_.sections) check_section(s, 1, path);
    return std::move(out_);
  }

 private:
  void add(std::string field, std::string rule, std::string where) {
    out_.push_back(Violation{std::move(field), std::move(rule), std::move(where)});
  }

  void check_section(const Section& s, int expected_level, std::vector<std::string>& path) {
    const std::string where = doc_.doc_id + " section " + std::to_string(section_idx_);
    const bool bad_title = s.title.empty() || text::trim(s.title) != s.title;
    if (bad_title) add("Section.title", "non_empty_trimmed", where);
    if (s.level != expected_level) add("Section.level", "parent_plus_one", where);

    path.push_back(s.title);
    bad_titles_ += bad_title ? 1 : 0;
    for (std::size_t i = 0; i < s.sentences.size(); ++i) {
      const auto& r = s.sentences[i];
      const std::string at = where + " sentence " + std::to_string(i);
      if (r.text.empty()) add("SentenceRecord.text", "non_empty", at);
      if (r.doc_id != doc_.doc_id) add("SentenceRecord.doc_id", "matches_document", at);
      if (r.section_path.empty()) add("SentenceRecord.section_path", "non_empty", at);
      // paths under an invalid title are already covered by that violation
      else if (bad_titles_ == 0 && r.section_path != path)
        add("SentenceRecord.section_path", "matches_hierarchy", at);
      if (r.index_in_section != i) add("SentenceRecord.index_in_section", "position", at);
      if (r.sentence_id.empty() || !ids_.insert(r.sentence_id).second)
        add("SentenceRecord.sentence_id", "unique", at);

      const std::optional<std::string> want_prev =
          i == 0 ? std::nullopt : std::optional<std::string>(s.sentences[i - 1].text);
      const std::optional<std::string> want_next =
          i + 1 == s.sentences.size() ? std::nullopt
                                      : std::optional<std::string>(s.sentences[i + 1].text);
      if (r.prev_text != want_prev) add("SentenceRecord.prev_text", "linkage", at);
      if (r.next_text != want_next) add("SentenceRecord.next_text", "linkage", at);

      for (const auto& c : r.citations) {
        if (c.marker.empty() || r.text.find(c.marker) == std::string::npos)
          add("CitationRef.marker", "substring_of_text", at);
      }
    }
    ++section_idx_;
    for (const auto& sub : s.subsections) check_section(sub, expected_level + 1, path);
    path.pop_back();
    bad_titles_ -= bad_title ? 1 : 0;
  }

  const Document& doc_;
  std::vector<Violation> out_;
  std::set<std::string> ids_;
  std::size_t section_idx_ = 0;
  int bad_titles_ = 0;
};

}  // namespace

std::vector<const Section*> sections_preorder(const Document& doc) {
  std::vector<const Section*> out;
  for (const auto& s : doc.sections) collect_preorder(s, out);
  return out;
}

std::vector<Violation> validate_document(const Document& doc) {
  return DocumentValidator(doc).run();
}

std::vector<Violation> validate_corpus(const std::vector<Document>& docs) {
  std::vector<Violation> out;
  std::set<std::string> doc_ids;
  std::set<std::string> sentence_ids;
  for (const auto& d : docs) {
    auto v = validate_document(d);
    out.insert(out.end(), v.begin(), v.end());
    if (!doc_ids.insert(d.doc_id).second)
      out.push_back(Violation{"Document.doc_id", "unique_in_corpus", d.doc_id});
    for (const Section* s : sections_preorder(d)) {
      for (const auto& r : s->sentences) {
        if (!sentence_ids.insert(r.sentence_id).second)
          out.push_back(Violation{"SentenceRecord.sentence_id", "unique_in_corpus", r.sentence_id});
      }
    }
  }
  return out;
}

namespace {

void append_run(const Section& s, std::vector<const SentenceRecord*>& run) {
  for (const auto& r : s.sentences) run.push_back(&r);
  for (const auto& sub : s.subsections) append_run(sub, run);
}

}  // namespace

Corpus::Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    if (!doc_by_id_.emplace(docs_[d].doc_id, d).second)
      throw Error(ErrorCode::kConflict, "duplicate doc_id: " + docs_[d].doc_id);
    for (const auto& top : docs_[d].sections) {
      std::vector<const SentenceRecord*> run;
      append_run(top, run);
      const std::size_t run_idx = runs_.size();
      for (std::size_t p = 0; p < run.size(); ++p) {
        if (!by_id_.emplace(run[p]->sentence_id, Slot{d, run_idx, p}).second)
          throw Error(ErrorCode::kConflict, "duplicate sentence_id: " + run[p]->sentence_id);
        sentences_.push_back(run[p]);
      }
      runs_.push_back(std::move(run));
    }
  }
}

const SentenceRecord* Corpus::find(std::string_view sentence_id) const {
  auto it = by_id_.find(std::string(sentence_id));
  if (it == by_id_.end()) return nullptr;
  return runs_[it->second.run][it->second.position];
}

const Document* Corpus::find_document(std::string_view doc_id) const {
  auto it = doc_by_id_.find(std::string(doc_id));
  return it == doc_by_id_.end() ? nullptr : &docs_[it->second];
}

const SentenceRecord* Corpus::successor(std::string_view sentence_id, std::size_t steps) const {
  auto it = by_id_.find(std::string(sentence_id));
  if (it == by_id_.end()) return nullptr;
  const auto& run = runs_[it->second.run];
  const std::size_t target = it->second.position + steps;
  return target < run.size() ? run[target] : nullptr;
}

}  // namespace cstudio
