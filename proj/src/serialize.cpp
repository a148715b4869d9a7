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

#include "cstudio/serialize.hpp"

namespace cstudio {

namespace {

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& out) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    out.reset();
  } else {
    out = it->get<T>();
  }
}

json optional_to_json(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

void to_json(json& j, const CitationRef& c) {
  j = json{{"marker", c.marker}, {"authors", c.authors}, {"cited_title", c.cited_title}};
}

void from_json(const json& j, CitationRef& c) {
  c.marker = j.at("marker").get<std::string>();
  c.authors = j.value("authors", "");
  c.cited_title = j.value("cited_title", "");
}

void to_json(json& j, const SentenceRecord& r) {
  j = json{{"sentence_id", r.sentence_id},
           {"text", r.text},
           {"doc_id", r.doc_id},
           {"section_path", r.section_path},
           {"index_in_section", r.index_in_section},
           {"prev_text", optional_to_json(r.prev_text)},
           {"next_text", optional_to_json(r.next_text)},
           {"citations", r.citations}};
}

void from_json(const json& j, SentenceRecord& r) {
  if (j.is_string()) {
    r = SentenceRecord{};
    r.text = j.get<std::string>();
    return;
  }
  r.sentence_id = j.value("sentence_id", "");
  r.text = j.at("text").get<std::string>();
  r.doc_id = j.value("doc_id", "");
  r.section_path = j.value("section_path", std::vector<std::string>{});
  r.index_in_section = j.value("index_in_section", std::size_t{0});
  get_optional(j, "prev_text", r.prev_text);
  get_optional(j, "next_text", r.next_text);
  r.citations = j.value("citations", std::vector<CitationRef>{});
}

void to_json(json& j, const Section& s) {
  j = json{{"title", s.title},
           {"level", s.level},
           {"sentences", s.sentences},
           {"subsections", s.subsections}};
}

void from_json(const json& j, Section& s) {
  s.title = j.at("title").get<std::string>();
  s.level = j.value("level", 1);
  s.sentences = j.value("sentences", std::vector<SentenceRecord>{});
  s.subsections = j.value("subsections", std::vector<Section>{});
}

void to_json(json& j, const Document& d) {
  j = json{{"doc_id", d.doc_id},   {"title", d.title},
           {"venue", d.venue},     {"year", d.year},
           {"url", optional_to_json(d.url)}, {"sections", d.sections}};
}

void from_json(const json& j, Document& d) {
  d.doc_id = j.at("doc_id").get<std::string>();
  d.title = j.value("title", "");
  d.venue = j.value("venue", "");
  d.year = j.value("year", 0);
  get_optional(j, "url", d.url);
  d.sections = j.at("sections").get<std::vector<Section>>();
}

json sentence_brief(const SentenceRecord& r) {
  return json{{"sentence_id", r.sentence_id},
              {"text", r.text},
              {"doc_id", r.doc_id},
              {"section_path", r.section_path}};
}

}  // namespace cstudio
