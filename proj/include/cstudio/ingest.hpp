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

#ifndef CSTUDIO_INGEST_HPP_
#define CSTUDIO_INGEST_HPP_

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cstudio/model.hpp"

namespace cstudio {

enum class SourceFormat { kMarkdown, kJsonl };

struct CorpusSourceFile {
  std::filesystem::path path;
  SourceFormat format = SourceFormat::kMarkdown;
};

// `.jsonl` and `.ndjson` are JSON lines; everything else is markdown-like.
SourceFormat detect_format(const std::filesystem::path& path);

// Splits one paragraph into sentences. Any implementation (rule-based, model
// backed, ...) must return non-empty sentences whose non-whitespace content,
// concatenated, equals the paragraph's.
struct Segmenter {
  std::string name;
  std::function<std::vector<std::string>(std::string_view)> segment;
};

// Splits on . ! ? followed by whitespace and an uppercase letter or digit,
// except after a protected abbreviation or a single-letter initial.
Segmenter rule_based_segmenter();

// The frozen abbreviation table the rule-based segmenter protects.
const std::vector<std::string>& protected_abbreviations();

// Runs `seg` on `text` and enforces the segmenter contract.
std::vector<std::string> segment_paragraph(std::string_view text, const Segmenter& seg);

// Bibliography entries keyed by marker, e.g. "[12]" or "(Smith, 2020)".
using Bibliography = std::map<std::string, CitationRef>;

// Citation markers in order of first appearance, resolved against `bib`.
std::vector<CitationRef> extract_citations(std::string_view sentence, const Bibliography& bib);

Document parse_markdown(std::string_view content, const std::string& source_name,
                        const Segmenter& seg);
std::vector<Document> parse_jsonl(std::string_view content, const std::string& source_name);

// Files are parsed concurrently and merged in input order.
std::vector<Document> parse_corpus(const std::vector<CorpusSourceFile>& files,
                                   const Segmenter& seg = rule_based_segmenter());

// Fills ids, section paths, positions, prev/next links and, where a record
// has none yet, citations.
void attach_sentence_metadata(Document& doc, const Bibliography& bib = {});

// Flattened, fully-linked records in section pre-order.
std::vector<SentenceRecord> build_sentence_records(const Document& doc,
                                                   const Bibliography& bib = {});

// Serializes back to the markdown-like interchange format, one sentence per
// paragraph, so that re-parsing yields an equal Document.
std::string to_markdown(const Document& doc);

std::string to_jsonl(const std::vector<Document>& docs);

}  // namespace cstudio

#endif  // CSTUDIO_INGEST_HPP_
