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

#ifndef CSTUDIO_SERIALIZE_HPP_
#define CSTUDIO_SERIALIZE_HPP_

#include <json.hpp>

#include "cstudio/model.hpp"

namespace cstudio {

using json = nlohmann::json;

void to_json(json& j, const CitationRef& c);
void from_json(const json& j, CitationRef& c);
void to_json(json& j, const SentenceRecord& r);
void from_json(const json& j, SentenceRecord& r);
void to_json(json& j, const Section& s);
void from_json(const json& j, Section& s);
void to_json(json& j, const Document& d);
void from_json(const json& j, Document& d);

// Compact form shown in API rows: id, text, doc_id, section_path.
json sentence_brief(const SentenceRecord& r);

}  // namespace cstudio

#endif  // CSTUDIO_SERIALIZE_HPP_
