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

#ifndef CSTUDIO_TESTS_ENGINE_FIXTURE_HPP_
#define CSTUDIO_TESTS_ENGINE_FIXTURE_HPP_

#include <memory>

#include "cstudio/retrieve.hpp"
#include "cstudio/service.hpp"
#include "support.hpp"

namespace cstudio::testing {

inline std::shared_ptr<const Engine> make_engine(std::vector<Document> docs,
                                                 IndexMode mode = IndexMode::kExact,
                                                 EngineConfig config = {}) {
  auto corpus = std::make_shared<const Corpus>(std::move(docs));
  auto provider = std::make_shared<const LocalEmbeddingProvider>(config.embedding_dim);
  auto index = std::make_shared<const VectorIndex>(build_corpus_index(*corpus, *provider, mode));
  return std::make_shared<const Engine>(corpus, index, provider, config);
}

inline std::shared_ptr<const Engine> fixture_engine() { return make_engine(load_fixture_documents()); }

}  // namespace cstudio::testing

#endif  // CSTUDIO_TESTS_ENGINE_FIXTURE_HPP_
