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

#ifndef CSTUDIO_RESOURCES_HPP_
#define CSTUDIO_RESOURCES_HPP_

#include <string_view>

namespace cstudio::resources {

// Raw contents of the frozen data tables under data/.
std::string_view abbreviations_v1();
std::string_view stopwords_v1();

}  // namespace cstudio::resources

#endif  // CSTUDIO_RESOURCES_HPP_
