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

#ifndef CSTUDIO_PDC_HPP_
#define CSTUDIO_PDC_HPP_

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "cstudio/model.hpp"

namespace cstudio {

// One top-level section title in its paper.
struct TitleOccurrence {
  std::string title;
  std::string doc_id;
  double position = 0.0;            // section index / max(1, count - 1)
  std::vector<std::string> tokens;  // distinct lowercase tokens, first-appearance order
  std::size_t ordinal = 0;          // index in the extracted list

  std::set<std::string> token_set() const { return {tokens.begin(), tokens.end()}; }
  bool operator==(const TitleOccurrence&) const = default;
};

struct TitleCluster {
  std::vector<TitleOccurrence> members;  // display order
  std::string name;
  std::size_t count = 0;
  double mean_position = 0.0;
  std::vector<std::string> underline_tokens;  // shared by every member, in name order
  // grey_flags[i][t]: members[i].tokens[t] occurs in some member before i.
  std::vector<std::vector<bool>> grey_flags;
};

struct PdcResult {
  std::vector<TitleCluster> clusters;
  std::size_t total_titles = 0;
};

// Top-level titles in corpus order, truncated to the first n_max. Positions
// are computed per paper before truncation.
std::vector<TitleOccurrence> extract_title_occurrences(const std::vector<Document>& corpus,
                                                       std::size_t n_max);

// alpha * (1 - jaccard) + (1 - alpha) * |position difference|
double title_distance(const TitleOccurrence& a, const TitleOccurrence& b, double alpha);

// Average-linkage agglomerative clustering, merging while the closest pair
// of clusters is within `cut`. Ties between equally close pairs go to the
// lexicographically smallest (name, name) pair.
PdcResult cluster_titles(const std::vector<TitleOccurrence>& occurrences, double alpha, double cut);

// Most frequent exact title; ties go to the lexicographically smallest.
std::string cluster_name(const std::vector<TitleOccurrence>& members);

// Greedy chain from the first occurrence of `name`: each step appends the
// remaining member with the highest token Jaccard to the previous one (ties
// by title, then doc_id, then extraction order).
std::vector<TitleOccurrence> order_within_cluster(std::vector<TitleOccurrence> members,
                                                  const std::string& name);

std::vector<std::string> underline_tokens(const std::vector<TitleOccurrence>& members,
                                          const std::string& name);

std::vector<std::vector<bool>> grey_flags(const std::vector<TitleOccurrence>& ordered);

}  // namespace cstudio

#endif  // CSTUDIO_PDC_HPP_
