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

#ifndef CSTUDIO_INDEX_HPP_
#define CSTUDIO_INDEX_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cstudio/embed.hpp"

namespace cstudio {

enum class IndexMode : std::uint8_t { kExact = 0, kApproximate = 1 };

const char* index_mode_name(IndexMode mode);
IndexMode parse_index_mode(std::string_view name);  // "exact" | "approx" | "approximate"

struct HnswParams {
  std::size_t m = 16;                 // max neighbors per node above layer 0
  std::size_t ef_construction = 200;
  std::uint64_t seed = 0x43534958;    // level assignment
};

inline constexpr std::size_t kDefaultEfSearch = 64;

struct Neighbor {
  std::string sentence_id;
  double distance = 0.0;  // cosine distance in [0, 2]

  bool operator==(const Neighbor&) const = default;
};

// Cosine kNN over unit vectors keyed by sentence id. Immutable after build;
// concurrent queries are safe. Results are ordered by (distance, id).
//
// On-disk format, little-endian: "CSIX", u16 version, u32 dim, u8 mode,
// u32 count, then per entry u32 id length, id bytes, dim x f32. Approximate
// indexes append the graph: u32 m, u32 ef_construction, u64 seed, u32 entry,
// i32 top level, then per node u32 level and, for each layer 0..level,
// u32 degree followed by that many u32 node ordinals.
class VectorIndex {
 public:
  static constexpr std::uint16_t kFormatVersion = 1;

  static VectorIndex build(const std::map<std::string, EmbeddingVector>& vectors, IndexMode mode,
                           const HnswParams& params = {});

  // Exact mode returns the true min(k, size) nearest; approximate mode is
  // best-effort over a beam of max(ef_search, k) candidates.
  std::vector<Neighbor> knn(std::span<const float> query, std::size_t k,
                            std::size_t ef_search = kDefaultEfSearch) const;

  std::string serialize() const;
  static VectorIndex deserialize(std::string_view bytes);
  void save(const std::filesystem::path& path) const;
  static VectorIndex load(const std::filesystem::path& path);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  IndexMode mode() const { return mode_; }
  const HnswParams& params() const { return params_; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::optional<std::span<const float>> vector_of(std::string_view sentence_id) const;

 private:
  struct Candidate {
    double distance;
    std::uint32_t node;
    bool operator<(const Candidate& o) const {
      return distance < o.distance || (distance == o.distance && node < o.node);
    }
    bool operator>(const Candidate& o) const { return o < *this; }
  };

  std::span<const float> row(std::uint32_t i) const {
    return std::span<const float>(data_).subspan(static_cast<std::size_t>(i) * dim_, dim_);
  }
  double distance_to(std::span<const float> q, double q_sq, std::uint32_t i) const;
  double distance_between(std::uint32_t a, std::uint32_t b) const;
  void finish_rows();

  void build_graph();
  std::size_t max_degree(int layer) const;
  std::vector<Candidate> search_layer(std::span<const float> q, double q_sq,
                                      const std::vector<Candidate>& entry, std::size_t ef,
                                      int layer, std::vector<std::uint32_t>& visit_mark,
                                      std::uint32_t epoch) const;
  std::vector<std::uint32_t> select_neighbors(const std::vector<Candidate>& sorted,
                                              std::size_t m) const;

  std::size_t dim_ = 0;
  IndexMode mode_ = IndexMode::kExact;
  HnswParams params_;
  std::vector<std::string> ids_;  // sorted, so node order is the tie-break order
  std::vector<float> data_;       // row-major
  std::vector<double> sq_norms_;
  std::unordered_map<std::string, std::uint32_t> node_of_;

  // links_[node][layer] -> neighbor ordinals. Approximate mode only.
  std::vector<std::vector<std::vector<std::uint32_t>>> links_;
  std::uint32_t entry_ = 0;
  int top_level_ = -1;
};

}  // namespace cstudio

#endif  // CSTUDIO_INDEX_HPP_
