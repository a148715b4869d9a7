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

#include "cstudio/index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

#include "cstudio/errors.hpp"

namespace cstudio {

const char* index_mode_name(IndexMode mode) {
  return mode == IndexMode::kExact ? "exact" : "approx";
}

IndexMode parse_index_mode(std::string_view name) {
  if (name == "exact") return IndexMode::kExact;
  if (name == "approx" || name == "approximate") return IndexMode::kApproximate;
  throw Error(ErrorCode::kConfig, "unknown index mode: " + std::string(name));
}

VectorIndex VectorIndex::build(const std::map<std::string, EmbeddingVector>& vectors,
                               IndexMode mode, const HnswParams& params) {
  if (vectors.empty()) throw Error(ErrorCode::kInvalidArgument, "build_index: no vectors");
  if (params.m < 2) throw Error(ErrorCode::kConfig, "build_index: m must be >= 2");
  if (vectors.size() > std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorCode::kConfig, "build_index: too many vectors");

  VectorIndex idx;
  idx.mode_ = mode;
  idx.params_ = params;
  idx.dim_ = vectors.begin()->second.dim();
  idx.ids_.reserve(vectors.size());
  idx.data_.reserve(vectors.size() * idx.dim_);
  for (const auto& [id, v] : vectors) {
    if (v.dim() != idx.dim_)
      throw Error(ErrorCode::kConfig, "build_index: mixed dimensions (" + std::to_string(v.dim()) +
                                          " vs " + std::to_string(idx.dim_) + ") at " + id);
    idx.ids_.push_back(id);
    idx.data_.insert(idx.data_.end(), v.values().begin(), v.values().end());
  }
  idx.finish_rows();
  if (mode == IndexMode::kApproximate) idx.build_graph();
  return idx;
}

void VectorIndex::finish_rows() {
  sq_norms_.assign(ids_.size(), 0.0);
  node_of_.clear();
  node_of_.reserve(ids_.size());
  for (std::uint32_t i = 0; i < ids_.size(); ++i) {
    double sq = 0.0;
    for (float x : row(i)) sq += static_cast<double>(x) * static_cast<double>(x);
    sq_norms_[i] = sq;
    node_of_.emplace(ids_[i], i);
  }
}

double VectorIndex::distance_to(std::span<const float> q, double q_sq, std::uint32_t i) const {
  const auto r = row(i);
  double dot = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) dot += static_cast<double>(q[j]) * static_cast<double>(r[j]);
  const double denom = std::sqrt(q_sq * sq_norms_[i]);
  if (denom == 0.0) return 1.0;
  return std::clamp(1.0 - dot / denom, 0.0, 2.0);
}

double VectorIndex::distance_between(std::uint32_t a, std::uint32_t b) const {
  return distance_to(row(a), sq_norms_[a], b);
}

std::optional<std::span<const float>> VectorIndex::vector_of(std::string_view sentence_id) const {
  auto it = node_of_.find(std::string(sentence_id));
  if (it == node_of_.end()) return std::nullopt;
  return row(it->second);
}

// ---------------------------------------------------------------------------
// Graph construction

std::size_t VectorIndex::max_degree(int layer) const {
  return layer == 0 ? 2 * params_.m : params_.m;
}

std::vector<VectorIndex::Candidate> VectorIndex::search_layer(
    std::span<const float> q, double q_sq, const std::vector<Candidate>& entry, std::size_t ef,
    int layer, std::vector<std::uint32_t>& visit_mark, std::uint32_t epoch) const {
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> frontier;
  std::priority_queue<Candidate> best;  // max-heap, worst on top
  for (const auto& c : entry) {
    if (visit_mark[c.node] == epoch) continue;
    visit_mark[c.node] = epoch;
    frontier.push(c);
    best.push(c);
    if (best.size() > ef) best.pop();
  }
  while (!frontier.empty()) {
    const Candidate cur = frontier.top();
    frontier.pop();
    if (best.size() >= ef && best.top() < cur) break;
    for (std::uint32_t nb : links_[cur.node][static_cast<std::size_t>(layer)]) {
      if (visit_mark[nb] == epoch) continue;
      visit_mark[nb] = epoch;
      const Candidate cand{distance_to(q, q_sq, nb), nb};
      if (best.size() < ef || cand < best.top()) {
        frontier.push(cand);
        best.push(cand);
        if (best.size() > ef) best.pop();
      }
    }
  }
  std::vector<Candidate> out;
  out.reserve(best.size());
  while (!best.empty()) {
    out.push_back(best.top());
    best.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Diversity heuristic: keep a candidate only if it is closer to the base
// than to every neighbor kept so far; top up with pruned candidates in
// distance order if fewer than m survive.
std::vector<std::uint32_t> VectorIndex::select_neighbors(const std::vector<Candidate>& sorted,
                                                         std::size_t m) const {
  std::vector<std::uint32_t> kept;
  std::vector<std::uint32_t> pruned;
  for (const auto& c : sorted) {
    if (kept.size() >= m) break;
    bool diverse = true;
    for (std::uint32_t k : kept) {
      if (distance_between(c.node, k) < c.distance) {
        diverse = false;
        break;
      }
    }
    (diverse ? kept : pruned).push_back(c.node);
  }
  for (std::size_t i = 0; i < pruned.size() && kept.size() < m; ++i) kept.push_back(pruned[i]);
  return kept;
}

void VectorIndex::build_graph() {
  const auto n = static_cast<std::uint32_t>(ids_.size());
  links_.assign(n, {});
  top_level_ = -1;
  std::mt19937_64 rng(params_.seed);
  const double level_mult = 1.0 / std::log(static_cast<double>(params_.m));
  std::vector<std::uint32_t> visit_mark(n, 0);
  std::uint32_t epoch = 0;

  for (std::uint32_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    const int level = std::min(static_cast<int>(-std::log(u) * level_mult), 31);
    links_[i].assign(static_cast<std::size_t>(level) + 1, {});
    if (top_level_ < 0) {
      entry_ = i;
      top_level_ = level;
      continue;
    }
    const auto q = row(i);
    const double q_sq = sq_norms_[i];
    std::vector<Candidate> ep{{distance_to(q, q_sq, entry_), entry_}};
    for (int l = top_level_; l > level; --l) {
      ep = search_layer(q, q_sq, ep, 1, l, visit_mark, ++epoch);
      ep.resize(1);
    }
    for (int l = std::min(level, top_level_); l >= 0; --l) {
      auto found = search_layer(q, q_sq, ep, params_.ef_construction, l, visit_mark, ++epoch);
      const auto lu = static_cast<std::size_t>(l);
      links_[i][lu] = select_neighbors(found, params_.m);
      for (std::uint32_t nb : links_[i][lu]) {
        auto& back = links_[nb][lu];
        back.push_back(i);
        if (back.size() > max_degree(l)) {
          std::vector<Candidate> cands;
          cands.reserve(back.size());
          for (std::uint32_t x : back) cands.push_back({distance_between(nb, x), x});
          std::sort(cands.begin(), cands.end());
          back = select_neighbors(cands, max_degree(l));
        }
      }
      ep = std::move(found);
    }
    if (level > top_level_) {
      top_level_ = level;
      entry_ = i;
    }
  }
}

// ---------------------------------------------------------------------------
// Queries

std::vector<Neighbor> VectorIndex::knn(std::span<const float> query, std::size_t k,
                                       std::size_t ef_search) const {
  if (query.size() != dim_)
    throw Error(ErrorCode::kConfig, "knn: query dim " + std::to_string(query.size()) +
                                        " does not match index dim " + std::to_string(dim_));
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "knn: k must be >= 1");
  double q_sq = 0.0;
  for (float x : query) q_sq += static_cast<double>(x) * static_cast<double>(x);

  std::vector<Candidate> ranked;
  if (mode_ == IndexMode::kExact) {
    ranked.reserve(ids_.size());
    for (std::uint32_t i = 0; i < ids_.size(); ++i) ranked.push_back({distance_to(query, q_sq, i), i});
    const std::size_t take = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end());
    ranked.resize(take);
  } else {
    std::vector<std::uint32_t> visit_mark(ids_.size(), 0);
    std::uint32_t epoch = 0;
    std::vector<Candidate> ep{{distance_to(query, q_sq, entry_), entry_}};
    for (int l = top_level_; l > 0; --l) {
      ep = search_layer(query, q_sq, ep, 1, l, visit_mark, ++epoch);
      ep.resize(1);
    }
    ranked = search_layer(query, q_sq, ep, std::max(ef_search, k), 0, visit_mark, ++epoch);
    if (ranked.size() > k) ranked.resize(k);
  }

  std::vector<Neighbor> out;
  out.reserve(ranked.size());
  for (const auto& c : ranked) out.push_back(Neighbor{ids_[c.node], c.distance});
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr char kMagic[4] = {'C', 'S', 'I', 'X'};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(std::string_view s) { buf_.append(s); }
  std::string take() { return std::move(buf_); }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error(ErrorCode::kParse, "index file is truncated");
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + static_cast<std::size_t>(i)])) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string VectorIndex::serialize() const {
  ByteWriter w;
  w.bytes(std::string_view(kMagic, 4));
  w.u16(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(dim_));
  w.u8(static_cast<std::uint8_t>(mode_));
  w.u32(static_cast<std::uint32_t>(ids_.size()));
  for (std::uint32_t i = 0; i < ids_.size(); ++i) {
    w.u32(static_cast<std::uint32_t>(ids_[i].size()));
    w.bytes(ids_[i]);
    for (float x : row(i)) w.f32(x);
  }
  if (mode_ == IndexMode::kApproximate) {
    w.u32(static_cast<std::uint32_t>(params_.m));
    w.u32(static_cast<std::uint32_t>(params_.ef_construction));
    w.u64(params_.seed);
    w.u32(entry_);
    w.u32(static_cast<std::uint32_t>(top_level_));
    for (const auto& layers : links_) {
      w.u32(static_cast<std::uint32_t>(layers.size() - 1));
      for (const auto& nbrs : layers) {
        w.u32(static_cast<std::uint32_t>(nbrs.size()));
        for (std::uint32_t x : nbrs) w.u32(x);
      }
    }
  }
  return w.take();
}

VectorIndex VectorIndex::deserialize(std::string_view bytes) {
  ByteReader r(bytes);
  const auto magic = r.bytes(4);
  if (magic != std::string_view(kMagic, 4)) throw Error(ErrorCode::kParse, "not an index file (bad magic)");
  const std::uint16_t version = r.u16();
  if (version != kFormatVersion)
    throw Error(ErrorCode::kParse, "unsupported index format version " + std::to_string(version));

  VectorIndex idx;
  idx.dim_ = r.u32();
  const std::uint8_t mode = r.u8();
  if (mode > 1) throw Error(ErrorCode::kParse, "unknown index mode byte " + std::to_string(mode));
  idx.mode_ = static_cast<IndexMode>(mode);
  const std::uint32_t count = r.u32();
  if (idx.dim_ == 0 || count == 0) throw Error(ErrorCode::kParse, "index file has no entries");
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t len = r.u32();
    idx.ids_.emplace_back(r.bytes(len));
    if (i > 0 && !(idx.ids_[i - 1] < idx.ids_[i]))
      throw Error(ErrorCode::kParse, "index entries are not sorted by id");
    for (std::size_t j = 0; j < idx.dim_; ++j) {
      const float x = r.f32();
      if (!std::isfinite(x)) throw Error(ErrorCode::kParse, "index contains a non-finite value");
      idx.data_.push_back(x);
    }
  }
  idx.finish_rows();

  if (idx.mode_ == IndexMode::kApproximate) {
    idx.params_.m = r.u32();
    idx.params_.ef_construction = r.u32();
    idx.params_.seed = r.u64();
    idx.entry_ = r.u32();
    idx.top_level_ = static_cast<int>(r.u32());
    if (idx.entry_ >= count || idx.top_level_ < 0 || idx.top_level_ > 31)
      throw Error(ErrorCode::kParse, "corrupt graph header");
    idx.links_.resize(count);
    for (auto& layers : idx.links_) {
      const std::uint32_t level = r.u32();
      if (level > 31) throw Error(ErrorCode::kParse, "corrupt node level");
      layers.resize(level + 1);
      for (auto& nbrs : layers) {
        const std::uint32_t deg = r.u32();
        if (deg > count) throw Error(ErrorCode::kParse, "corrupt node degree");
        nbrs.reserve(deg);
        for (std::uint32_t d = 0; d < deg; ++d) {
          const std::uint32_t x = r.u32();
          if (x >= count) throw Error(ErrorCode::kParse, "neighbor out of range");
          nbrs.push_back(x);
        }
      }
    }
    if (idx.links_[idx.entry_].size() != static_cast<std::size_t>(idx.top_level_) + 1)
      throw Error(ErrorCode::kParse, "entry point level mismatch");
    for (const auto& layers : idx.links_) {
      for (std::size_t l = 0; l < layers.size(); ++l) {
        for (std::uint32_t x : layers[l]) {
          if (idx.links_[x].size() <= l) throw Error(ErrorCode::kParse, "link to a node below its level");
        }
      }
    }
  }
  if (!r.done()) throw Error(ErrorCode::kParse, "trailing bytes after index data");
  return idx;
}

void VectorIndex::save(const std::filesystem::path& path) const {
  const std::string bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write index file: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "error writing index file: " + path.string());
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read index file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace cstudio
