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

#include "cstudio/embed.hpp"

#include <algorithm>
#include <cmath>

#include "cstudio/errors.hpp"
#include "cstudio/text.hpp"

namespace cstudio {

namespace {

constexpr double kUnitTolerance = 1e-6;

template <typename T>
EmbeddingVector normalize_impl(std::span<const T> raw, std::vector<float>& out) {
  double sq = 0.0;
  for (T x : raw) {
    if (!std::isfinite(static_cast<double>(x)))
      throw Error(ErrorCode::kConfig, "embedding has a non-finite component");
    sq += static_cast<double>(x) * static_cast<double>(x);
  }
  if (sq == 0.0) throw Error(ErrorCode::kConfig, "embedding is the zero vector");
  const double inv = 1.0 / std::sqrt(sq);
  out.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    out[i] = static_cast<float>(static_cast<double>(raw[i]) * inv);
  return EmbeddingVector::from_unit(std::move(out));
}

}  // namespace

EmbeddingVector EmbeddingVector::normalized(std::span<const double> raw) {
  std::vector<float> out;
  return normalize_impl(raw, out);
}

EmbeddingVector EmbeddingVector::normalized(std::span<const float> raw) {
  std::vector<float> out;
  return normalize_impl(raw, out);
}

EmbeddingVector EmbeddingVector::from_unit(std::vector<float> values) {
  double sq = 0.0;
  for (float x : values) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kConfig, "embedding has a non-finite component");
    sq += static_cast<double>(x) * static_cast<double>(x);
  }
  if (values.empty() || std::abs(std::sqrt(sq) - 1.0) > kUnitTolerance)
    throw Error(ErrorCode::kConfig, "embedding is not unit-norm");
  return EmbeddingVector(std::move(values));
}

double cosine_distance(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) throw Error(ErrorCode::kConfig, "cosine_distance: dimension mismatch");
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i];
    const double b = v[i];
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (uu == 0.0 || vv == 0.0) return 1.0;
  const double d = 1.0 - dot / std::sqrt(uu * vv);
  return std::clamp(d, 0.0, 2.0);
}

std::string compose_embedding_text(const EmbeddingInput& input) {
  return text::collapse_newlines(input.section_title) + "\n" + input.text;
}

std::uint64_t seeded_hash64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

EmbeddingVector local_embed(std::string_view text, std::size_t dim) {
  if (dim < 8) throw Error(ErrorCode::kInvalidArgument, "local_embed: dim must be >= 8");
  if (text.empty()) throw Error(ErrorCode::kInvalidArgument, "local_embed: empty text");
  std::vector<double> acc(dim, 0.0);
  bool any = false;
  for (const auto& tok : text::tokenize(text)) {
    const std::uint64_t h = seeded_hash64(tok, kLocalEmbedSeed);
    const std::size_t bucket = static_cast<std::size_t>(h % dim);
    acc[bucket] += (h >> 63) ? -1.0 : 1.0;
    any = true;
  }
  if (!any || std::all_of(acc.begin(), acc.end(), [](double x) { return x == 0.0; })) {
    std::fill(acc.begin(), acc.end(), 0.0);
    acc[0] = 1.0;
  }
  return EmbeddingVector::normalized(std::span<const double>(acc));
}

EmbeddingVector EmbeddingProvider::embed_one(const EmbeddingInput& input) const {
  auto v = embed_batch(std::span<const EmbeddingInput>(&input, 1));
  if (v.size() != 1) throw Error(ErrorCode::kInternal, "provider returned wrong batch size");
  return std::move(v.front());
}

LocalEmbeddingProvider::LocalEmbeddingProvider(std::size_t dim) : dim_(dim) {
  if (dim < 8) throw Error(ErrorCode::kConfig, "local provider dim must be >= 8");
}

std::vector<EmbeddingVector> LocalEmbeddingProvider::embed_batch(
    std::span<const EmbeddingInput> inputs) const {
  std::vector<EmbeddingVector> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) {
    if (text::is_blank(in.section_title) || text::is_blank(in.text))
      throw Error(ErrorCode::kInvalidArgument, "embedding input needs a title and text");
    out.push_back(local_embed(compose_embedding_text(in), dim_));
  }
  return out;
}

}  // namespace cstudio
