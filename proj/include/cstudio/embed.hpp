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

#ifndef CSTUDIO_EMBED_HPP_
#define CSTUDIO_EMBED_HPP_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cstudio {

struct EmbeddingInput {
  std::string section_title;
  std::string text;
};

// Unit-norm vector of finite floats.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  // Normalizes `raw`; throws Error(kConfig) for non-finite or zero input.
  static EmbeddingVector normalized(std::span<const double> raw);
  static EmbeddingVector normalized(std::span<const float> raw);
  // Wraps values that are already unit-norm within 1e-6; throws otherwise.
  static EmbeddingVector from_unit(std::vector<float> values);

  std::span<const float> values() const { return values_; }
  std::size_t dim() const { return values_.size(); }

  bool operator==(const EmbeddingVector&) const = default;

 private:
  explicit EmbeddingVector(std::vector<float> v) : values_(std::move(v)) {}
  std::vector<float> values_;
};

// Cosine distance 1 - cos(u, v), clamped to [0, 2]. For unit vectors this is
// 1 - dot(u, v); dividing by the stored norms makes d(v, v) exactly 0.
double cosine_distance(std::span<const float> u, std::span<const float> v);

// `section_title + "\n" + text`, with line breaks inside the title collapsed
// to single spaces. Used identically at index and query time.
std::string compose_embedding_text(const EmbeddingInput& input);

// 64-bit FNV-1a over the bytes, seeded, finished with a splitmix64 mixer.
std::uint64_t seeded_hash64(std::string_view bytes, std::uint64_t seed);

inline constexpr std::uint64_t kLocalEmbedSeed = 0x43535449'58763031ULL;
inline constexpr std::size_t kDefaultLocalDim = 256;

// Hashed bag-of-words: each token adds +/-1 to bucket hash % dim, sign from
// the top hash bit; the sum is L2-normalized. An all-zero sum maps to e0.
EmbeddingVector local_embed(std::string_view text, std::size_t dim);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  // Same input gives bitwise-identical output.
  virtual bool deterministic() const = 0;
  // Safe to call concurrently. Output order matches input order.
  virtual std::vector<EmbeddingVector> embed_batch(std::span<const EmbeddingInput> inputs) const = 0;

  EmbeddingVector embed_one(const EmbeddingInput& input) const;
};

class LocalEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit LocalEmbeddingProvider(std::size_t dim = kDefaultLocalDim);
  std::string name() const override { return "local-hash-v1"; }
  std::size_t dim() const override { return dim_; }
  bool deterministic() const override { return true; }
  std::vector<EmbeddingVector> embed_batch(std::span<const EmbeddingInput> inputs) const override;

 private:
  std::size_t dim_;
};

struct RemoteConfig {
  std::string base_url;              // scheme://host[:port]
  std::string path = "/v1/embeddings";
  std::string model;
  std::string api_key_env = "CSTUDIO_EMBED_API_KEY";
  std::size_t expected_dim = 0;      // required; replies of another dim are rejected
  std::size_t max_batch = 64;
  int max_retries = 4;
  std::chrono::milliseconds initial_backoff{250};
  std::chrono::milliseconds max_backoff{8000};
  std::chrono::seconds timeout{30};
};

// JSON over HTTP: POST {model, inputs:[string]} -> {vectors:[[number]]}.
// Batches are sent sequentially; transport failures, 429 and 5xx are retried
// with exponential backoff. The credential is sent as a bearer token and is
// never included in error messages.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit RemoteEmbeddingProvider(RemoteConfig config, Sleeper sleeper = {});
  std::string name() const override { return "remote:" + config_.model; }
  std::size_t dim() const override { return config_.expected_dim; }
  bool deterministic() const override { return false; }
  std::vector<EmbeddingVector> embed_batch(std::span<const EmbeddingInput> inputs) const override;

 private:
  std::vector<EmbeddingVector> send_chunk(std::span<const EmbeddingInput> chunk) const;

  RemoteConfig config_;
  Sleeper sleeper_;
};

}  // namespace cstudio

#endif  // CSTUDIO_EMBED_HPP_
