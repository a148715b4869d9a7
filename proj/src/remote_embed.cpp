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

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "cstudio/embed.hpp"
#include "cstudio/errors.hpp"

namespace cstudio {

namespace {

using json = nlohmann::json;

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper)) {
  if (config_.base_url.empty()) throw Error(ErrorCode::kConfig, "remote provider: base_url is empty");
  if (config_.model.empty()) throw Error(ErrorCode::kConfig, "remote provider: model is empty");
  if (config_.expected_dim == 0)
    throw Error(ErrorCode::kConfig, "remote provider: expected_dim must be set");
  if (config_.max_batch == 0) throw Error(ErrorCode::kConfig, "remote provider: max_batch is 0");
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::embed_batch(
    std::span<const EmbeddingInput> inputs) const {
  std::vector<EmbeddingVector> out;
  out.reserve(inputs.size());
  for (std::size_t start = 0; start < inputs.size(); start += config_.max_batch) {
    const std::size_t n = std::min(config_.max_batch, inputs.size() - start);
    auto chunk = send_chunk(inputs.subspan(start, n));
    for (auto& v : chunk) out.push_back(std::move(v));
  }
  return out;
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::send_chunk(
    std::span<const EmbeddingInput> chunk) const {
  json body{{"model", config_.model}, {"inputs", json::array()}};
  for (const auto& in : chunk) body["inputs"].push_back(compose_embedding_text(in));
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key != nullptr && *key != '\0')
    headers.emplace("Authorization", std::string("Bearer ") + key);

  httplib::Client client(config_.base_url);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);

  std::chrono::milliseconds backoff = config_.initial_backoff;
  std::string last_failure;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      sleeper_(backoff);
      backoff = std::min(backoff * 2, config_.max_backoff);
    }
    auto res = client.Post(config_.path, headers, payload, "application/json");
    if (!res) {
      last_failure = "transport: " + httplib::to_string(res.error());
      continue;
    }
    if (retryable_status(res->status)) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw Error(ErrorCode::kTransport, "remote provider rejected request: HTTP " +
                                             std::to_string(res->status));

    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::exception&) {
      throw Error(ErrorCode::kTransport, "remote provider returned malformed JSON");
    }
    const auto it = reply.find("vectors");
    if (it == reply.end() || !it->is_array() || it->size() != chunk.size())
      throw Error(ErrorCode::kTransport, "remote provider returned wrong number of vectors");

    std::vector<EmbeddingVector> out;
    out.reserve(chunk.size());
    for (const auto& row : *it) {
      std::vector<double> raw;
      try {
        raw = row.get<std::vector<double>>();
      } catch (const json::exception&) {
        throw Error(ErrorCode::kTransport, "remote provider returned a non-numeric vector");
      }
      if (raw.size() != config_.expected_dim)
        throw Error(ErrorCode::kConfig, "remote provider returned dim " + std::to_string(raw.size()) +
                                            ", expected " + std::to_string(config_.expected_dim));
      out.push_back(EmbeddingVector::normalized(std::span<const double>(raw)));
    }
    return out;
  }
  throw Error(ErrorCode::kTransport, "remote provider unreachable after " +
                                         std::to_string(config_.max_retries + 1) +
                                         " attempts (" + last_failure + ")");
}

}  // namespace cstudio
