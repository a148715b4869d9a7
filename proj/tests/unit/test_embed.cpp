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

#include <gtest/gtest.h>

#include <httplib.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <random>
#include <thread>

#include "cstudio/embed.hpp"
#include "cstudio/errors.hpp"
#include "support.hpp"

namespace cstudio {
namespace {

double norm(std::span<const float> v) {
  double s = 0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

std::vector<float> vec(const EmbeddingVector& v) { return {v.values().begin(), v.values().end()}; }

TEST(Compose, ParticipantsExample) {
  EXPECT_EQ(compose_embedding_text({"Participants", "We recruited 16 people."}),
            "Participants\nWe recruited 16 people.");
}

TEST(Compose, Definition) { EXPECT_EQ(compose_embedding_text({"A", "B"}), "A\nB"); }

TEST(Compose, TitleNewlinesCollapse) {
  EXPECT_EQ(compose_embedding_text({"A\nB", "C"}), "A B\nC");
}

TEST(LocalEmbed, DeterministicAndUnitNorm) {
  auto a = local_embed("Some text here", 256);
  auto b = local_embed("Some text here", 256);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(norm(a.values()), 1.0, 1e-6);
  EXPECT_EQ(a.dim(), 256u);
}

TEST(LocalEmbed, BagOfWordsIgnoresOrder) {
  EXPECT_EQ(local_embed("alpha beta", 64), local_embed("beta alpha", 64));
  EXPECT_EQ(local_embed("Alpha, beta!", 64), local_embed("beta alpha", 64));
}

TEST(LocalEmbed, MatchesHandComputedBuckets) {
  // oracle: recompute bucket and sign per token from the seeded hash
  const std::size_t dim = 32;
  std::vector<double> acc(dim, 0.0);
  for (const auto& t : testing::oracle::tokens("the cat saw the dog")) {
    const auto h = seeded_hash64(t, kLocalEmbedSeed);
    acc[h % dim] += (h >> 63) ? -1.0 : 1.0;
  }
  double n = 0;
  for (double x : acc) n += x * x;
  n = std::sqrt(n);
  auto got = local_embed("the cat saw the dog", dim);
  for (std::size_t i = 0; i < dim; ++i) EXPECT_NEAR(got.values()[i], acc[i] / n, 1e-7);
}

TEST(LocalEmbed, NoTokensGivesFirstBasisVector) {
  auto v = local_embed("... ,,, !!!", 16);
  EXPECT_FLOAT_EQ(v.values()[0], 1.0f);
  for (std::size_t i = 1; i < 16; ++i) EXPECT_EQ(v.values()[i], 0.0f);
}

TEST(LocalEmbed, Preconditions) {
  EXPECT_THROW(local_embed("", 256), Error);
  EXPECT_THROW(local_embed("x", 4), Error);
}

TEST(LocalEmbed, RandomTextsAreUnitNorm) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    auto v = local_embed(testing::random_sentence(rng), 256);
    EXPECT_NEAR(norm(v.values()), 1.0, 1e-6);
    for (float x : v.values()) EXPECT_TRUE(std::isfinite(x));
  }
}

TEST(Cosine, SelfDistanceZeroAndSymmetric) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    auto u = local_embed(testing::random_sentence(rng), 128);
    auto v = local_embed(testing::random_sentence(rng), 128);
    EXPECT_EQ(cosine_distance(u.values(), u.values()), 0.0);
    EXPECT_EQ(cosine_distance(u.values(), v.values()), cosine_distance(v.values(), u.values()));
    const double d = cosine_distance(u.values(), v.values());
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 2.0);
    EXPECT_NEAR(d, testing::oracle::cosine(vec(u), vec(v)), 1e-12);
  }
}

TEST(EmbeddingVector, NormalizesAndRejectsBadInput) {
  std::vector<double> raw{3.0, 4.0};
  auto v = EmbeddingVector::normalized(std::span<const double>(raw));
  EXPECT_FLOAT_EQ(v.values()[0], 0.6f);
  std::vector<double> zero{0.0, 0.0};
  EXPECT_THROW(EmbeddingVector::normalized(std::span<const double>(zero)), Error);
  std::vector<double> nan{NAN, 1.0};
  EXPECT_THROW(EmbeddingVector::normalized(std::span<const double>(nan)), Error);
  EXPECT_THROW(EmbeddingVector::from_unit({0.5f, 0.5f}), Error);
  EXPECT_NO_THROW(EmbeddingVector::from_unit({1.0f, 0.0f}));
}

TEST(LocalProvider, BatchMatchesSingleAndComposedText) {
  LocalEmbeddingProvider p(256);
  std::vector<EmbeddingInput> in{{"Participants", "We recruited 16 people."}, {"A", "B"}};
  auto out = p.embed_batch(in);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], local_embed("Participants\nWe recruited 16 people.", 256));
  EXPECT_EQ(out[1], p.embed_one(in[1]));
  EXPECT_TRUE(p.deterministic());
  EXPECT_TRUE(p.embed_batch({}).empty());
}

TEST(LocalProvider, BlankInputsRejected) {
  LocalEmbeddingProvider p(64);
  EXPECT_THROW(p.embed_one({" ", "text"}), Error);
  EXPECT_THROW(p.embed_one({"Title", ""}), Error);
}

// ---- remote provider against an in-process mock endpoint

class MockEndpoint {
 public:
  // `respond` sees the parsed request and sets the reply.
  explicit MockEndpoint(std::function<void(const nlohmann::json&, httplib::Response&)> respond)
      : respond_(std::move(respond)) {
    server_.Post("/v1/embeddings", [this](const httplib::Request& req, httplib::Response& res) {
      ++calls_;
      last_auth_ = req.get_header_value("Authorization");
      respond_(nlohmann::json::parse(req.body), res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockEndpoint() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int calls() const { return calls_; }
  std::string last_auth() const { return last_auth_; }

 private:
  std::function<void(const nlohmann::json&, httplib::Response&)> respond_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> calls_{0};
  std::string last_auth_;
};

// Deterministic echo: each input maps to a small unnormalized vector.
void echo_vectors(const nlohmann::json& req, httplib::Response& res, std::size_t dim) {
  nlohmann::json vectors = nlohmann::json::array();
  for (const auto& in : req["inputs"]) {
    const std::string s = in.get<std::string>();
    nlohmann::json v = nlohmann::json::array();
    for (std::size_t i = 0; i < dim; ++i) v.push_back(static_cast<double>((s.size() + i) % 5) + 1.0);
    vectors.push_back(v);
  }
  res.set_content(nlohmann::json{{"vectors", vectors}}.dump(), "application/json");
}

RemoteConfig remote_config(const std::string& url, std::size_t dim) {
  RemoteConfig c;
  c.base_url = url;
  c.model = "mock";
  c.expected_dim = dim;
  c.api_key_env = "CSTUDIO_TEST_EMBED_KEY";
  c.max_batch = 2;
  c.max_retries = 3;
  c.timeout = std::chrono::seconds(5);
  return c;
}

TEST(RemoteProvider, EmptyInputMakesNoRequest) {
  MockEndpoint mock([](const nlohmann::json& r, httplib::Response& res) { echo_vectors(r, res, 8); });
  RemoteEmbeddingProvider p(remote_config(mock.url(), 8), [](auto) {});
  EXPECT_TRUE(p.embed_batch({}).empty());
  EXPECT_EQ(mock.calls(), 0);
}

TEST(RemoteProvider, ThreeInputsInOrderAcrossBatches) {
  MockEndpoint mock([](const nlohmann::json& r, httplib::Response& res) { echo_vectors(r, res, 8); });
  ::setenv("CSTUDIO_TEST_EMBED_KEY", "sekrit", 1);
  RemoteEmbeddingProvider p(remote_config(mock.url(), 8), [](auto) {});
  std::vector<EmbeddingInput> in{{"T", "a"}, {"T", "bbbb"}, {"T", "cc"}};
  auto out = p.embed_batch(in);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(mock.calls(), 2);  // max_batch = 2
  EXPECT_EQ(mock.last_auth(), "Bearer sekrit");
  for (std::size_t i = 0; i < in.size(); ++i) {
    // oracle: the mock's raw vector for this composed text, normalized here
    const auto s = compose_embedding_text(in[i]);
    std::vector<double> raw;
    for (std::size_t j = 0; j < 8; ++j) raw.push_back(static_cast<double>((s.size() + j) % 5) + 1.0);
    double n = 0;
    for (double x : raw) n += x * x;
    for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(out[i].values()[j], raw[j] / std::sqrt(n), 1e-6);
    EXPECT_NEAR(norm(out[i].values()), 1.0, 1e-6);
  }
  ::unsetenv("CSTUDIO_TEST_EMBED_KEY");
}

TEST(RemoteProvider, WrongDimensionIsConfigError) {
  MockEndpoint mock([](const nlohmann::json& r, httplib::Response& res) { echo_vectors(r, res, 4); });
  RemoteEmbeddingProvider p(remote_config(mock.url(), 8), [](auto) {});
  try {
    p.embed_one({"T", "x"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(RemoteProvider, RetriesServerErrorsWithBackoff) {
  std::atomic<int> n{0};
  MockEndpoint mock([&](const nlohmann::json& r, httplib::Response& res) {
    if (n++ < 2) {
      res.status = 503;
      return;
    }
    echo_vectors(r, res, 8);
  });
  std::vector<long> sleeps;
  RemoteEmbeddingProvider p(remote_config(mock.url(), 8),
                            [&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); });
  auto v = p.embed_one({"T", "x"});
  EXPECT_EQ(v.dim(), 8u);
  EXPECT_EQ(mock.calls(), 3);
  EXPECT_EQ(sleeps, (std::vector<long>{250, 500}));
}

TEST(RemoteProvider, GivesUpAfterRetryCapWithoutLeakingKey) {
  MockEndpoint mock([](const nlohmann::json&, httplib::Response& res) { res.status = 500; });
  ::setenv("CSTUDIO_TEST_EMBED_KEY", "topsecret-key", 1);
  RemoteEmbeddingProvider p(remote_config(mock.url(), 8), [](auto) {});
  try {
    p.embed_one({"T", "x"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
    EXPECT_EQ(std::string(e.what()).find("topsecret"), std::string::npos);
  }
  EXPECT_EQ(mock.calls(), 4);  // 1 + max_retries
  ::unsetenv("CSTUDIO_TEST_EMBED_KEY");
}

TEST(RemoteProvider, ClientErrorsAreNotRetried) {
  MockEndpoint mock([](const nlohmann::json&, httplib::Response& res) { res.status = 401; });
  RemoteEmbeddingProvider p(remote_config(mock.url(), 8), [](auto) {});
  EXPECT_THROW(p.embed_one({"T", "x"}), Error);
  EXPECT_EQ(mock.calls(), 1);
}

TEST(RemoteProvider, UnreachableEndpointIsTransportError) {
  int port;
  {
    httplib::Server s;
    port = s.bind_to_any_port("127.0.0.1");
  }
  auto cfg = remote_config("http://127.0.0.1:" + std::to_string(port), 8);
  cfg.max_retries = 1;
  RemoteEmbeddingProvider p(cfg, [](auto) {});
  try {
    p.embed_one({"T", "x"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
  }
}

TEST(RemoteProvider, ConfigurationChecked) {
  RemoteConfig c;
  EXPECT_THROW(RemoteEmbeddingProvider{c}, Error);
  c.base_url = "http://x";
  c.model = "m";
  EXPECT_THROW(RemoteEmbeddingProvider{c}, Error);  // expected_dim unset
  c.expected_dim = 8;
  RemoteEmbeddingProvider p(c);
  EXPECT_FALSE(p.deterministic());
  EXPECT_EQ(p.dim(), 8u);
}

}  // namespace
}  // namespace cstudio
