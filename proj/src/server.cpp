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

#include "cstudio/server.hpp"

#include <httplib.h>

#include "cstudio/errors.hpp"

namespace cstudio {

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse: return 400;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kTransport: return 502;
    case ErrorCode::kConfig:
    case ErrorCode::kIo:
    case ErrorCode::kInternal: return 500;
  }
  return 500;
}

const char* api_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse: return "bad_request";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kConfig: return "config_error";
    default: return "internal";
  }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  send_json(res, json{{"error", {{"code", api_code(code)}, {"message", message}}}}, http_status(code));
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "request body is not valid JSON");
  }
}

// Wraps a handler so every failure becomes a structured error body.
template <typename F>
httplib::Server::Handler guarded(F&& fn) {
  return [fn = std::forward<F>(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const std::exception& e) {
      send_error(res, ErrorCode::kInternal, e.what());
    }
  };
}

}  // namespace

ApiServer::ApiServer(std::shared_ptr<const Engine> engine, std::shared_ptr<NotebookStore> notebook)
    : engine_(std::move(engine)), notebook_(std::move(notebook)),
      http_(std::make_unique<httplib::Server>()) {
  if (!engine_) throw Error(ErrorCode::kConfig, "server needs an engine");
  if (!notebook_) notebook_ = std::make_shared<NotebookStore>();
  // SO_REUSEPORT (the library default) would let a second server share the
  // port silently; an occupied port must fail at startup.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  http_->set_tcp_nodelay(true);
  pdc_body_ = pdc_to_json(compute_pdc(engine_->corpus(), engine_->config())).dump();
  install_routes();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::install_routes() {
  auto& s = *http_;

  s.Get("/health", guarded([](const httplib::Request&, httplib::Response& res) {
          send_json(res, json{{"status", "ok"}});
        }));

  s.Get("/pdc", guarded([this](const httplib::Request&, httplib::Response& res) {
          res.set_content(pdc_body_, "application/json");
        }));

  s.Post("/retrieve", guarded([this](const httplib::Request& req, httplib::Response& res) {
           send_json(res, retrieve_response(*engine_, parse_body(req)));
         }));

  s.Post("/retrieve/rerank", guarded([this](const httplib::Request& req, httplib::Response& res) {
           send_json(res, rerank_response(*engine_, parse_body(req)));
         }));

  s.Get(R"(/sentence/(.+)/context)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          send_json(res, context_to_json(sentence_context(req.matches[1].str(), engine_->corpus())));
        }));

  s.Post("/bookmarks", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const json body = parse_body(req);
           if (!body.is_object() || !body.contains("sentence_id") || !body["sentence_id"].is_string())
             throw Error(ErrorCode::kInvalidArgument, "sentence_id is required");
           const Bookmark b = notebook_->add_bookmark(body["sentence_id"].get<std::string>(),
                                                      engine_->corpus());
           send_json(res, bookmark_to_json(b, notebook_->note_for(b.bookmark_id)));
         }));

  s.Get("/bookmarks", guarded([this](const httplib::Request&, httplib::Response& res) {
          json list = json::array();
          for (const auto& b : notebook_->bookmarks())
            list.push_back(bookmark_to_json(b, notebook_->note_for(b.bookmark_id)));
          send_json(res, json{{"bookmarks", std::move(list)}});
        }));

  s.Delete(R"(/bookmarks/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             notebook_->remove_bookmark(req.matches[1].str());
             send_json(res, json{{"deleted", req.matches[1].str()}});
           }));

  s.Put(R"(/bookmarks/([^/]+)/note)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const json body = parse_body(req);
          if (!body.is_object() || !body.contains("text") || !body["text"].is_string())
            throw Error(ErrorCode::kInvalidArgument, "text is required");
          const UserNote n = notebook_->upsert_note(req.matches[1].str(), body["text"].get<std::string>());
          send_json(res, json{{"note_id", n.note_id},
                              {"bookmark_id", n.bookmark_id},
                              {"text", n.text},
                              {"updated_at", format_iso8601(n.updated_at)}});
        }));

  s.Get("/export/bookmarks.csv", guarded([this](const httplib::Request&, httplib::Response& res) {
          res.set_header("Content-Disposition", "attachment; filename=\"bookmarks.csv\"");
          res.set_content(notebook_->export_csv(), "text/csv; charset=utf-8");
        }));

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      const ErrorCode code = res.status == 404 ? ErrorCode::kNotFound : ErrorCode::kInvalidArgument;
      send_json(res, json{{"error", {{"code", api_code(code)}, {"message", "no such endpoint"}}}},
                res.status);
    }
  });
}

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = http_->bind_to_any_port(host);
  } else {
    port_ = http_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0)
    throw Error(ErrorCode::kIo, "cannot listen on " + host + ":" + std::to_string(port) +
                                    " (port in use?)");
  return port_;
}

void ApiServer::serve_forever() {
  if (port_ < 0) throw Error(ErrorCode::kConfig, "server is not bound");
  http_->listen_after_bind();
}

void ApiServer::start() {
  if (port_ < 0) throw Error(ErrorCode::kConfig, "server is not bound");
  worker_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
}

void ApiServer::stop() {
  if (http_) http_->stop();
  if (worker_.joinable()) worker_.join();
}

}  // namespace cstudio
