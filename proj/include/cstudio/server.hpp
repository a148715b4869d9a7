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

#ifndef CSTUDIO_SERVER_HPP_
#define CSTUDIO_SERVER_HPP_

#include <memory>
#include <string>
#include <thread>

#include "cstudio/notebook.hpp"
#include "cstudio/service.hpp"

namespace httplib {
class Server;
}

namespace cstudio {

// HTTP JSON API over an immutable engine and a notebook store.
//
//   GET    /health
//   GET    /pdc
//   POST   /retrieve              {section_title, paragraph_text, offset, mode}
//   POST   /retrieve/rerank       {result_token, anchor_row, mode}
//   GET    /sentence/{id}/context
//   POST   /bookmarks             {sentence_id}
//   GET    /bookmarks
//   DELETE /bookmarks/{id}
//   PUT    /bookmarks/{id}/note   {text}
//   GET    /export/bookmarks.csv
//
// Errors are {"error": {"code", "message"}} with a matching HTTP status.
class ApiServer {
 public:
  ApiServer(std::shared_ptr<const Engine> engine, std::shared_ptr<NotebookStore> notebook);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Binds the socket; port 0 picks a free port. Returns the bound port.
  // Throws Error(kIo) if the address is unavailable.
  int bind(const std::string& host, int port);

  void serve_forever();  // blocks until stop()
  void start();          // serves on a background thread
  void stop();

  int port() const { return port_; }

 private:
  void install_routes();

  std::shared_ptr<const Engine> engine_;
  std::shared_ptr<NotebookStore> notebook_;
  std::unique_ptr<httplib::Server> http_;
  std::string pdc_body_;
  std::thread worker_;
  int port_ = -1;
};

}  // namespace cstudio

#endif  // CSTUDIO_SERVER_HPP_
