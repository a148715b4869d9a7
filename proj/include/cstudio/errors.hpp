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

#ifndef CSTUDIO_ERRORS_HPP_
#define CSTUDIO_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cstudio {

// Machine-readable failure categories. These map one-to-one onto the C API
// status codes and onto HTTP error bodies.
enum class ErrorCode {
  kInvalidArgument,  // precondition violated by the caller
  kNotFound,
  kConflict,
  kConfig,           // inconsistent configuration (dims, providers, files)
  kIo,
  kParse,
  kTransport,        // remote provider unreachable after retries
  kInternal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cstudio

#endif  // CSTUDIO_ERRORS_HPP_
