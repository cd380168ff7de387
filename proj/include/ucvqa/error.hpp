// Copyright 2026 The ucvqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ucvqa {

enum class ErrorKind {
  size,
  index,
  arity,
  kind,
  missing_parameter,
  range,
  conditioning,
  structure,
  fit,
  config,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::size: return "size";
    case ErrorKind::index: return "index";
    case ErrorKind::arity: return "arity";
    case ErrorKind::kind: return "kind";
    case ErrorKind::missing_parameter: return "missing-parameter";
    case ErrorKind::range: return "range";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::structure: return "structure";
    case ErrorKind::fit: return "fit";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

/// Every failure raised by the library. `kind()` lets callers branch on the
/// category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ucvqa
