// Copyright (c) 2026 The svkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVKIT_ERRORS_H_
#define SVKIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace svkit {

// Base of all toolkit errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: bad magic, truncated header fields, unparsable text.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A text line could not be parsed; carries the 1-based line number.
class ParseError : public FormatError {
 public:
  ParseError(const std::string& what, size_t line)
      : FormatError(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// A precondition or invariant of an operation was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

// An id could not be resolved.
class LookupError : public ContractError {
 public:
  explicit LookupError(const std::string& id)
      : ContractError("unknown id: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

// Filesystem failure: open, read, write, or a file ending too early.
class IoError : public Error {
 public:
  using Error::Error;
};

#define SVKIT_REQUIRE(cond, msg)                      \
  do {                                                \
    if (!(cond)) throw ::svkit::ContractError(msg);   \
  } while (0)

}  // namespace svkit

#endif  // SVKIT_ERRORS_H_
