// Copyright 2026 The offeval Authors.
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

#ifndef OFFEVAL_ERRORS_H_
#define OFFEVAL_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace offeval {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A snapshot would contain no users (no event at or before the requested
// time), or an operation received an empty snapshot.
class EmptySnapshot : public Error {
 public:
  using Error::Error;
};

class UnknownUser : public Error {
 public:
  using Error::Error;
};

class UnknownItem : public Error {
 public:
  using Error::Error;
};

class ItemNotInProfile : public Error {
 public:
  using Error::Error;
};

// Items of the reference support with zero current weighted marginal.
class SupportMismatch : public Error {
 public:
  SupportMismatch(const std::string& what, std::vector<std::string> items)
      : Error(what), items_(std::move(items)) {}
  const std::vector<std::string>& items() const { return items_; }

 private:
  std::vector<std::string> items_;
};

// The optimizer could not find a decreasing step on its first iteration.
class NoProgress : public Error {
 public:
  using Error::Error;
};

class InfeasibleConfig : public Error {
 public:
  using Error::Error;
};

// Violated precondition on an argument (non-positive weight, bad law, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed input file. line() is 1-based, 0 when not tied to a line.
class DataError : public Error {
 public:
  DataError(const std::string& file, std::size_t line, const std::string& msg)
      : Error(Format(file, line, msg)), file_(file), line_(line) {}
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  static std::string Format(const std::string& file, std::size_t line,
                            const std::string& msg) {
    std::string out = file;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + msg;
  }

  std::string file_;
  std::size_t line_;
};

}  // namespace offeval

#endif  // OFFEVAL_ERRORS_H_
