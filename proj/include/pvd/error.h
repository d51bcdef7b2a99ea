// include/pvd/error.h

// Copyright 2026  The pvd Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PVD_ERROR_H_
#define PVD_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pvd {

// All library errors derive from Error so callers (the CLI in particular) can
// map them onto exit codes with a single catch chain.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input parsed but violates a structural contract (negative weight, no final
// state, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Caller broke a precondition (bad index, bad config value).
class UsageError : public Error {
 public:
  using Error::Error;
};

// A pre-sized buffer ran out. The message names the flag that controls it.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// The search produced no usable hypothesis.
class DecodeFailure : public Error {
 public:
  using Error::Error;
};

// Something that the algorithms guarantee did not hold.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace pvd

#endif  // PVD_ERROR_H_
