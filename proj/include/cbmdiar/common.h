// cbmdiar/common.h
//
// Copyright (c)  2026  cbmdiar authors
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

#ifndef CBMDIAR_COMMON_H_
#define CBMDIAR_COMMON_H_

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cbmdiar {

// Shape/contract violations inside numeric code (bad dimensions, nonpositive
// step sizes, non-scalar loss, ...).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Invalid or inconsistent user-supplied configuration. CLI maps it to exit 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Missing/corrupt data files, malformed RTTM, bad checkpoints. CLI exit 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Inputs for which the requested quantity is undefined (all -inf softmax,
// all-zero LFA mask, zero reference speech in DER, ...).
class DegenerateInputError : public std::runtime_error {
 public:
  explicit DegenerateInputError(const std::string& msg)
      : std::runtime_error(msg) {}
};

template <typename... Args>
std::string StrCat(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace cbmdiar

#endif  // CBMDIAR_COMMON_H_
