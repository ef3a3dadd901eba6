// Copyright 2026 The EE-Join Authors.
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

#ifndef EEJOIN_ERROR_H_
#define EEJOIN_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eejoin {

// Broad failure classes. The CLI maps them onto process exit codes.
enum class ErrorKind {
  kUsage,         // bad arguments or configuration
  kData,          // malformed input, I/O failure, violated precondition
  kVerification,  // result disagrees with the brute-force reference
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error DataError(const std::string &what) {
  return Error(ErrorKind::kData, what);
}

inline Error UsageError(const std::string &what) {
  return Error(ErrorKind::kUsage, what);
}

// Raised when enumerating Jaccard variants (or probe-side subset keys) would
// exceed the configured cap. Callers fall back to another signature scheme.
class VariantExplosion : public Error {
 public:
  VariantExplosion(std::size_t partial_count, std::size_t cap)
      : Error(ErrorKind::kData,
              "variant explosion: more than " + std::to_string(cap) +
                  " variants (enumerated " + std::to_string(partial_count) +
                  " before stopping)"),
        partial_count_(partial_count) {}

  std::size_t partial_count() const { return partial_count_; }

 private:
  std::size_t partial_count_;
};

}  // namespace eejoin

#endif  // EEJOIN_ERROR_H_
