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

#ifndef EEJOIN_CONFIG_H_
#define EEJOIN_CONFIG_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "eejoin/costmodel.h"
#include "eejoin/signatures.h"
#include "eejoin/textcore.h"

namespace eejoin {

struct RunConfig {
  Ratio gamma{4, 5};
  Predicate predicate = Predicate::kExtra;
  WeightingOptions weighting;
  int mappers = 4;
  int reducers = 4;
  std::int64_t memory_budget = std::int64_t{1} << 26;
  std::vector<SignatureKind> index_schemes = {SignatureKind::kSingleWord,
                                              SignatureKind::kPrefix,
                                              SignatureKind::kJaccardVariant};
  std::vector<SignatureKind> ssjoin_schemes = {
      SignatureKind::kSingleWord, SignatureKind::kPrefix, SignatureKind::kLsh,
      SignatureKind::kJaccardVariant};
  std::string costs_path;  // empty: default constants
  Ratio sample_rate{1};
  std::uint64_t seed = 42;
  int lsh_bands = 16;
  int lsh_rows = 4;
  std::size_t variant_cap = kDefaultVariantCap;
  Objective objective = Objective::kJobCompletion;
};

// Sets one field from its textual form. Throws UsageError for an unknown key
// or a malformed value.
void SetConfigValue(RunConfig &config, std::string_view key, std::string_view value);

// Throws UsageError when a field is out of range.
void ValidateConfig(const RunConfig &config);

// Flat `key=value` lines; '#' comments and blank lines allowed. Errors carry
// source:line and are data errors.
RunConfig ReadConfig(std::istream &in, const std::string &source = "<config>");
RunConfig LoadConfig(const std::string &path);

void WriteConfig(std::ostream &out, const RunConfig &config);

// Match options, LSH scheme and optimizer settings implied by a config.
MatchOptions MatchOptionsFor(const RunConfig &config);
SignatureScheme LshSchemeFor(const RunConfig &config);
CostConstants LoadCostConstants(const RunConfig &config);

}  // namespace eejoin

#endif  // EEJOIN_CONFIG_H_
