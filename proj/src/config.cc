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

#include "eejoin/config.h"

#include <charconv>
#include <fstream>

#include "eejoin/error.h"

namespace eejoin {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
T Number(std::string_view key, std::string_view text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

std::vector<SignatureKind> Schemes(std::string_view text) {
  std::vector<SignatureKind> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = Trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(ParseSignatureKind(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string JoinSchemes(const std::vector<SignatureKind> &kinds) {
  std::string out;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (i) out.push_back(',');
    out += SignatureKindName(kinds[i]);
  }
  return out;
}

}  // namespace

void SetConfigValue(RunConfig &c, std::string_view key, std::string_view value) {
  value = Trim(value);
  try {
    if (key == "gamma") c.gamma = ParseRatio(value);
    else if (key == "predicate") c.predicate = ParsePredicate(value);
    else if (key == "weighting") c.weighting.scheme = ParseWeightingScheme(value);
    else if (key == "idf_scale") c.weighting.idf_scale = Number<std::int64_t>(key, value);
    else if (key == "default_weight") c.weighting.default_weight = Number<Weight>(key, value);
    else if (key == "mappers") c.mappers = Number<int>(key, value);
    else if (key == "reducers") c.reducers = Number<int>(key, value);
    else if (key == "memory_budget") c.memory_budget = Number<std::int64_t>(key, value);
    else if (key == "index_schemes") c.index_schemes = Schemes(value);
    else if (key == "ssjoin_schemes") c.ssjoin_schemes = Schemes(value);
    else if (key == "costs") c.costs_path = std::string(value);
    else if (key == "sample_rate") c.sample_rate = ParseRatio(value);
    else if (key == "seed") c.seed = Number<std::uint64_t>(key, value);
    else if (key == "lsh_bands") c.lsh_bands = Number<int>(key, value);
    else if (key == "lsh_rows") c.lsh_rows = Number<int>(key, value);
    else if (key == "variant_cap") c.variant_cap = Number<std::size_t>(key, value);
    else if (key == "objective") c.objective = ParseObjective(value);
    else throw UsageError("unknown config key '" + std::string(key) + "'");
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::kUsage) throw;
    throw UsageError("bad value for " + std::string(key) + ": " + e.what());
  }
}

void ValidateConfig(const RunConfig &c) {
  SimilarityThreshold check(c.gamma);
  (void)check;
  if (c.mappers < 1) throw UsageError("mappers must be at least 1");
  if (c.reducers < 1) throw UsageError("reducers must be at least 1");
  if (c.memory_budget < 1) throw UsageError("memory_budget must be positive");
  if (c.sample_rate <= 0 || c.sample_rate > 1) throw UsageError("sample_rate must be in (0, 1]");
  if (c.lsh_bands < 1 || c.lsh_rows < 1) throw UsageError("lsh_bands and lsh_rows must be at least 1");
  if (c.variant_cap < 1) throw UsageError("variant_cap must be at least 1");
  if (c.weighting.idf_scale <= 0) throw UsageError("idf_scale must be positive");
  if (c.weighting.default_weight < 1) throw UsageError("default_weight must be at least 1");
  if (c.index_schemes.empty() && c.ssjoin_schemes.empty()) {
    throw UsageError("no schemes configured");
  }
}

RunConfig ReadConfig(std::istream &in, const std::string &source) {
  RunConfig config;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    std::string_view text = Trim(line);
    if (text.empty() || text[0] == '#') continue;
    const std::string where = source + ":" + std::to_string(line_no);
    auto eq = text.find('=');
    if (eq == std::string_view::npos) throw DataError(where + ": expected key=value");
    try {
      SetConfigValue(config, Trim(text.substr(0, eq)), text.substr(eq + 1));
    } catch (const Error &e) {
      throw DataError(where + ": " + e.what());
    }
  }
  try {
    ValidateConfig(config);
  } catch (const Error &e) {
    throw DataError(source + ": " + e.what());
  }
  return config;
}

RunConfig LoadConfig(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path);
  return ReadConfig(in, path);
}

void WriteConfig(std::ostream &out, const RunConfig &c) {
  out << "gamma=" << FormatRatio(c.gamma) << "\n"
      << "predicate=" << PredicateName(c.predicate) << "\n"
      << "weighting=" << WeightingSchemeName(c.weighting.scheme) << "\n"
      << "idf_scale=" << c.weighting.idf_scale << "\n"
      << "default_weight=" << c.weighting.default_weight << "\n"
      << "mappers=" << c.mappers << "\n"
      << "reducers=" << c.reducers << "\n"
      << "memory_budget=" << c.memory_budget << "\n"
      << "index_schemes=" << JoinSchemes(c.index_schemes) << "\n"
      << "ssjoin_schemes=" << JoinSchemes(c.ssjoin_schemes) << "\n";
  if (!c.costs_path.empty()) out << "costs=" << c.costs_path << "\n";
  out << "sample_rate=" << FormatRatio(c.sample_rate) << "\n"
      << "seed=" << c.seed << "\n"
      << "lsh_bands=" << c.lsh_bands << "\n"
      << "lsh_rows=" << c.lsh_rows << "\n"
      << "variant_cap=" << c.variant_cap << "\n"
      << "objective=" << ObjectiveName(c.objective) << "\n";
}

MatchOptions MatchOptionsFor(const RunConfig &c) {
  MatchOptions m(SimilarityThreshold(c.gamma), c.predicate);
  m.variant_cap = c.variant_cap;
  return m;
}

SignatureScheme LshSchemeFor(const RunConfig &c) {
  SignatureScheme s;
  s.kind = SignatureKind::kLsh;
  s.lsh_bands = c.lsh_bands;
  s.lsh_rows = c.lsh_rows;
  s.seed = c.seed;
  return s;
}

CostConstants LoadCostConstants(const RunConfig &c) {
  if (c.costs_path.empty()) return {};
  std::ifstream in(c.costs_path);
  if (!in) throw DataError("cannot open cost constants " + c.costs_path);
  return ReadCosts(in, c.costs_path);
}

}  // namespace eejoin
