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

#include "eejoin/rational.h"

#include <charconv>

#include "eejoin/error.h"

namespace eejoin {

namespace {

bool ParseInt(std::string_view text, std::int64_t *out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

[[noreturn]] void Malformed(std::string_view text) {
  throw DataError("malformed rational '" + std::string(text) + "'");
}

}  // namespace

Ratio ParseRatio(std::string_view text) {
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::int64_t num = 0, den = 0;
    if (!ParseInt(text.substr(0, slash), &num) ||
        !ParseInt(text.substr(slash + 1), &den) || den == 0) {
      Malformed(text);
    }
    return Ratio(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    std::int64_t v = 0;
    if (!ParseInt(text, &v)) Malformed(text);
    return Ratio(v);
  }
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (frac.empty() || frac.size() > 15) Malformed(text);
  bool negative = !whole.empty() && whole[0] == '-';
  if (negative) whole.remove_prefix(1);
  std::int64_t w = 0, f = 0;
  if (!whole.empty() && !ParseInt(whole, &w)) Malformed(text);
  for (char c : frac) {
    if (c < '0' || c > '9') Malformed(text);
  }
  ParseInt(frac, &f);
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  Ratio r = Ratio(w) + Ratio(f, scale);
  return negative ? -r : r;
}

std::string FormatRatio(const Ratio &r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Cost ParseCost(std::string_view text) {
  if (text.find('.') != std::string_view::npos) return ToCost(ParseRatio(text));
  try {
    return Cost(std::string(text));
  } catch (const std::exception &) {
    throw DataError("malformed cost value '" + std::string(text) + "'");
  }
}

std::string FormatCost(const Cost &c) { return c.str(); }

}  // namespace eejoin
