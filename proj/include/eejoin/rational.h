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

#ifndef EEJOIN_RATIONAL_H_
#define EEJOIN_RATIONAL_H_

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

namespace eejoin {

// Similarity scores and thresholds. Weights are small integers, so 64-bit
// numerators and denominators never overflow for realistic inputs.
using Ratio = boost::rational<std::int64_t>;

// Cost-model quantities. Products of candidate counts, signature volumes and
// fractional constants outgrow 64 bits, so costs use arbitrary precision.
using Cost = boost::multiprecision::cpp_rational;

// Parses "3/4", "0.75" or "1" exactly. Throws DataError on malformed text.
Ratio ParseRatio(std::string_view text);

// Always "num/den", e.g. "1/1" for one.
std::string FormatRatio(const Ratio &r);

Cost ParseCost(std::string_view text);

// "num/den" or an integer when the denominator is one.
std::string FormatCost(const Cost &c);

inline Cost ToCost(const Ratio &r) {
  return Cost(r.numerator()) / Cost(r.denominator());
}

// part/whole >= threshold, evaluated without division or rounding.
inline bool ReachesFraction(std::int64_t part, std::int64_t whole,
                            const Ratio &threshold) {
  return static_cast<__int128>(part) * threshold.denominator() >=
         static_cast<__int128>(threshold.numerator()) * whole;
}

// part > fraction * whole, exactly.
inline bool ExceedsFraction(std::int64_t part, std::int64_t whole,
                            const Ratio &fraction) {
  return static_cast<__int128>(part) * fraction.denominator() >
         static_cast<__int128>(fraction.numerator()) * whole;
}

}  // namespace eejoin

#endif  // EEJOIN_RATIONAL_H_
