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

#include "eejoin/textcore.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eejoin/error.h"

namespace eejoin {

TokenId TokenDictionary::Intern(std::string_view text) {
  auto it = ids_.find(std::string(text));
  if (it != ids_.end()) return it->second;
  TokenId id = static_cast<TokenId>(texts_.size());
  texts_.emplace_back(text);
  ids_.emplace(texts_.back(), id);
  return id;
}

bool TokenDictionary::Find(std::string_view text, TokenId *id) const {
  auto it = ids_.find(std::string(text));
  if (it == ids_.end()) return false;
  *id = it->second;
  return true;
}

WeightedTokenSeq::WeightedTokenSeq(std::vector<TokenId> tokens)
    : tokens_(std::move(tokens)),
      weights_(tokens_.size(), 1),
      total_(static_cast<Weight>(tokens_.size())) {}

WeightedTokenSeq::WeightedTokenSeq(std::vector<TokenId> tokens,
                                   std::vector<Weight> weights)
    : tokens_(std::move(tokens)), weights_(std::move(weights)) {
  if (tokens_.size() != weights_.size()) {
    throw DataError("token and weight counts differ");
  }
  for (Weight w : weights_) {
    if (w < 0) throw DataError("negative token weight");
    total_ += w;
  }
}

void WeightedTokenSeq::Append(TokenId token, Weight weight) {
  if (weight < 0) throw DataError("negative token weight");
  tokens_.push_back(token);
  weights_.push_back(weight);
  total_ += weight;
}

std::size_t TokenSetKeyHash::operator()(const TokenSetKey &key) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (TokenId id : key) {
    h ^= id;
    h *= 1099511628211ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

TokenSet::TokenSet(const WeightedTokenSeq &seq)
    : TokenSet(seq.tokens(), seq.weights()) {}

TokenSet::TokenSet(std::span<const TokenId> tokens,
                   std::span<const Weight> weights) {
  ids_.reserve(tokens.size());
  weights_.reserve(tokens.size());
  if (tokens.size() <= 16) {
    // Short inputs: sorted insertion, skipping repeats so the first
    // occurrence keeps its weight.
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      auto it = std::lower_bound(ids_.begin(), ids_.end(), tokens[i]);
      if (it != ids_.end() && *it == tokens[i]) continue;
      weights_.insert(weights_.begin() + (it - ids_.begin()), weights[i]);
      ids_.insert(it, tokens[i]);
      total_ += weights[i];
    }
    return;
  }
  std::vector<std::size_t> order(tokens.size());
  std::iota(order.begin(), order.end(), 0);
  // Stable so that the first occurrence of a repeated token wins.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return tokens[a] < tokens[b];
  });
  for (std::size_t i : order) {
    if (!ids_.empty() && ids_.back() == tokens[i]) continue;
    ids_.push_back(tokens[i]);
    weights_.push_back(weights[i]);
    total_ += weights[i];
  }
}

Weight TokenSet::WeightOf(TokenId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return 0;
  return weights_[it - ids_.begin()];
}

Weight IntersectionWeight(const TokenSet &a, const TokenSet &b) {
  auto ai = a.ids(), bi = b.ids();
  auto aw = a.weights();
  std::size_t i = 0, j = 0;
  Weight w = 0;
  while (i < ai.size() && j < bi.size()) {
    if (ai[i] < bi[j]) {
      ++i;
    } else if (bi[j] < ai[i]) {
      ++j;
    } else {
      w += aw[i];
      ++i;
      ++j;
    }
  }
  return w;
}

Weight KeyWeight(const TokenSetKey &key, const TokenSet &s) {
  Weight w = 0;
  for (TokenId id : key) w += s.WeightOf(id);
  return w;
}

SimilarityThreshold::SimilarityThreshold(Ratio gamma) : gamma_(gamma) {
  if (gamma_ <= 0 || gamma_ > 1) {
    throw UsageError("similarity threshold must lie in (0, 1], got " +
                     FormatRatio(gamma_));
  }
}

SimilarityThreshold SimilarityThreshold::Parse(std::string_view text) {
  return SimilarityThreshold(ParseRatio(text));
}

const char *PredicateName(Predicate p) {
  return p == Predicate::kExtra ? "extra" : "missing";
}

Predicate ParsePredicate(std::string_view name) {
  if (name == "extra") return Predicate::kExtra;
  if (name == "missing") return Predicate::kMissing;
  throw UsageError("unknown predicate '" + std::string(name) + "'");
}

Ratio JaccardSimilarity(const TokenSet &a, const TokenSet &b) {
  Weight inter = IntersectionWeight(a, b);
  Weight uni = a.total_weight() + b.total_weight() - inter;
  if (a.empty() && b.empty()) throw DataError("undefined similarity");
  if (uni == 0) throw DataError("undefined similarity: zero total weight");
  return Ratio(inter, uni);
}

Ratio JaccardSimilarity(const WeightedTokenSeq &a, const WeightedTokenSeq &b) {
  return JaccardSimilarity(TokenSet(a), TokenSet(b));
}

Ratio JaccardContainmentMissing(const TokenSet &e, const TokenSet &s) {
  if (s.empty() || s.total_weight() == 0) {
    throw DataError("containment undefined for an empty mention");
  }
  return Ratio(IntersectionWeight(s, e), s.total_weight());
}

Ratio JaccardContainmentMissing(const WeightedTokenSeq &e,
                                const WeightedTokenSeq &s) {
  return JaccardContainmentMissing(TokenSet(e), TokenSet(s));
}

Ratio JaccardContainmentExtra(const TokenSet &e, const TokenSet &s) {
  if (e.empty() || e.total_weight() == 0) {
    throw DataError("containment undefined for an empty entity");
  }
  return Ratio(IntersectionWeight(e, s), e.total_weight());
}

Ratio JaccardContainmentExtra(const WeightedTokenSeq &e,
                              const WeightedTokenSeq &s) {
  return JaccardContainmentExtra(TokenSet(e), TokenSet(s));
}

Ratio ContainmentScore(Predicate predicate, const TokenSet &e,
                       const TokenSet &s) {
  return predicate == Predicate::kExtra ? JaccardContainmentExtra(e, s)
                                        : JaccardContainmentMissing(e, s);
}

ContainmentTerms Containment(Predicate predicate, const TokenSet &e, const TokenSet &s) {
  if (predicate == Predicate::kExtra) return {IntersectionWeight(e, s), e.total_weight()};
  return {IntersectionWeight(s, e), s.total_weight()};
}

bool Matches(Predicate predicate, const TokenSet &e, const TokenSet &s,
             const SimilarityThreshold &gamma) {
  const ContainmentTerms t = Containment(predicate, e, s);
  return t.whole != 0 && gamma.Reached(t.overlap, t.whole);
}

namespace {

class VariantEnumerator {
 public:
  VariantEnumerator(const TokenSet &s, const SimilarityThreshold &gamma,
                    std::size_t cap)
      : gamma_(gamma), total_(s.total_weight()), cap_(cap) {
    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), 0);
    // Heaviest first, so the remaining-weight bound prunes early.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return s.weights()[a] > s.weights()[b];
    });
    for (std::size_t i : order) {
      ids_.push_back(s.ids()[i]);
      weights_.push_back(s.weights()[i]);
    }
    remaining_.assign(ids_.size() + 1, 0);
    for (std::size_t i = ids_.size(); i-- > 0;) {
      remaining_[i] = remaining_[i + 1] + weights_[i];
    }
  }

  std::vector<TokenSetKey> Run() {
    Visit(0, 0);
    for (auto &key : out_) std::sort(key.begin(), key.end());
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  void Visit(std::size_t i, Weight current) {
    if (!gamma_.Reached(current + remaining_[i], total_)) return;
    if (i == ids_.size()) {
      if (chosen_.empty()) return;
      if (out_.size() == cap_) throw VariantExplosion(out_.size(), cap_);
      out_.push_back(chosen_);
      return;
    }
    chosen_.push_back(ids_[i]);
    Visit(i + 1, current + weights_[i]);
    chosen_.pop_back();
    Visit(i + 1, current);
  }

  const SimilarityThreshold &gamma_;
  Weight total_;
  std::size_t cap_;
  std::vector<TokenId> ids_;
  std::vector<Weight> weights_;
  std::vector<Weight> remaining_;
  TokenSetKey chosen_;
  std::vector<TokenSetKey> out_;
};

}  // namespace

std::vector<TokenSetKey> GenerateJaccardVariants(
    const TokenSet &s, const SimilarityThreshold &gamma, std::size_t cap) {
  if (s.empty()) throw DataError("cannot generate variants of an empty set");
  return VariantEnumerator(s, gamma, cap).Run();
}

std::vector<TokenSetKey> GenerateJaccardVariants(
    const WeightedTokenSeq &s, const SimilarityThreshold &gamma,
    std::size_t cap) {
  return GenerateJaccardVariants(TokenSet(s), gamma, cap);
}

namespace {

// Decodes one UTF-8 code point starting at text[i]. Invalid bytes decode to
// themselves with length one so that no input is ever dropped.
char32_t DecodeUtf8(std::string_view text, std::size_t i, std::size_t *len) {
  auto b0 = static_cast<unsigned char>(text[i]);
  auto cont = [&](std::size_t k) {
    return i + k < text.size() &&
           (static_cast<unsigned char>(text[i + k]) & 0xC0) == 0x80;
  };
  auto byte = [&](std::size_t k) {
    return static_cast<char32_t>(static_cast<unsigned char>(text[i + k]) & 0x3F);
  };
  if (b0 < 0x80) {
    *len = 1;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0 && cont(1)) {
    *len = 2;
    return (static_cast<char32_t>(b0 & 0x1F) << 6) | byte(1);
  }
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    *len = 3;
    return (static_cast<char32_t>(b0 & 0x0F) << 12) | (byte(1) << 6) | byte(2);
  }
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    *len = 4;
    return (static_cast<char32_t>(b0 & 0x07) << 18) | (byte(1) << 12) |
           (byte(2) << 6) | byte(3);
  }
  *len = 1;
  return 0xDC00 + b0;  // lone surrogate range, never produced by valid UTF-8
}

void EncodeUtf8(char32_t cp, std::string *out) {
  if (cp >= 0xDC80 && cp <= 0xDCFF) {
    out->push_back(static_cast<char>(cp - 0xDC00));
  } else if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool IsSpace(char32_t c) {
  return c == ' ' || (c >= 0x09 && c <= 0x0D) || c == 0x85 || c == 0xA0 ||
         c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 ||
         c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000;
}

bool IsPunct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  if (c >= 0xA1 && c <= 0xBF) {
    // Latin-1 symbols, minus ordinal indicators, micro, and digit forms.
    return c != 0xAA && c != 0xB2 && c != 0xB3 && c != 0xB5 && c != 0xB9 &&
           c != 0xBA && c != 0xBC && c != 0xBD && c != 0xBE;
  }
  return c == 0xD7 || c == 0xF7 || (c >= 0x2010 && c <= 0x2027) ||
         (c >= 0x2030 && c <= 0x205E) || (c >= 0x3001 && c <= 0x3003) ||
         (c >= 0x3008 && c <= 0x3011) || (c >= 0x3014 && c <= 0x301F) ||
         (c >= 0xFF01 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20) ||
         (c >= 0xFF3B && c <= 0xFF40) || (c >= 0xFF5B && c <= 0xFF65);
}

// Simple (one-to-one) case folding for the Latin, Greek and Cyrillic blocks.
char32_t FoldCase(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c < 0xC0) return c;
  if (c <= 0xDE) return c == 0xD7 ? c : c + 32;
  if (c >= 0x100 && c <= 0x137) return c | 1;
  if (c >= 0x139 && c <= 0x148) return (c & 1) ? c + 1 : c;
  if (c >= 0x14A && c <= 0x177) return c | 1;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E) return (c & 1) ? c + 1 : c;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  return c;
}

enum class CharClass { kSpace, kPunct, kWord };

CharClass Classify(char32_t c) {
  if (IsSpace(c)) return CharClass::kSpace;
  if (IsPunct(c)) return CharClass::kPunct;
  return CharClass::kWord;
}

}  // namespace

std::vector<std::string> SplitTokens(std::string_view text) {
  std::vector<char32_t> cps;
  cps.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    std::size_t len = 1;
    cps.push_back(DecodeUtf8(text, i, &len));
    i += len;
  }
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    CharClass cls = Classify(cps[i]);
    bool keep = cls == CharClass::kWord;
    if (cls == CharClass::kPunct) {
      keep = i > 0 && i + 1 < cps.size() &&
             Classify(cps[i - 1]) == CharClass::kWord &&
             Classify(cps[i + 1]) == CharClass::kWord;
    }
    if (keep) {
      EncodeUtf8(FoldCase(cps[i]), &current);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

WeightedTokenSeq Tokenize(std::string_view text, TokenDictionary &dict) {
  WeightedTokenSeq seq;
  for (const auto &tok : SplitTokens(text)) seq.Append(dict.Intern(tok), 1);
  return seq;
}

const char *WeightingSchemeName(WeightingScheme s) {
  return s == WeightingScheme::kUnit ? "unit" : "idf";
}

WeightingScheme ParseWeightingScheme(std::string_view name) {
  if (name == "unit") return WeightingScheme::kUnit;
  if (name == "idf") return WeightingScheme::kIdf;
  throw UsageError("unknown weighting scheme '" + std::string(name) + "'");
}

TokenWeights::TokenWeights(const WeightingOptions &options,
                           const EntityFrequencyTable &stats)
    : options_(options) {
  if (options_.default_weight < 1) {
    throw UsageError("default token weight must be at least 1");
  }
  if (options_.scheme == WeightingScheme::kUnit) return;
  if (options_.idf_scale < 1) throw UsageError("idf scale must be at least 1");
  for (const auto &[token, count] : stats.frequency) {
    if (count <= 0) continue;
    double idf = std::log(static_cast<double>(stats.entity_count) /
                          static_cast<double>(count));
    Weight w = std::llround(static_cast<double>(options_.idf_scale) * idf);
    weights_[token] = std::max<Weight>(1, w);
  }
}

Weight TokenWeights::Of(TokenId id) const {
  if (options_.scheme == WeightingScheme::kUnit) return 1;
  auto it = weights_.find(id);
  return it == weights_.end() ? options_.default_weight : it->second;
}

WeightedTokenSeq AssignWeights(const WeightedTokenSeq &seq,
                               const TokenWeights &weights) {
  WeightedTokenSeq out;
  for (TokenId id : seq.tokens()) out.Append(id, weights.Of(id));
  return out;
}

WeightedTokenSeq AssignWeights(const WeightedTokenSeq &seq,
                               WeightingScheme scheme,
                               const EntityFrequencyTable &stats,
                               const WeightingOptions &options) {
  WeightingOptions opts = options;
  opts.scheme = scheme;
  return AssignWeights(seq, TokenWeights(opts, stats));
}

}  // namespace eejoin
