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

#include "eejoin/signatures.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "eejoin/error.h"

namespace eejoin {

const char *SignatureKindName(SignatureKind kind) {
  switch (kind) {
    case SignatureKind::kSingleWord:
      return "single_word";
    case SignatureKind::kPrefix:
      return "prefix";
    case SignatureKind::kLsh:
      return "lsh";
    case SignatureKind::kJaccardVariant:
      return "jaccard_variant";
  }
  return "?";
}

SignatureKind ParseSignatureKind(std::string_view name) {
  if (name == "single_word" || name == "per_word") return SignatureKind::kSingleWord;
  if (name == "prefix") return SignatureKind::kPrefix;
  if (name == "lsh") return SignatureKind::kLsh;
  if (name == "jaccard_variant" || name == "variant") {
    return SignatureKind::kJaccardVariant;
  }
  throw UsageError("unknown signature scheme '" + std::string(name) + "'");
}

void ValidateScheme(const SignatureScheme &scheme) {
  if (scheme.kind == SignatureKind::kLsh &&
      (scheme.lsh_bands < 1 || scheme.lsh_rows < 1)) {
    throw UsageError("LSH bands and rows must be at least 1");
  }
}

TokenOrder::TokenOrder(std::unordered_map<TokenId, std::int64_t> frequency,
                       TokenOrderDirection direction)
    : frequency_(std::move(frequency)), direction_(direction) {}

std::int64_t TokenOrder::Frequency(TokenId id) const {
  auto it = frequency_.find(id);
  return it == frequency_.end() ? 0 : it->second;
}

bool TokenOrder::Less(TokenId a, TokenId b) const {
  std::int64_t fa = Frequency(a), fb = Frequency(b);
  if (fa != fb) {
    return direction_ == TokenOrderDirection::kRareFirst ? fa < fb : fa > fb;
  }
  return a < b;
}

std::vector<std::size_t> TokenOrder::Sort(const TokenSet &s) const {
  std::vector<std::size_t> pos(s.size());
  std::iota(pos.begin(), pos.end(), 0);
  auto ids = s.ids();
  std::sort(pos.begin(), pos.end(),
            [&](std::size_t a, std::size_t b) { return Less(ids[a], ids[b]); });
  return pos;
}

std::uint64_t TokenOrder::Fingerprint() const {
  std::vector<std::pair<TokenId, std::int64_t>> entries(frequency_.begin(),
                                                        frequency_.end());
  std::sort(entries.begin(), entries.end());
  std::uint64_t h = SplitMix64(static_cast<std::uint64_t>(direction_) + 1);
  for (const auto &[id, f] : entries) {
    h = SplitMix64(h ^ id);
    h = SplitMix64(h ^ static_cast<std::uint64_t>(f));
  }
  return h;
}

std::vector<TokenId> PrefixTokens(const TokenSet &s, const TokenOrder &order,
                                  const SimilarityThreshold &gamma) {
  Ratio slack = Ratio(1) - gamma.value();
  std::vector<TokenId> prefix;
  Weight acc = 0;
  for (std::size_t p : order.Sort(s)) {
    prefix.push_back(s.ids()[p]);
    acc += s.weights()[p];
    if (ExceedsFraction(acc, s.total_weight(), slack)) break;
  }
  return prefix;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

std::vector<TokenSetKey> Singletons(std::span<const TokenId> ids) {
  std::vector<TokenSetKey> keys;
  keys.reserve(ids.size());
  for (TokenId id : ids) keys.push_back({id});
  return keys;
}

// Enumerates non-empty subsets of `ids` (ascending) and keeps those accepted
// by `keep(key, weight)`. Throws when the subset count exceeds the cap.
template <typename Keep>
std::vector<TokenSetKey> Subsets(const std::vector<TokenId> &ids,
                                 const std::vector<Weight> &weights,
                                 std::size_t cap, Keep keep) {
  const std::size_t m = ids.size();
  if (m >= 63 || ((std::uint64_t{1} << m) - 1) > cap) {
    throw VariantExplosion(std::min<std::size_t>(cap, m >= 63 ? cap : (std::uint64_t{1} << m) - 1), cap);
  }
  std::vector<TokenSetKey> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    TokenSetKey key;
    Weight w = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        key.push_back(ids[i]);
        w += weights[i];
      }
    }
    if (keep(key, w)) out.push_back(std::move(key));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<TokenSetKey> EntityKeys(SignatureKind kind, const TokenSet &entity,
                                    const MatchOptions &match) {
  switch (kind) {
    case SignatureKind::kSingleWord:
      return Singletons(entity.ids());
    case SignatureKind::kPrefix: {
      if (match.predicate == Predicate::kMissing) return Singletons(entity.ids());
      auto prefix = PrefixTokens(entity, *match.order, match.gamma);
      std::sort(prefix.begin(), prefix.end());
      return Singletons(prefix);
    }
    case SignatureKind::kJaccardVariant: {
      if (match.predicate == Predicate::kExtra) {
        return GenerateJaccardVariants(entity, match.gamma, match.variant_cap);
      }
      std::vector<TokenId> ids(entity.ids().begin(), entity.ids().end());
      std::vector<Weight> ws(entity.weights().begin(), entity.weights().end());
      return Subsets(ids, ws, match.variant_cap,
                     [](const TokenSetKey &, Weight) { return true; });
    }
    case SignatureKind::kLsh:
      break;
  }
  throw UsageError("LSH signatures have no token-set keys");
}

std::vector<TokenSetKey> ProbeKeys(SignatureKind kind, const TokenSet &probe,
                                   const MatchOptions &match,
                                   const TokenTable *table) {
  std::vector<TokenId> ids;
  std::vector<Weight> ws;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    if (table != nullptr && !table->Contains(probe.ids()[i])) continue;
    ids.push_back(probe.ids()[i]);
    ws.push_back(probe.weights()[i]);
  }
  switch (kind) {
    case SignatureKind::kSingleWord:
      return Singletons(ids);
    case SignatureKind::kPrefix: {
      if (match.predicate == Predicate::kExtra) return Singletons(ids);
      auto prefix = PrefixTokens(probe, *match.order, match.gamma);
      std::sort(prefix.begin(), prefix.end());
      std::vector<TokenId> kept;
      std::set_intersection(prefix.begin(), prefix.end(), ids.begin(), ids.end(),
                            std::back_inserter(kept));
      return Singletons(kept);
    }
    case SignatureKind::kJaccardVariant: {
      if (match.predicate == Predicate::kMissing) {
        const Weight whole = probe.total_weight();
        return Subsets(ids, ws, match.variant_cap, [&](const TokenSetKey &, Weight w) {
          return match.gamma.Reached(w, whole);
        });
      }
      if (table == nullptr) {
        return Subsets(ids, ws, match.variant_cap,
                       [](const TokenSetKey &, Weight) { return true; });
      }
      // A key k equal to e ∩ probe needs w(k) >= gamma * w(e), and w(e) is at
      // least the lightest entity containing any single token of k.
      return Subsets(ids, ws, match.variant_cap, [&](const TokenSetKey &key, Weight w) {
        Weight need = 0;
        for (TokenId id : key) need = std::max(need, table->MinEntityWeight(id));
        return match.gamma.Reached(w, need);
      });
    }
    case SignatureKind::kLsh:
      break;
  }
  throw UsageError("LSH signatures have no token-set keys");
}

std::vector<std::uint64_t> LshBands(const TokenSet &s, const SignatureScheme &scheme) {
  ValidateScheme(scheme);
  const int hashes = scheme.lsh_bands * scheme.lsh_rows;
  std::vector<std::uint64_t> mins(hashes, std::numeric_limits<std::uint64_t>::max());
  for (int j = 0; j < hashes; ++j) {
    std::uint64_t salt = SplitMix64(scheme.seed * 0x100000001B3ULL + j);
    for (TokenId id : s.ids()) {
      mins[j] = std::min(mins[j], SplitMix64(salt ^ id));
    }
  }
  std::vector<std::uint64_t> bands(scheme.lsh_bands);
  for (int b = 0; b < scheme.lsh_bands; ++b) {
    std::uint64_t h = SplitMix64(static_cast<std::uint64_t>(b) + 0x51ED);
    for (int r = 0; r < scheme.lsh_rows; ++r) {
      h = SplitMix64(h ^ mins[b * scheme.lsh_rows + r]);
    }
    bands[b] = h;
  }
  return bands;
}

namespace {

template <int N>
void PutBigEndian(std::string *out, std::uint64_t v) {
  char buf[N];
  for (int i = N - 1; i >= 0; --i, v >>= 8) buf[i] = static_cast<char>(v);
  out->append(buf, N);
}

void PutU32(std::string *out, std::uint32_t v) { PutBigEndian<4>(out, v); }
void PutU64(std::string *out, std::uint64_t v) { PutBigEndian<8>(out, v); }

}  // namespace

std::vector<std::string> SignaturesOf(const TokenSet &item,
                                      const SignatureScheme &scheme, Side side,
                                      const MatchOptions &match,
                                      const TokenTable *table) {
  if (item.empty()) throw DataError("cannot sign an empty token set");
  std::vector<std::string> sigs;
  const char tag = static_cast<char>('a' + static_cast<int>(scheme.kind));
  if (scheme.kind == SignatureKind::kLsh) {
    auto bands = LshBands(item, scheme);
    for (std::size_t b = 0; b < bands.size(); ++b) {
      std::string sig(1, tag);
      PutU32(&sig, static_cast<std::uint32_t>(b));
      PutU64(&sig, bands[b]);
      sigs.push_back(std::move(sig));
    }
  } else {
    auto keys = side == Side::kEntity ? EntityKeys(scheme.kind, item, match)
                                      : ProbeKeys(scheme.kind, item, match, table);
    sigs.reserve(keys.size());
    for (const auto &key : keys) {
      std::string sig(1, tag);
      sig.reserve(1 + 4 * key.size());
      for (TokenId id : key) PutU32(&sig, id);
      sigs.push_back(std::move(sig));
    }
  }
  std::sort(sigs.begin(), sigs.end());
  sigs.erase(std::unique(sigs.begin(), sigs.end()), sigs.end());
  return sigs;
}

std::size_t EntitySignatureCount(const TokenSet &entity,
                                 const SignatureScheme &scheme,
                                 const MatchOptions &match) {
  if (scheme.kind == SignatureKind::kLsh) {
    return static_cast<std::size_t>(scheme.lsh_bands);
  }
  return EntityKeys(scheme.kind, entity, match).size();
}

}  // namespace eejoin
