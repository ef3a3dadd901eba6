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

#ifndef EEJOIN_INDEXING_H_
#define EEJOIN_INDEXING_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eejoin/candgen.h"
#include "eejoin/corpus.h"
#include "eejoin/signatures.h"

namespace eejoin {

enum class IndexScheme { kPerWord, kPrefix, kJaccardVariant };

const char *IndexSchemeName(IndexScheme scheme);
IndexScheme ParseIndexScheme(std::string_view name);

// single word -> per-word, prefix -> prefix, variant -> variant. Throws
// UsageError for LSH, which has no deterministic index form.
IndexScheme IndexSchemeFor(SignatureKind kind);
SignatureKind KeyKindFor(IndexScheme scheme);

// Footprint constants shared by the packer and the cost model.
inline constexpr std::int64_t kBytesPerPosting = 16;
inline constexpr std::int64_t kBytesPerKey = 32;

struct PostingList {
  TokenSetKey key;
  std::vector<EntityId> entity_ids;  // ascending, duplicate-free
};

struct IndexHit {
  EntityId entity_id = 0;
  Ratio score;

  bool operator==(const IndexHit &) const = default;
};

// Inverted index over one partition of dictionary entities. Immutable after
// construction; lookups are safe from any number of threads.
class EntityIndex {
 public:
  EntityIndex(IndexScheme scheme, const MatchOptions &match);

  // Indexes one entity under its scheme keys.
  void Add(const Entity &entity);

  IndexScheme scheme() const { return scheme_; }
  const MatchOptions &match() const { return match_; }
  std::size_t key_count() const { return postings_.size(); }
  std::size_t posting_count() const { return posting_count_; }
  std::size_t entity_count() const { return entities_.size(); }

  // kBytesPerKey * keys + kBytesPerPosting * postings.
  std::int64_t size_bytes() const;

  const std::vector<EntityId> *Postings(const TokenSetKey &key) const;

  // Postings sorted by key.
  std::vector<PostingList> SortedPostings() const;

  // Entity ids in insertion order.
  std::vector<EntityId> EntityIds() const;

  // Verified matches of a probe, sorted by entity id. Per-word and prefix
  // postings yield candidates that are verified; variant keys match exactly
  // and the score is computed for reporting only. `gamma` must equal the
  // build threshold. Throws DataError otherwise or for an empty probe.
  std::vector<IndexHit> Lookup(const TokenSet &probe,
                               const SimilarityThreshold &gamma) const;

  // Raw candidates (before verification), for tests and instrumentation.
  std::vector<EntityId> Candidates(const TokenSet &probe) const;

  // Reattaches entity token sets after loading postings from disk.
  void AttachEntities(const Dictionary &dict);

  // Writes the "ee-index v1" text form.
  void Save(std::ostream &out) const;

  // Reads postings written by Save. Entities must be attached before lookups.
  static EntityIndex Load(std::istream &in, const MatchOptions &match);

  bool SamePostings(const EntityIndex &other) const;

 private:
  IndexScheme scheme_;
  MatchOptions match_;
  std::unordered_map<TokenSetKey, std::vector<EntityId>, TokenSetKeyHash> postings_;
  std::unordered_map<EntityId, TokenSet> entities_;
  std::vector<EntityId> insertion_order_;
  TokenTable table_;  // probe-side key pruning
  std::size_t posting_count_ = 0;
};

struct IndexPartition {
  EntityIndex index;
  EntityRange range;  // positions in the dictionary ordering
};

// Upper bound on the bytes an index over `range` occupies.
std::int64_t EstimateFootprint(const Dictionary &dict, EntityRange range,
                               IndexScheme scheme, const MatchOptions &match);

// Footprint of one entity's postings under a scheme.
std::int64_t EntityFootprint(const Entity &entity, IndexScheme scheme,
                             const MatchOptions &match);

// Greedily packs entities, in ordering order, into partitions whose footprint
// estimate stays within memory_budget. Throws DataError when one entity alone
// exceeds the budget.
std::vector<IndexPartition> BuildIndex(const Dictionary &dict, EntityRange range,
                                       IndexScheme scheme,
                                       const MatchOptions &match,
                                       std::int64_t memory_budget);

}  // namespace eejoin

#endif  // EEJOIN_INDEXING_H_
