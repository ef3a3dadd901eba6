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

#ifndef EEJOIN_CORPUS_H_
#define EEJOIN_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "eejoin/rational.h"
#include "eejoin/textcore.h"

namespace eejoin {

using EntityId = std::int64_t;
using DocId = std::int64_t;

struct Entity {
  EntityId id = 0;
  WeightedTokenSeq surface;
  TokenSet set;  // distinct-token view of surface, kept in sync by Dictionary
};

struct Document {
  DocId id = 0;
  WeightedTokenSeq body;
};

// A contiguous range [begin, end) of positions in a dictionary's ordering.
struct EntityRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool operator==(const EntityRange &) const = default;
};

// The entity dictionary plus the frequency ordering the optimizer partitions.
// Entities are stored in ascending id order; ordering() is a permutation of
// storage positions.
class Dictionary {
 public:
  Dictionary() = default;

  // Validates ids and non-empty surfaces, drops entities whose token set
  // duplicates an earlier line (first wins), and starts with ascending-id
  // ordering. Throws DataError on duplicate ids or empty surfaces.
  static Dictionary Build(std::vector<Entity> entities);

  std::size_t size() const { return entities_.size(); }
  bool empty() const { return entities_.empty(); }

  // Longest entity in tokens.
  std::size_t max_length() const { return max_length_; }

  const std::vector<Entity> &entities() const { return entities_; }
  const std::vector<std::size_t> &ordering() const { return ordering_; }

  // The entity at position `pos` of the ordering.
  const Entity &ordered(std::size_t pos) const {
    return entities_[ordering_[pos]];
  }

  EntityRange all() const { return {0, entities_.size()}; }

  // nullptr when absent.
  const Entity *FindById(EntityId id) const;

  // Entity-count per token over the whole dictionary.
  EntityFrequencyTable EntityFrequencies() const;

  // Re-derives every entity's weights from a token weight table.
  void Reweight(const TokenWeights &weights);

  // Replaces the ordering. Throws DataError unless it is a permutation.
  void SetOrdering(std::vector<std::size_t> ordering);

 private:
  std::vector<Entity> entities_;
  std::vector<std::size_t> ordering_;
  std::unordered_map<EntityId, std::size_t> by_id_;
  std::size_t max_length_ = 0;
};

// Statistics the cost model consumes. Sampled counts are scaled by
// 1/sample_rate; everything else is exact.
struct CorpusStats {
  std::int64_t total_docs = 0;
  std::int64_t total_tokens = 0;
  std::int64_t sampled_docs = 0;
  Ratio sample_rate{1};
  // |C|: filtered candidate substrings.
  std::int64_t est_candidates = 0;
  // Probe-side signature volumes over the filtered candidates.
  std::int64_t est_candidate_tokens = 0;         // distinct dictionary tokens
  std::int64_t est_candidate_prefix_tokens = 0;  // probe prefix tokens
  std::int64_t est_candidate_variant_keys = 0;   // subset keys (saturating)
  std::unordered_map<TokenId, std::int64_t> token_doc_freq;
  EntityFrequencyTable token_entity_freq;
  std::map<EntityId, std::int64_t> entity_mention_freq;
};

// Orders entities by estimated mention frequency, descending; ties by
// ascending id. Throws DataError when an entity has no frequency.
Dictionary SortByFrequency(const Dictionary &dict, const CorpusStats &stats);

struct DictionaryLoadOptions {
  WeightingOptions weighting;
};

// Reads `entityId<TAB>surface` lines. '#' lines and blank lines are skipped.
// Weights come from the dictionary's own entity frequencies.
Dictionary ReadDictionary(std::istream &in, TokenDictionary &tokens,
                          const DictionaryLoadOptions &options = {},
                          const std::string &source = "<dictionary>");
Dictionary LoadDictionary(const std::string &path, TokenDictionary &tokens,
                          const DictionaryLoadOptions &options = {});

// Reads `docId<TAB>body` lines; "\n", "\t" and "\\" escapes in the body are
// decoded before tokenizing.
std::vector<Document> ReadDocuments(std::istream &in, TokenDictionary &tokens,
                                    const TokenWeights &weights,
                                    const std::string &source = "<documents>");
std::vector<Document> LoadDocuments(const std::string &path,
                                    TokenDictionary &tokens,
                                    const TokenWeights &weights);

// The weight table implied by a dictionary and weighting options.
TokenWeights DictionaryWeights(const Dictionary &dict,
                               const WeightingOptions &options);

}  // namespace eejoin

#endif  // EEJOIN_CORPUS_H_
