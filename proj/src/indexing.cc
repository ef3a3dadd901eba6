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

#include "eejoin/indexing.h"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <sstream>
#include <string>

#include "eejoin/error.h"

namespace eejoin {

const char *IndexSchemeName(IndexScheme scheme) {
  switch (scheme) {
    case IndexScheme::kPerWord:
      return "per_word";
    case IndexScheme::kPrefix:
      return "prefix";
    case IndexScheme::kJaccardVariant:
      return "jaccard_variant";
  }
  return "?";
}

IndexScheme ParseIndexScheme(std::string_view name) {
  return IndexSchemeFor(ParseSignatureKind(name));
}

IndexScheme IndexSchemeFor(SignatureKind kind) {
  switch (kind) {
    case SignatureKind::kSingleWord:
      return IndexScheme::kPerWord;
    case SignatureKind::kPrefix:
      return IndexScheme::kPrefix;
    case SignatureKind::kJaccardVariant:
      return IndexScheme::kJaccardVariant;
    case SignatureKind::kLsh:
      break;
  }
  throw UsageError("LSH cannot back an entity index");
}

SignatureKind KeyKindFor(IndexScheme scheme) {
  switch (scheme) {
    case IndexScheme::kPerWord:
      return SignatureKind::kSingleWord;
    case IndexScheme::kPrefix:
      return SignatureKind::kPrefix;
    case IndexScheme::kJaccardVariant:
      return SignatureKind::kJaccardVariant;
  }
  return SignatureKind::kSingleWord;
}

EntityIndex::EntityIndex(IndexScheme scheme, const MatchOptions &match)
    : scheme_(scheme), match_(match) {}

void EntityIndex::Add(const Entity &entity) {
  if (!entities_.emplace(entity.id, entity.set).second) {
    throw DataError("entity " + std::to_string(entity.id) + " indexed twice");
  }
  insertion_order_.push_back(entity.id);
  table_.Add(entity.set);
  for (auto &key : EntityKeys(KeyKindFor(scheme_), entity.set, match_)) {
    auto &list = postings_[std::move(key)];
    auto it = std::lower_bound(list.begin(), list.end(), entity.id);
    list.insert(it, entity.id);
    ++posting_count_;
  }
}

std::int64_t EntityIndex::size_bytes() const {
  return kBytesPerKey * static_cast<std::int64_t>(postings_.size()) +
         kBytesPerPosting * static_cast<std::int64_t>(posting_count_);
}

const std::vector<EntityId> *EntityIndex::Postings(const TokenSetKey &key) const {
  auto it = postings_.find(key);
  return it == postings_.end() ? nullptr : &it->second;
}

std::vector<PostingList> EntityIndex::SortedPostings() const {
  std::vector<PostingList> out;
  out.reserve(postings_.size());
  for (const auto &[key, ids] : postings_) out.push_back({key, ids});
  std::sort(out.begin(), out.end(), [](const PostingList &a, const PostingList &b) {
    return a.key < b.key;
  });
  return out;
}

std::vector<EntityId> EntityIndex::EntityIds() const { return insertion_order_; }

std::vector<EntityId> EntityIndex::Candidates(const TokenSet &probe) const {
  std::vector<EntityId> out;
  for (const auto &key : ProbeKeys(KeyKindFor(scheme_), probe, match_, &table_)) {
    if (const auto *list = Postings(key)) {
      out.insert(out.end(), list->begin(), list->end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<IndexHit> EntityIndex::Lookup(const TokenSet &probe,
                                          const SimilarityThreshold &gamma) const {
  if (!(gamma == match_.gamma)) {
    throw DataError("index built for gamma " + FormatRatio(match_.gamma.value()) +
                    " queried with gamma " + FormatRatio(gamma.value()));
  }
  if (probe.empty()) throw DataError("empty lookup probe");
  std::vector<IndexHit> hits;
  for (EntityId id : Candidates(probe)) {
    auto it = entities_.find(id);
    if (it == entities_.end() || it->second.empty()) {
      throw DataError("index entity " + std::to_string(id) + " is not attached");
    }
    const TokenSet &entity = it->second;
    const ContainmentTerms terms = Containment(match_.predicate, entity, probe);
    if (terms.whole == 0) {
      if (scheme_ != IndexScheme::kJaccardVariant) continue;
      ContainmentScore(match_.predicate, entity, probe);  // throws
    }
    if (scheme_ != IndexScheme::kJaccardVariant && !gamma.Reached(terms.overlap, terms.whole)) {
      continue;
    }
    hits.push_back({id, Ratio(terms.overlap, terms.whole)});
  }
  return hits;
}

void EntityIndex::AttachEntities(const Dictionary &dict) {
  for (auto &[id, set] : entities_) {
    const Entity *e = dict.FindById(id);
    if (e == nullptr) {
      throw DataError("index references unknown entity " + std::to_string(id));
    }
    set = e->set;
    table_.Add(set);
  }
}

namespace {

std::string JoinIds(const auto &ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(ids[i]);
  }
  return out;
}

template <typename T>
std::vector<T> SplitIds(std::string_view text) {
  std::vector<T> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto part = text.substr(0, comma);
    T v{};
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw DataError("malformed id list in index file");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string HexFingerprint(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

}  // namespace

void EntityIndex::Save(std::ostream &out) const {
  out << "ee-index v1\tscheme=" << IndexSchemeName(scheme_)
      << "\tgamma=" << FormatRatio(match_.gamma.value())
      << "\tpredicate=" << PredicateName(match_.predicate)
      << "\ttoken_order=" << HexFingerprint(match_.order->Fingerprint())
      << "\tentities=" << JoinIds(insertion_order_) << "\n";
  for (const auto &posting : SortedPostings()) {
    out << JoinIds(posting.key) << "\t" << JoinIds(posting.entity_ids) << "\n";
  }
}

EntityIndex EntityIndex::Load(std::istream &in, const MatchOptions &match) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("ee-index v1\t", 0) != 0) {
    throw DataError("not an ee-index v1 file");
  }
  std::unordered_map<std::string, std::string> fields;
  std::istringstream hs(header.substr(12));
  std::string field;
  while (std::getline(hs, field, '\t')) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw DataError("malformed index header");
    fields[field.substr(0, eq)] = field.substr(eq + 1);
  }
  for (const char *required : {"scheme", "gamma", "predicate", "token_order", "entities"}) {
    if (!fields.count(required)) {
      throw DataError(std::string("index header lacks '") + required + "'");
    }
  }
  if (!(ParseRatio(fields["gamma"]) == match.gamma.value()) ||
      ParsePredicate(fields["predicate"]) != match.predicate ||
      fields["token_order"] != HexFingerprint(match.order->Fingerprint())) {
    throw DataError("index was built with different matching options");
  }
  EntityIndex index(ParseIndexScheme(fields["scheme"]), match);
  for (EntityId id : SplitIds<EntityId>(fields["entities"])) {
    index.entities_.emplace(id, TokenSet());
    index.insertion_order_.push_back(id);
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("malformed posting line");
    auto key = SplitIds<TokenId>(std::string_view(line).substr(0, tab));
    auto ids = SplitIds<EntityId>(std::string_view(line).substr(tab + 1));
    index.posting_count_ += ids.size();
    index.postings_[std::move(key)] = std::move(ids);
  }
  return index;
}

bool EntityIndex::SamePostings(const EntityIndex &other) const {
  return scheme_ == other.scheme_ && postings_ == other.postings_ &&
         insertion_order_ == other.insertion_order_;
}

std::int64_t EntityFootprint(const Entity &entity, IndexScheme scheme,
                             const MatchOptions &match) {
  auto keys = EntityKeys(KeyKindFor(scheme), entity.set, match);
  return static_cast<std::int64_t>(keys.size()) * (kBytesPerKey + kBytesPerPosting);
}

std::int64_t EstimateFootprint(const Dictionary &dict, EntityRange range,
                               IndexScheme scheme, const MatchOptions &match) {
  std::int64_t total = 0;
  for (std::size_t p = range.begin; p < range.end; ++p) {
    total += EntityFootprint(dict.ordered(p), scheme, match);
  }
  return total;
}

std::vector<IndexPartition> BuildIndex(const Dictionary &dict, EntityRange range,
                                       IndexScheme scheme,
                                       const MatchOptions &match,
                                       std::int64_t memory_budget) {
  if (memory_budget <= 0) throw UsageError("memory budget must be positive");
  std::vector<IndexPartition> parts;
  std::int64_t used = 0;
  for (std::size_t p = range.begin; p < range.end; ++p) {
    const Entity &e = dict.ordered(p);
    std::int64_t fp = EntityFootprint(e, scheme, match);
    if (fp > memory_budget) {
      throw DataError("entity " + std::to_string(e.id) +
                      " exceeds memory budget (" + std::to_string(fp) + " > " +
                      std::to_string(memory_budget) + " bytes)");
    }
    if (parts.empty() || used + fp > memory_budget) {
      parts.push_back({EntityIndex(scheme, match), {p, p}});
      used = 0;
    }
    parts.back().index.Add(e);
    parts.back().range.end = p + 1;
    used += fp;
  }
  return parts;
}

}  // namespace eejoin
