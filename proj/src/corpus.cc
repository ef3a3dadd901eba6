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

#include "eejoin/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "eejoin/error.h"

namespace eejoin {

Dictionary Dictionary::Build(std::vector<Entity> entities) {
  Dictionary dict;
  std::unordered_set<EntityId> ids;
  std::unordered_set<TokenSetKey, TokenSetKeyHash> keys;
  for (auto &e : entities) {
    if (!ids.insert(e.id).second) {
      throw DataError("duplicate entity id " + std::to_string(e.id));
    }
    if (e.surface.empty()) {
      throw DataError("entity " + std::to_string(e.id) + " has no tokens");
    }
    e.set = TokenSet(e.surface);
    if (!keys.insert(e.set.Key()).second) continue;
    dict.entities_.push_back(std::move(e));
  }
  std::sort(dict.entities_.begin(), dict.entities_.end(),
            [](const Entity &a, const Entity &b) { return a.id < b.id; });
  dict.ordering_.resize(dict.entities_.size());
  std::iota(dict.ordering_.begin(), dict.ordering_.end(), 0);
  for (std::size_t i = 0; i < dict.entities_.size(); ++i) {
    dict.by_id_[dict.entities_[i].id] = i;
    dict.max_length_ = std::max(dict.max_length_, dict.entities_[i].surface.size());
  }
  return dict;
}

const Entity *Dictionary::FindById(EntityId id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &entities_[it->second];
}

EntityFrequencyTable Dictionary::EntityFrequencies() const {
  EntityFrequencyTable table;
  table.entity_count = static_cast<std::int64_t>(entities_.size());
  for (const auto &e : entities_) {
    for (TokenId id : e.set.ids()) ++table.frequency[id];
  }
  return table;
}

void Dictionary::Reweight(const TokenWeights &weights) {
  for (auto &e : entities_) {
    e.surface = AssignWeights(e.surface, weights);
    e.set = TokenSet(e.surface);
  }
}

void Dictionary::SetOrdering(std::vector<std::size_t> ordering) {
  if (ordering.size() != entities_.size()) {
    throw DataError("ordering size does not match the dictionary");
  }
  std::vector<bool> seen(ordering.size(), false);
  for (std::size_t pos : ordering) {
    if (pos >= seen.size() || seen[pos]) {
      throw DataError("ordering is not a permutation");
    }
    seen[pos] = true;
  }
  ordering_ = std::move(ordering);
}

Dictionary SortByFrequency(const Dictionary &dict, const CorpusStats &stats) {
  std::vector<std::int64_t> freq(dict.size());
  for (std::size_t i = 0; i < dict.size(); ++i) {
    auto it = stats.entity_mention_freq.find(dict.entities()[i].id);
    if (it == stats.entity_mention_freq.end()) {
      throw DataError("no frequency estimate for entity " +
                      std::to_string(dict.entities()[i].id));
    }
    freq[i] = it->second;
  }
  // Storage is in ascending id order, so a stable sort keeps the id tie-break.
  std::vector<std::size_t> order(dict.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return freq[a] > freq[b];
  });
  Dictionary sorted = dict;
  sorted.SetOrdering(std::move(order));
  return sorted;
}

namespace {

bool ParseId(std::string_view text, std::int64_t *out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *out);
  return !text.empty() && ec == std::errc() && ptr == text.data() + text.size();
}

std::string Unescape(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '\\' && i + 1 < body.size()) {
      char c = body[i + 1];
      if (c == 'n') {
        out.push_back('\n');
        ++i;
        continue;
      }
      if (c == 't') {
        out.push_back('\t');
        ++i;
        continue;
      }
      if (c == '\\') {
        out.push_back('\\');
        ++i;
        continue;
      }
    }
    out.push_back(body[i]);
  }
  return out;
}

// Splits `id<TAB>text`; throws with source:line context on malformed lines.
std::pair<std::int64_t, std::string_view> SplitRecord(std::string_view line,
                                                      const std::string &source,
                                                      std::size_t lineno) {
  auto tab = line.find('\t');
  std::int64_t id = 0;
  if (tab == std::string_view::npos || !ParseId(line.substr(0, tab), &id)) {
    throw DataError(source + ":" + std::to_string(lineno) +
                    ": expected '<id><TAB><text>'");
  }
  return {id, line.substr(tab + 1)};
}

std::ifstream OpenInput(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

}  // namespace

Dictionary ReadDictionary(std::istream &in, TokenDictionary &tokens,
                          const DictionaryLoadOptions &options,
                          const std::string &source) {
  std::vector<Entity> entities;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto [id, text] = SplitRecord(line, source, lineno);
    Entity e;
    e.id = id;
    e.surface = Tokenize(text, tokens);
    if (e.surface.empty()) {
      throw DataError(source + ":" + std::to_string(lineno) +
                      ": entity surface has no tokens");
    }
    entities.push_back(std::move(e));
  }
  if (entities.empty()) throw DataError("empty dictionary");
  Dictionary dict = Dictionary::Build(std::move(entities));
  dict.Reweight(DictionaryWeights(dict, options.weighting));
  return dict;
}

Dictionary LoadDictionary(const std::string &path, TokenDictionary &tokens,
                          const DictionaryLoadOptions &options) {
  auto in = OpenInput(path);
  return ReadDictionary(in, tokens, options, path);
}

std::vector<Document> ReadDocuments(std::istream &in, TokenDictionary &tokens,
                                    const TokenWeights &weights,
                                    const std::string &source) {
  std::vector<Document> docs;
  std::unordered_set<DocId> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto [id, text] = SplitRecord(line, source, lineno);
    if (!ids.insert(id).second) {
      throw DataError(source + ":" + std::to_string(lineno) +
                      ": duplicate document id " + std::to_string(id));
    }
    Document d;
    d.id = id;
    d.body = AssignWeights(Tokenize(Unescape(text), tokens), weights);
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<Document> LoadDocuments(const std::string &path,
                                    TokenDictionary &tokens,
                                    const TokenWeights &weights) {
  auto in = OpenInput(path);
  return ReadDocuments(in, tokens, weights, path);
}

TokenWeights DictionaryWeights(const Dictionary &dict,
                               const WeightingOptions &options) {
  return TokenWeights(options, dict.EntityFrequencies());
}

}  // namespace eejoin
