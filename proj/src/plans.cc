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

#include "eejoin/plans.h"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <tuple>

#include "eejoin/error.h"

namespace eejoin {

bool MentionLess(const Mention &a, const Mention &b) {
  return std::tie(a.span.doc_id, a.span.start, a.entity_id, a.span.end) <
         std::tie(b.span.doc_id, b.span.start, b.entity_id, b.span.end);
}

void CanonicalizeMentions(std::vector<Mention> &mentions) {
  std::sort(mentions.begin(), mentions.end(),
            [](const Mention &a, const Mention &b) { return MentionLess(a, b); });
  auto same = [](const Mention &a, const Mention &b) {
    return a.entity_id == b.entity_id && a.span == b.span;
  };
  mentions.erase(std::unique(mentions.begin(), mentions.end(), same), mentions.end());
}

const char *MethodName(Method method) {
  return method == Method::kIndex ? "index" : "filter_ssjoin";
}

Method ParseMethod(std::string_view name) {
  if (name == "index") return Method::kIndex;
  if (name == "filter_ssjoin" || name == "ssjoin") return Method::kFilterSsjoin;
  throw UsageError("unknown method '" + std::string(name) + "'");
}

void ValidateAssignment(const MethodAssignment &assignment) {
  ValidateScheme(assignment.scheme);
  if (assignment.method == Method::kIndex) IndexSchemeFor(assignment.scheme.kind);
}

namespace {

// Fixed-width big-endian record encoding. Shuffle values carry the full token
// and weight lists so shuffle bytes reflect what a cluster would move.
template <int N>
void PutBigEndian(std::string *out, std::uint64_t v) {
  char buf[N];
  for (int i = N - 1; i >= 0; --i, v >>= 8) buf[i] = static_cast<char>(v);
  out->append(buf, N);
}

void PutU64(std::string *out, std::uint64_t v) { PutBigEndian<8>(out, v); }
void PutU32(std::string *out, std::uint32_t v) { PutBigEndian<4>(out, v); }

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t U64() { return Get<std::uint64_t>(); }
  std::uint32_t U32() { return Get<std::uint32_t>(); }

 private:
  template <typename T>
  T Get() {
    if (bytes_.size() < sizeof(T)) throw DataError("truncated record");
    T v;
    std::memcpy(&v, bytes_.data(), sizeof(T));
    bytes_.remove_prefix(sizeof(T));
    if constexpr (sizeof(T) == 8) return __builtin_bswap64(v);
    else return __builtin_bswap32(v);
  }

  std::string_view bytes_;
};

void PutSet(std::string *out, const TokenSet &set) {
  PutU32(out, static_cast<std::uint32_t>(set.size()));
  for (std::size_t i = 0; i < set.size(); ++i) {
    PutU32(out, set.ids()[i]);
    PutU64(out, static_cast<std::uint64_t>(set.weights()[i]));
  }
}

TokenSet GetSet(Reader &in) {
  std::uint32_t n = in.U32();
  std::vector<TokenId> ids(n);
  std::vector<Weight> weights(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    ids[i] = in.U32();
    weights[i] = static_cast<Weight>(in.U64());
  }
  return TokenSet(ids, weights);
}

constexpr char kEntityTag = 0;    // sorts before documents within a key group
constexpr char kDocumentTag = 1;

std::string EncodeMentionKey(EntityId entity, const Span &span) {
  return std::to_string(entity) + "\t" + std::to_string(span.doc_id) + "\t" +
         std::to_string(span.start) + "\t" + std::to_string(span.end);
}

template <typename T>
T ParseField(std::string_view text, const std::string &where) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(where + ": malformed field '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    auto tab = line.find('\t');
    fields.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  return fields;
}

Mention ParseMention(std::string_view key, std::string_view score, const std::string &where) {
  auto f = SplitTabs(key);
  if (f.size() != 4) throw DataError(where + ": expected 5 fields");
  Mention m;
  m.entity_id = ParseField<EntityId>(f[0], where);
  m.span.doc_id = ParseField<DocId>(f[1], where);
  m.span.start = ParseField<std::uint32_t>(f[2], where);
  m.span.end = ParseField<std::uint32_t>(f[3], where);
  if (m.span.end <= m.span.start) throw DataError(where + ": empty span");
  try {
    m.score = ParseRatio(score);
  } catch (const Error &e) {
    throw DataError(where + ": " + e.what());
  }
  return m;
}

// Job output keys: entity, doc, start, end, then the score's numerator and
// denominator, all fixed width. Values are empty.
std::string EncodeOutput(EntityId entity, const Span &span, Weight num, Weight den) {
  std::string key;
  key.reserve(40);
  PutU64(&key, static_cast<std::uint64_t>(entity));
  PutU64(&key, static_cast<std::uint64_t>(span.doc_id));
  PutU32(&key, span.start);
  PutU32(&key, span.end);
  PutU64(&key, static_cast<std::uint64_t>(num));
  PutU64(&key, static_cast<std::uint64_t>(den));
  return key;
}

std::vector<Mention> DecodeOutput(const std::vector<KeyedRecord> &records) {
  std::vector<Mention> out;
  out.reserve(records.size());
  for (const auto &rec : records) {
    Reader key{rec.key};
    Mention m;
    m.entity_id = static_cast<EntityId>(key.U64());
    m.span.doc_id = static_cast<DocId>(key.U64());
    m.span.start = key.U32();
    m.span.end = key.U32();
    const auto num = static_cast<std::int64_t>(key.U64());
    const auto den = static_cast<std::int64_t>(key.U64());
    m.score = Ratio(num, den);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<std::vector<std::string>> Records(char tag, std::size_t begin, std::size_t end) {
  std::vector<std::vector<std::string>> input(1);
  for (std::size_t i = begin; i < end; ++i) input[0].push_back(tag + std::to_string(i));
  return input;
}

std::size_t RecordIndex(std::string_view record) {
  return ParseField<std::size_t>(record.substr(1), "input record");
}

std::string Hex(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (unsigned char c : bytes) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 15]);
  }
  return out;
}

}  // namespace

PlanResult RunIndexPlan(const Dictionary &dict, EntityRange range,
                        std::span<const Document> docs, IndexScheme scheme,
                        const PlanOptions &options) {
  PlanResult result;
  if (range.empty()) return result;
  const auto partitions =
      BuildIndex(dict, range, scheme, options.match, options.memory_budget);
  const std::size_t max_length = dict.max_length();
  const auto input = Records('D', 0, docs.size());

  for (const auto &partition : partitions) {
    const EntityIndex &index = partition.index;
    // Each pass only probes for its own partition's entities.
    const MentionFilter filter(dict, partition.range, options.match.gamma,
                               options.match.predicate);
    JobSpec spec;
    spec.mappers = options.mappers;
    spec.workers = options.workers;
    spec.broadcast_bytes = index.size_bytes();
    spec.map = [&](std::string_view record, Emitter &out) {
      const Document &doc = docs[RecordIndex(record)];
      std::int64_t lookups = 0;
      ForEachCandidate(doc, max_length, &filter, [&](const Span &span, const TokenSet &set) {
        ++lookups;
        for (const IndexHit &hit : index.Lookup(set, options.match.gamma)) {
          out.Emit(EncodeOutput(hit.entity_id, span, hit.score.numerator(), hit.score.denominator()),
                   std::string());
        }
      });
      out.AddWork(lookups);
    };
    JobResult job = RunJob(spec, input);
    auto mentions = DecodeOutput(job.output);
    result.mentions.insert(result.mentions.end(), std::make_move_iterator(mentions.begin()),
                           std::make_move_iterator(mentions.end()));
    result.metrics.Accumulate(job.metrics);
  }
  CanonicalizeMentions(result.mentions);
  return result;
}

PlanResult RunSsjoinPlan(const Dictionary &dict, EntityRange range,
                         std::span<const Document> docs,
                         const SignatureScheme &scheme,
                         const PlanOptions &options, bool filtered) {
  ValidateScheme(scheme);
  PlanResult result;
  if (range.empty()) return result;
  const MatchOptions &match = options.match;
  const MentionFilter filter(dict, range, match.gamma, match.predicate);
  const MentionFilter *active = filtered ? &filter : nullptr;
  const TokenTable *table = filtered ? &filter.table() : nullptr;
  const std::size_t max_length = dict.max_length();
  const bool verify = scheme.kind != SignatureKind::kJaccardVariant;

  auto input = Records('E', range.begin, range.end);
  for (std::size_t i = 0; i < docs.size(); ++i) input[0].push_back("D" + std::to_string(i));

  JobSpec spec;
  spec.mappers = options.mappers;
  spec.reducers = options.reducers;
  spec.workers = options.workers;
  spec.broadcast_bytes = filtered ? static_cast<std::int64_t>(filter.table().token_count()) *
                                        kBytesPerKey
                                  : 0;
  spec.map = [&](std::string_view record, Emitter &out) {
    if (record[0] == 'E') {
      const Entity &entity = dict.ordered(RecordIndex(record));
      std::string value(1, kEntityTag);
      value.reserve(13 + 12 * entity.set.size());
      PutU64(&value, static_cast<std::uint64_t>(entity.id));
      PutSet(&value, entity.set);
      for (auto &sig : SignaturesOf(entity.set, scheme, Side::kEntity, match)) {
        out.Emit(std::move(sig), value);
      }
      return;
    }
    const Document &doc = docs[RecordIndex(record)];
    std::int64_t candidates = 0;
    ForEachCandidate(doc, max_length, active, [&](const Span &span, const TokenSet &set) {
      ++candidates;
      std::string value(1, kDocumentTag);
      value.reserve(21 + 12 * set.size());
      PutU64(&value, static_cast<std::uint64_t>(span.doc_id));
      PutU32(&value, span.start);
      PutU32(&value, span.end);
      PutSet(&value, set);
      for (auto &sig : SignaturesOf(set, scheme, Side::kProbe, match, table)) {
        out.Emit(std::move(sig), value);
      }
    });
    out.AddWork(candidates);
  };
  spec.reduce = [&](std::string_view key, std::span<const std::string> values, Emitter &out) {
    std::vector<std::pair<EntityId, TokenSet>> entities;
    std::size_t i = 0;
    for (; i < values.size() && values[i][0] == kEntityTag; ++i) {
      if (entities.size() == options.reducer_entity_cap) {
        throw DataError("signature " + Hex(key) + " exceeds the reducer entity cap of " +
                        std::to_string(options.reducer_entity_cap));
      }
      Reader in{std::string_view(values[i]).substr(1)};
      EntityId id = static_cast<EntityId>(in.U64());
      entities.emplace_back(id, GetSet(in));
    }
    if (entities.empty()) return;
    std::int64_t comparisons = 0;
    for (; i < values.size(); ++i) {
      Reader in{std::string_view(values[i]).substr(1)};
      Span span;
      span.doc_id = static_cast<DocId>(in.U64());
      span.start = in.U32();
      span.end = in.U32();
      TokenSet probe = GetSet(in);
      for (const auto &[id, set] : entities) {
        ++comparisons;
        const ContainmentTerms terms = Containment(match.predicate, set, probe);
        if (terms.whole == 0) {
          if (verify) continue;
          ContainmentScore(match.predicate, set, probe);  // throws
        }
        if (verify && !match.gamma.Reached(terms.overlap, terms.whole)) continue;
        out.Emit(EncodeOutput(id, span, terms.overlap, terms.whole), std::string());
      }
    }
    out.AddWork(comparisons);
  };

  JobResult job = RunJob(spec, input);
  result.mentions = DecodeOutput(job.output);
  result.metrics = std::move(job.metrics);
  CanonicalizeMentions(result.mentions);
  return result;
}

PlanResult RunAssignment(const Dictionary &dict, EntityRange range,
                         std::span<const Document> docs,
                         const MethodAssignment &assignment,
                         const PlanOptions &options) {
  ValidateAssignment(assignment);
  if (assignment.method == Method::kIndex) {
    return RunIndexPlan(dict, range, docs, IndexSchemeFor(assignment.scheme.kind), options);
  }
  return RunSsjoinPlan(dict, range, docs, assignment.scheme, options, true);
}

PlanResult RunHybridPlan(const Dictionary &dict, std::size_t k,
                         const MethodAssignment &head,
                         const MethodAssignment &tail,
                         std::span<const Document> docs,
                         const PlanOptions &options) {
  if (k > dict.size()) {
    throw UsageError("split " + std::to_string(k) + " exceeds dictionary size " +
                     std::to_string(dict.size()));
  }
  ValidateAssignment(head);
  ValidateAssignment(tail);
  PlanResult result = RunAssignment(dict, {0, k}, docs, head, options);
  PlanResult rest = RunAssignment(dict, {k, dict.size()}, docs, tail, options);
  result.mentions.insert(result.mentions.end(), rest.mentions.begin(), rest.mentions.end());
  result.metrics.Accumulate(rest.metrics);
  CanonicalizeMentions(result.mentions);
  return result;
}

void WriteMentions(std::ostream &out, const std::vector<Mention> &mentions) {
  out << kMentionHeader << "\n";
  for (const auto &m : mentions) {
    out << EncodeMentionKey(m.entity_id, m.span) << "\t" << FormatRatio(m.score) << "\n";
  }
}

std::vector<Mention> ReadMentions(std::istream &in, const std::string &source) {
  std::vector<Mention> out;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    if (line.empty() || line[0] == '#') continue;
    auto last = line.rfind('\t');
    if (last == std::string::npos) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected 5 fields");
    }
    out.push_back(ParseMention(std::string_view(line).substr(0, last),
                               std::string_view(line).substr(last + 1),
                               source + ":" + std::to_string(line_no)));
  }
  return out;
}

}  // namespace eejoin
