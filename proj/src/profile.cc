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

#include "eejoin/profile.h"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "eejoin/candgen.h"
#include "eejoin/error.h"

namespace eejoin {

std::int64_t ScaleBySampleRate(std::int64_t raw, const Ratio &rate) {
  __int128 num = static_cast<__int128>(raw) * rate.denominator() * 2 + rate.numerator();
  return static_cast<std::int64_t>(num / (static_cast<__int128>(rate.numerator()) * 2));
}

TokenOrder OrderFromStats(const CorpusStats &stats, TokenOrderDirection direction) {
  return TokenOrder(stats.token_doc_freq, direction);
}

namespace {

struct Partial {
  std::int64_t candidates = 0;
  std::int64_t cand_tokens = 0;
  std::int64_t cand_prefix = 0;
  std::int64_t cand_variants = 0;
  std::vector<std::int64_t> entity_hits;
};

void ProfileDocument(const Document &doc, const Dictionary &dict,
                     const MentionFilter &filter, const MatchOptions &match,
                     const std::vector<std::vector<std::uint32_t>> &per_word,
                     Partial *out) {
  const std::size_t L = dict.max_length();
  const std::size_t n = doc.body.size();
  // passing[start][len-1]
  std::vector<std::vector<char>> passing(n, std::vector<char>(L, 0));
  ForEachCandidate(doc, L, &filter, [&](const Span &span, const TokenSet &set) {
    passing[span.start][span.length() - 1] = 1;
    ++out->candidates;
    out->cand_tokens += static_cast<std::int64_t>(
        ProbeKeys(SignatureKind::kSingleWord, set, match, &filter.table()).size());
    out->cand_prefix += static_cast<std::int64_t>(
        ProbeKeys(SignatureKind::kPrefix, set, match, &filter.table()).size());
    try {
      out->cand_variants += static_cast<std::int64_t>(
          ProbeKeys(SignatureKind::kJaccardVariant, set, match, &filter.table()).size());
    } catch (const VariantExplosion &) {
      out->cand_variants += static_cast<std::int64_t>(match.variant_cap);
    }
  });
  auto tokens = doc.body.tokens();
  std::vector<std::size_t> first_len(dict.size(), 0);
  std::vector<std::uint32_t> touched;
  std::vector<std::int64_t> suffix(L + 2, 0);
  for (std::size_t start = 0; start < n; ++start) {
    std::size_t max_len = std::min(L, n - start);
    suffix[max_len + 1] = 0;
    for (std::size_t len = max_len; len >= 1; --len) {
      suffix[len] = suffix[len + 1] + passing[start][len - 1];
    }
    if (suffix[1] == 0) continue;
    touched.clear();
    for (std::size_t len = 1; len <= max_len; ++len) {
      TokenId t = tokens[start + len - 1];
      if (t >= per_word.size()) continue;
      for (std::uint32_t pos : per_word[t]) {
        if (first_len[pos] == 0) {
          first_len[pos] = len;
          touched.push_back(pos);
        }
      }
    }
    for (std::uint32_t pos : touched) {
      out->entity_hits[pos] += suffix[first_len[pos]];
      first_len[pos] = 0;
    }
  }
}

}  // namespace

CorpusStats ProfileCorpus(const Dictionary &dict, std::span<const Document> docs,
                          const ProfileOptions &options) {
  if (options.sample_rate <= 0 || options.sample_rate > 1) {
    throw UsageError("sample rate must lie in (0, 1]");
  }
  CorpusStats stats;
  stats.sample_rate = options.sample_rate;
  stats.total_docs = static_cast<std::int64_t>(docs.size());
  stats.token_entity_freq = dict.EntityFrequencies();

  std::vector<std::size_t> by_id(docs.size());
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(),
            [&](std::size_t a, std::size_t b) { return docs[a].id < docs[b].id; });
  Ratio inverse = Ratio(1) / options.sample_rate;
  std::int64_t stride = std::max<std::int64_t>(
      1, (inverse.numerator() * 2 + inverse.denominator()) / (2 * inverse.denominator()));
  std::vector<const Document *> sample;
  for (std::size_t i = 0; i < by_id.size(); ++i) {
    stats.total_tokens += static_cast<std::int64_t>(docs[by_id[i]].body.size());
    if (static_cast<std::int64_t>(i) % stride == 0) sample.push_back(&docs[by_id[i]]);
  }
  stats.sampled_docs = static_cast<std::int64_t>(sample.size());

  std::unordered_map<TokenId, std::int64_t> raw_doc_freq;
  for (const Document *d : sample) {
    std::unordered_set<TokenId> distinct(d->body.tokens().begin(), d->body.tokens().end());
    for (TokenId t : distinct) ++raw_doc_freq[t];
  }
  for (const auto &[t, c] : raw_doc_freq) {
    stats.token_doc_freq[t] = ScaleBySampleRate(c, options.sample_rate);
  }

  for (const auto &e : dict.entities()) stats.entity_mention_freq[e.id] = 0;
  if (dict.empty()) return stats;

  MatchOptions match(options.gamma, options.predicate);
  match.variant_cap = options.variant_cap;
  match.order = std::make_shared<TokenOrder>(OrderFromStats(stats, options.order_direction));
  MentionFilter filter(dict, dict.all(), options.gamma, options.predicate);

  // Per-word postings over storage positions.
  std::vector<std::vector<std::uint32_t>> per_word;
  for (std::uint32_t pos = 0; pos < dict.size(); ++pos) {
    for (TokenId t : dict.entities()[pos].set.ids()) {
      if (t >= per_word.size()) per_word.resize(t + 1);
      per_word[t].push_back(pos);
    }
  }

  const int workers = std::max(1, options.workers);
  std::vector<Partial> partials(workers);
  for (auto &p : partials) p.entity_hits.assign(dict.size(), 0);
  const auto count = static_cast<std::int64_t>(sample.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::int64_t i = 0; i < count; ++i) {
    ProfileDocument(*sample[i], dict, filter, match, per_word,
                    &partials[omp_get_thread_num()]);
  }

  Partial total;
  total.entity_hits.assign(dict.size(), 0);
  for (const auto &p : partials) {
    total.candidates += p.candidates;
    total.cand_tokens += p.cand_tokens;
    total.cand_prefix += p.cand_prefix;
    total.cand_variants += p.cand_variants;
    for (std::size_t i = 0; i < dict.size(); ++i) total.entity_hits[i] += p.entity_hits[i];
  }
  const Ratio &rate = options.sample_rate;
  stats.est_candidates = ScaleBySampleRate(total.candidates, rate);
  stats.est_candidate_tokens = ScaleBySampleRate(total.cand_tokens, rate);
  stats.est_candidate_prefix_tokens = ScaleBySampleRate(total.cand_prefix, rate);
  stats.est_candidate_variant_keys = ScaleBySampleRate(total.cand_variants, rate);
  for (std::size_t i = 0; i < dict.size(); ++i) {
    stats.entity_mention_freq[dict.entities()[i].id] =
        ScaleBySampleRate(total.entity_hits[i], rate);
  }
  return stats;
}

namespace {

std::int64_t ParseInt64(const std::string &text, const std::string &context) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(context + ": expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> parts;
  std::size_t from = 0;
  while (true) {
    auto tab = line.find('\t', from);
    parts.push_back(line.substr(from, tab - from));
    if (tab == std::string::npos) break;
    from = tab + 1;
  }
  return parts;
}

std::string Basename(const std::string &path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string Dirname(const std::string &path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? "" : path.substr(0, slash + 1);
}

std::ofstream OpenOutput(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

}  // namespace

void WriteStats(const std::string &path, const CorpusStats &stats,
                const TokenDictionary &tokens) {
  const std::string entities_path = path + ".entities.tsv";
  const std::string tokens_path = path + ".tokens.tsv";
  {
    auto out = OpenOutput(path);
    out << "ee-stats v1\n"
        << "total_docs\t" << stats.total_docs << "\n"
        << "total_tokens\t" << stats.total_tokens << "\n"
        << "sampled_docs\t" << stats.sampled_docs << "\n"
        << "sample_rate\t" << FormatRatio(stats.sample_rate) << "\n"
        << "entity_count\t" << stats.token_entity_freq.entity_count << "\n"
        << "est_candidates\t" << stats.est_candidates << "\n"
        << "est_candidate_tokens\t" << stats.est_candidate_tokens << "\n"
        << "est_candidate_prefix_tokens\t" << stats.est_candidate_prefix_tokens << "\n"
        << "est_candidate_variant_keys\t" << stats.est_candidate_variant_keys << "\n"
        << "entities_file\t" << Basename(entities_path) << "\n"
        << "tokens_file\t" << Basename(tokens_path) << "\n";
  }
  {
    auto out = OpenOutput(entities_path);
    out << "# entityId\tmention_frequency\n";
    for (const auto &[id, f] : stats.entity_mention_freq) out << id << "\t" << f << "\n";
  }
  {
    std::vector<TokenId> ids;
    for (const auto &[t, f] : stats.token_doc_freq) ids.push_back(t);
    for (const auto &[t, f] : stats.token_entity_freq.frequency) ids.push_back(t);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto out = OpenOutput(tokens_path);
    out << "# token\tdoc_frequency\tentity_frequency\n";
    for (TokenId t : ids) {
      auto d = stats.token_doc_freq.find(t);
      auto e = stats.token_entity_freq.frequency.find(t);
      out << tokens.Text(t) << "\t"
          << (d == stats.token_doc_freq.end() ? 0 : d->second) << "\t"
          << (e == stats.token_entity_freq.frequency.end() ? 0 : e->second) << "\n";
    }
  }
}

CorpusStats ReadStats(const std::string &path, TokenDictionary &tokens) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "ee-stats v1") {
    throw DataError(path + ": not an ee-stats v1 file");
  }
  CorpusStats stats;
  std::string entities_file, tokens_file;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto parts = SplitTabs(line);
    const std::string ctx = path + ":" + std::to_string(lineno);
    if (parts.size() != 2) throw DataError(ctx + ": expected key<TAB>value");
    const std::string &key = parts[0];
    const std::string &value = parts[1];
    if (key == "total_docs") stats.total_docs = ParseInt64(value, ctx);
    else if (key == "total_tokens") stats.total_tokens = ParseInt64(value, ctx);
    else if (key == "sampled_docs") stats.sampled_docs = ParseInt64(value, ctx);
    else if (key == "sample_rate") stats.sample_rate = ParseRatio(value);
    else if (key == "entity_count") stats.token_entity_freq.entity_count = ParseInt64(value, ctx);
    else if (key == "est_candidates") stats.est_candidates = ParseInt64(value, ctx);
    else if (key == "est_candidate_tokens") stats.est_candidate_tokens = ParseInt64(value, ctx);
    else if (key == "est_candidate_prefix_tokens") stats.est_candidate_prefix_tokens = ParseInt64(value, ctx);
    else if (key == "est_candidate_variant_keys") stats.est_candidate_variant_keys = ParseInt64(value, ctx);
    else if (key == "entities_file") entities_file = value;
    else if (key == "tokens_file") tokens_file = value;
    else throw DataError(ctx + ": unknown key '" + key + "'");
  }
  if (entities_file.empty() || tokens_file.empty()) {
    throw DataError(path + ": missing entities_file or tokens_file");
  }
  const std::string dir = Dirname(path);
  {
    std::ifstream ein(dir + entities_file);
    if (!ein) throw DataError("cannot open '" + dir + entities_file + "'");
    lineno = 0;
    while (std::getline(ein, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      auto parts = SplitTabs(line);
      const std::string ctx = entities_file + ":" + std::to_string(lineno);
      if (parts.size() != 2) throw DataError(ctx + ": expected entityId<TAB>frequency");
      stats.entity_mention_freq[ParseInt64(parts[0], ctx)] = ParseInt64(parts[1], ctx);
    }
  }
  {
    std::ifstream tin(dir + tokens_file);
    if (!tin) throw DataError("cannot open '" + dir + tokens_file + "'");
    lineno = 0;
    while (std::getline(tin, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      auto parts = SplitTabs(line);
      const std::string ctx = tokens_file + ":" + std::to_string(lineno);
      if (parts.size() != 3) throw DataError(ctx + ": expected token<TAB>df<TAB>ef");
      TokenId t = tokens.Intern(parts[0]);
      std::int64_t df = ParseInt64(parts[1], ctx);
      std::int64_t ef = ParseInt64(parts[2], ctx);
      if (df) stats.token_doc_freq[t] = df;
      if (ef) stats.token_entity_freq.frequency[t] = ef;
    }
  }
  return stats;
}

}  // namespace eejoin
