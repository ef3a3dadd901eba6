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

#include "eejoin/mrengine.h"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <exception>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace eejoin {

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void JobMetrics::Accumulate(const JobMetrics &other) {
  auto add = [](std::vector<std::int64_t> &into, const std::vector<std::int64_t> &from) {
    if (into.size() < from.size()) into.resize(from.size(), 0);
    for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
  };
  add(mapper_busy, other.mapper_busy);
  add(reducer_busy, other.reducer_busy);
  shuffle_records += other.shuffle_records;
  shuffle_bytes += other.shuffle_bytes;
  sort_comparisons += other.sort_comparisons;
  broadcast_bytes += other.broadcast_bytes;
  for (const auto &[k, c] : other.key_record_counts) key_record_counts[k] += c;
  wall_clock_units += other.wall_clock_units;
  jobs += other.jobs;
}

std::int64_t JobMetrics::MaxMapperBusy() const {
  return mapper_busy.empty() ? 0 : *std::max_element(mapper_busy.begin(), mapper_busy.end());
}

std::int64_t JobMetrics::MaxReducerBusy() const {
  return reducer_busy.empty() ? 0
                              : *std::max_element(reducer_busy.begin(), reducer_busy.end());
}

std::int64_t JobMetrics::TotalMapperBusy() const {
  return std::accumulate(mapper_busy.begin(), mapper_busy.end(), std::int64_t{0});
}

std::int64_t JobMetrics::TotalReducerBusy() const {
  return std::accumulate(reducer_busy.begin(), reducer_busy.end(), std::int64_t{0});
}

namespace {

struct MapTaskOutput {
  std::vector<std::vector<KeyedRecord>> buckets;  // per reducer
  std::int64_t busy = 0;
  std::int64_t shuffle_bytes = 0;
  std::exception_ptr error;
};

struct ReduceTaskOutput {
  std::vector<KeyedRecord> records;
  std::map<std::string, std::int64_t> key_counts;
  std::int64_t busy = 0;
  std::int64_t comparisons = 0;
  std::exception_ptr error;
};

std::string Describe(const std::exception_ptr &error) {
  try {
    std::rethrow_exception(error);
  } catch (const std::exception &e) {
    return e.what();
  } catch (...) {
    return "unknown exception";
  }
}

}  // namespace

JobResult RunJob(const JobSpec &spec,
                 const std::vector<std::vector<std::string>> &input) {
  if (spec.mappers < 1) throw UsageError("a job needs at least one mapper");
  if (spec.reducers < 1) throw UsageError("a job needs at least one reducer");
  if (!spec.map) throw UsageError("a job needs a map function");
  const int mappers = spec.mappers;
  const bool map_only = !spec.reduce;
  const int reducers = map_only ? 1 : spec.reducers;
  const int workers = std::max(1, spec.workers);

  // Round-robin split into map tasks.
  std::vector<std::vector<const std::string *>> splits(mappers);
  std::size_t next = 0;
  for (const auto &partition : input) {
    for (const auto &record : partition) {
      splits[next % mappers].push_back(&record);
      ++next;
    }
  }

  std::vector<MapTaskOutput> maps(mappers);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int t = 0; t < mappers; ++t) {
    MapTaskOutput &task = maps[t];
    task.buckets.resize(reducers);
    try {
      Emitter emitter;
      for (const std::string *record : splits[t]) spec.map(*record, emitter);
      task.busy = static_cast<std::int64_t>(splits[t].size() + emitter.records().size()) +
                  emitter.work();
      for (auto &rec : emitter.records()) {
        std::size_t r = map_only ? 0 : Fnv1a64(rec.key) % reducers;
        if (!map_only) task.shuffle_bytes += static_cast<std::int64_t>(rec.size_bytes());
        task.buckets[r].push_back(std::move(rec));
      }
    } catch (...) {
      task.error = std::current_exception();
    }
  }
  for (int t = 0; t < mappers; ++t) {
    if (maps[t].error) throw JobError("map-" + std::to_string(t), Describe(maps[t].error));
  }

  JobResult result;
  JobMetrics &m = result.metrics;
  m.jobs = 1;
  m.broadcast_bytes = spec.broadcast_bytes;
  m.mapper_busy.resize(mappers);
  for (int t = 0; t < mappers; ++t) {
    m.mapper_busy[t] = maps[t].busy;
    m.shuffle_bytes += maps[t].shuffle_bytes;
  }

  if (map_only) {
    for (auto &task : maps) {
      auto &bucket = task.buckets[0];
      std::move(bucket.begin(), bucket.end(), std::back_inserter(result.output));
    }
    m.wall_clock_units = m.MaxMapperBusy();
    return result;
  }

  std::vector<ReduceTaskOutput> reduces(reducers);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int r = 0; r < reducers; ++r) {
    ReduceTaskOutput &task = reduces[r];
    try {
      // Group by key, then sort keys and each group's values: the same
      // order as one (key, value) sort with far shallower sorts.
      std::unordered_map<std::string, std::vector<std::string>> groups;
      std::size_t record_count = 0;
      for (auto &map_task : maps) {
        for (auto &rec : map_task.buckets[r]) {
          groups[std::move(rec.key)].push_back(std::move(rec.value));
          ++record_count;
        }
        map_task.buckets[r].clear();
      }
      std::int64_t comparisons = 0;
      auto less = [&comparisons](const std::string &a, const std::string &b) {
        ++comparisons;
        return a < b;
      };
      std::vector<std::pair<const std::string, std::vector<std::string>> *> order;
      order.reserve(groups.size());
      for (auto &group : groups) order.push_back(&group);
      std::sort(order.begin(), order.end(),
                [&less](const auto *a, const auto *b) { return less(a->first, b->first); });
      Emitter emitter;
      for (auto *group : order) {
        auto &values = group->second;
        std::sort(values.begin(), values.end(), less);
        task.key_counts.emplace_hint(task.key_counts.end(), group->first,
                                     static_cast<std::int64_t>(values.size()));
        spec.reduce(group->first, values, emitter);
      }
      task.comparisons = comparisons;
      task.busy = static_cast<std::int64_t>(record_count + emitter.records().size()) +
                  emitter.work();
      task.records = std::move(emitter.records());
    } catch (...) {
      task.error = std::current_exception();
    }
  }
  for (int r = 0; r < reducers; ++r) {
    if (reduces[r].error) {
      throw JobError("reduce-" + std::to_string(r), Describe(reduces[r].error));
    }
  }

  m.reducer_busy.resize(reducers);
  for (int r = 0; r < reducers; ++r) {
    ReduceTaskOutput &task = reduces[r];
    m.reducer_busy[r] = task.busy;
    m.sort_comparisons += task.comparisons;
    for (auto &[k, c] : task.key_counts) {
      m.shuffle_records += c;
      m.key_record_counts.emplace(k, c);
    }
    std::move(task.records.begin(), task.records.end(), std::back_inserter(result.output));
  }
  m.wall_clock_units = m.MaxMapperBusy() + m.shuffle_records + m.MaxReducerBusy();
  return result;
}

Ratio MeasureSkew(const JobMetrics &metrics) {
  if (metrics.shuffle_records == 0 || metrics.key_record_counts.empty()) {
    throw DataError("no shuffle to measure");
  }
  std::int64_t max = 0;
  for (const auto &[k, c] : metrics.key_record_counts) max = std::max(max, c);
  const auto keys = static_cast<std::int64_t>(metrics.key_record_counts.size());
  return Ratio(max * keys, metrics.shuffle_records);
}

namespace {

std::string JoinList(const std::vector<std::int64_t> &values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(values[i]);
  }
  return out;
}

std::int64_t ToInt(std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("malformed metrics value '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::int64_t> SplitList(std::string_view text) {
  std::vector<std::int64_t> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    out.push_back(ToInt(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

void WriteMetrics(std::ostream &out, const JobMetrics &m) {
  std::int64_t max_key = 0;
  for (const auto &[k, c] : m.key_record_counts) max_key = std::max(max_key, c);
  out << "ee-metrics v1\n"
      << "jobs\t" << m.jobs << "\n"
      << "mapper_busy\t" << JoinList(m.mapper_busy) << "\n"
      << "reducer_busy\t" << JoinList(m.reducer_busy) << "\n"
      << "shuffle_records\t" << m.shuffle_records << "\n"
      << "shuffle_bytes\t" << m.shuffle_bytes << "\n"
      << "sort_comparisons\t" << m.sort_comparisons << "\n"
      << "broadcast_bytes\t" << m.broadcast_bytes << "\n"
      << "distinct_keys\t" << m.key_record_counts.size() << "\n"
      << "max_key_records\t" << max_key << "\n"
      << "wall_clock_units\t" << m.wall_clock_units << "\n";
}

JobMetrics ReadMetrics(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != "ee-metrics v1") {
    throw DataError("not an ee-metrics v1 stream");
  }
  JobMetrics m;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("malformed metrics line '" + line + "'");
    std::string key = line.substr(0, tab);
    std::string_view value = std::string_view(line).substr(tab + 1);
    if (key == "jobs") m.jobs = ToInt(value);
    else if (key == "mapper_busy") m.mapper_busy = SplitList(value);
    else if (key == "reducer_busy") m.reducer_busy = SplitList(value);
    else if (key == "shuffle_records") m.shuffle_records = ToInt(value);
    else if (key == "shuffle_bytes") m.shuffle_bytes = ToInt(value);
    else if (key == "sort_comparisons") m.sort_comparisons = ToInt(value);
    else if (key == "broadcast_bytes") m.broadcast_bytes = ToInt(value);
    else if (key == "wall_clock_units") m.wall_clock_units = ToInt(value);
    else if (key == "distinct_keys" || key == "max_key_records") continue;
    else throw DataError("unknown metrics key '" + key + "'");
  }
  return m;
}

}  // namespace eejoin
