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

#ifndef EEJOIN_MRENGINE_H_
#define EEJOIN_MRENGINE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eejoin/error.h"
#include "eejoin/rational.h"

namespace eejoin {

struct KeyedRecord {
  std::string key;
  std::string value;

  std::size_t size_bytes() const { return key.size() + value.size(); }
  auto operator<=>(const KeyedRecord &) const = default;
};

// Collects a task's emissions and the abstract work it reports.
class Emitter {
 public:
  void Emit(std::string key, std::string value) {
    records_.push_back({std::move(key), std::move(value)});
  }
  // Extra cost units beyond records read and written (lookups, comparisons).
  void AddWork(std::int64_t units) { work_ += units; }

  std::vector<KeyedRecord> &records() { return records_; }
  std::int64_t work() const { return work_; }

 private:
  std::vector<KeyedRecord> records_;
  std::int64_t work_ = 0;
};

using MapFn = std::function<void(std::string_view record, Emitter &out)>;
using ReduceFn = std::function<void(std::string_view key,
                                    std::span<const std::string> values,
                                    Emitter &out)>;

// Broadcast data is whatever the map and reduce closures capture; all tasks
// share it read-only. broadcast_bytes only feeds the metrics.
struct JobSpec {
  MapFn map;
  ReduceFn reduce;  // empty for map-only jobs
  int mappers = 1;
  int reducers = 1;
  int workers = 1;
  std::int64_t broadcast_bytes = 0;
};

// Per-phase counters in abstract cost units. A task's busy time is the
// records it reads plus the records it emits plus the work it reports.
struct JobMetrics {
  std::vector<std::int64_t> mapper_busy;
  std::vector<std::int64_t> reducer_busy;
  std::int64_t shuffle_records = 0;
  std::int64_t shuffle_bytes = 0;
  std::int64_t sort_comparisons = 0;
  std::int64_t broadcast_bytes = 0;
  std::map<std::string, std::int64_t> key_record_counts;
  // max mapper busy + shuffle records + max reducer busy.
  std::int64_t wall_clock_units = 0;
  std::int64_t jobs = 0;

  // Sequential composition: vectors add element-wise, counters add.
  void Accumulate(const JobMetrics &other);

  std::int64_t MaxMapperBusy() const;
  std::int64_t MaxReducerBusy() const;
  std::int64_t TotalMapperBusy() const;
  std::int64_t TotalReducerBusy() const;
};

struct JobResult {
  std::vector<KeyedRecord> output;
  JobMetrics metrics;
};

// A map or reduce function threw. Carries the failing task.
class JobError : public Error {
 public:
  JobError(std::string task, const std::string &cause)
      : Error(ErrorKind::kData, "task " + task + " failed: " + cause),
        task_(std::move(task)) {}
  const std::string &task() const { return task_; }

 private:
  std::string task_;
};

// Runs a job locally. Input records are dealt round-robin to `mappers` map
// tasks (concatenating partitions in order). Emissions are hash-partitioned by
// key (FNV-1a 64 modulo `reducers`); each reducer sorts its records by
// (key, value), so values reach reduce in a fixed order and equal keys group
// together. Output is reducer outputs concatenated in reducer order, or for
// map-only jobs map outputs in task order. For a fixed reducer count the
// output is byte-identical for any mapper or worker count.
JobResult RunJob(const JobSpec &spec,
                 const std::vector<std::vector<std::string>> &input);

std::uint64_t Fnv1a64(std::string_view bytes);

// max per-key record count / mean per-key record count. Throws DataError when
// nothing was shuffled.
Ratio MeasureSkew(const JobMetrics &metrics);

// "ee-metrics v1": one `key<TAB>value` per line; per-task lists are
// comma-separated.
void WriteMetrics(std::ostream &out, const JobMetrics &metrics);
JobMetrics ReadMetrics(std::istream &in);

}  // namespace eejoin

#endif  // EEJOIN_MRENGINE_H_
