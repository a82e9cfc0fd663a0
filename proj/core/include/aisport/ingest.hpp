// Copyright 2026 The aisport Authors
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

#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "aisport/codec.hpp"
#include "aisport/io.hpp"
#include "aisport/time.hpp"
#include "aisport/validate.hpp"

namespace aisport::ingest {

/// Blocking multi-producer multi-consumer FIFO. Producers wait while full
/// (nothing is dropped); close() wakes everyone and lets consumers drain.
template <class T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity = 65536) : capacity_(capacity == 0 ? 1 : capacity) {}

  /// False when the queue was closed before the item could be enqueued.
  bool push(T item) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return closed_ || items_.size() < capacity_; });
    if (closed_) return false;
    items_.push_back(std::move(item));
    not_empty_.notify_one();
    return true;
  }

  /// Blocks until an item is available; nullopt once closed and empty.
  std::optional<T> pop() {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return closed_ || !items_.empty(); });
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return item;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }
  std::size_t capacity() const noexcept { return capacity_; }

 private:
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<T> items_;
  bool closed_ = false;
};

/// Exponential backoff with full jitter: attempt n sleeps U[0, min(cap, initial * 2^n)].
class Backoff {
 public:
  Backoff(std::chrono::milliseconds initial, std::chrono::milliseconds cap, std::uint64_t seed = 1)
      : initial_(initial), cap_(cap), rng_(seed) {}

  std::chrono::milliseconds next();
  /// Upper bound of the next draw.
  std::chrono::milliseconds ceiling() const noexcept;
  void reset() noexcept { attempt_ = 0; }
  int attempt() const noexcept { return attempt_; }

 private:
  std::chrono::milliseconds initial_;
  std::chrono::milliseconds cap_;
  std::mt19937_64 rng_;
  int attempt_ = 0;
};

enum class SourceMode { Live, Replay };

struct SourceConfig {
  SourceMode mode = SourceMode::Replay;
  std::string host;  // live
  std::uint16_t port = 0;
  std::string path;  // replay
  /// 0 replays as fast as possible; N compresses recorded time N-fold.
  double replay_speed = 0.0;
  std::chrono::milliseconds backoff_initial{1000};
  std::chrono::milliseconds backoff_max{60000};
  /// Receiver clock for raw NMEA lines without a tag block: line i is stamped
  /// synthetic_start + i * synthetic_cadence.
  Timestamp synthetic_start{};
  Duration synthetic_cadence{1};
  std::uint64_t jitter_seed = 1;

  /// "tcp://host:port" or "file:path" (a bare path means file). Throws Error{InvalidConfig}.
  static SourceConfig parse(std::string_view source);
};

/// Environment variable that replaces the live endpoint ("host:port").
inline constexpr const char* kEndpointEnv = "AISPORT_ENDPOINT";

/// Applies kEndpointEnv when set. Throws Error{InvalidConfig} on a bad value.
void apply_env_override(SourceConfig& cfg);

/// Receives decoded records in input order.
class Sink {
 public:
  virtual ~Sink() = default;
  virtual void record(const io::Record& r) = 0;
  virtual void error(const codec::DecodeError& /*e*/) {}
  /// Interval during which the live source was disconnected.
  virtual void connection_gap(const validate::Outage& /*gap*/) {}
};

/// Keeps everything in memory.
class CollectingSink : public Sink {
 public:
  void record(const io::Record& r) override { records.push_back(r); }
  void error(const codec::DecodeError& e) override { errors.push_back(e); }
  void connection_gap(const validate::Outage& gap) override { gaps.push_back(gap); }

  std::vector<codec::PositionReport> positions() const;
  std::vector<codec::StaticReport> statics() const;

  std::vector<io::Record> records;
  std::vector<codec::DecodeError> errors;
  std::vector<validate::Outage> gaps;
};

/// Appends records to `<root>/ais-YYYY-MM-DD.jsonl` by UTC date of the
/// receiver timestamp and decode errors to `<root>/errors-YYYY-MM-DD.jsonl`
/// (dated by the last record seen). Throws Error{SinkWriteFailure}.
class StoreWriter : public Sink {
 public:
  explicit StoreWriter(std::string root);

  void record(const io::Record& r) override;
  void error(const codec::DecodeError& e) override;
  void flush();

  static std::string file_name(Date d);

 private:
  void open_for(Date d);

  std::string root_;
  std::optional<Date> current_;
  std::ofstream data_;
  std::ofstream errors_;
};

/// Stored records of every `ais-YYYY-MM-DD.jsonl` under `root`, in date then
/// line order. Throws Error{MissingFile} or Error{CorruptLine}.
std::vector<io::Record> load_store(const std::string& root);

struct IngestSummary {
  std::size_t lines = 0;
  std::size_t records = 0;
  std::size_t positions = 0;
  std::size_t statics = 0;
  std::size_t decode_errors = 0;
  std::size_t corrupt_lines = 0;  // unparsable stored JSON lines, skipped
  std::size_t skipped = 0;        // well-formed but unsupported message types
  std::size_t connections = 0;    // live only
  std::vector<validate::Outage> gaps;

  bool operator==(const IngestSummary&) const = default;
};

/// Feeds lines (stored JSON or raw NMEA, detected per line) to `sink`.
class LineProcessor {
 public:
  LineProcessor(Sink& sink, IngestSummary& summary) : sink_(sink), summary_(summary) {}

  /// `rx` stamps NMEA lines without a tag block. Returns the record time when
  /// the line produced a record.
  std::optional<Timestamp> process(std::string_view line, Timestamp rx);
  void finish();

 private:
  void emit_error(const codec::DecodeError& e);

  Sink& sink_;
  IngestSummary& summary_;
  codec::Decoder decoder_;
};

/// Replays cfg.path. Throws Error{MissingFile}.
IngestSummary run_replay(const SourceConfig& cfg, Sink& sink, std::stop_token stop = {});

/// Connects to cfg.host:cfg.port and streams until `stop` is requested,
/// reconnecting with backoff. Disconnected periods become global outages in
/// the summary and are reported to the sink. A partial trailing line at
/// disconnect is counted as a Malformed decode error. Throws
/// Error{UnresolvableEndpoint} when the host cannot be resolved and
/// Error{SinkWriteFailure} from the sink.
IngestSummary run_live(const SourceConfig& cfg, Sink& sink, std::stop_token stop,
                       std::size_t queue_capacity = 65536);

}  // namespace aisport::ingest
