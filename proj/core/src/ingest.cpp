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

#include "aisport/ingest.hpp"

#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <regex>
#include <thread>
#include <variant>

#include "aisport/error.hpp"

namespace aisport::ingest {

namespace fs = std::filesystem;

namespace {

Timestamp now_utc() { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }

// Sleeps for `d` unless `stop` is requested first. Returns false when stopped.
bool sleep_for(std::chrono::milliseconds d, std::stop_token stop) {
  std::mutex mu;
  std::condition_variable_any cv;
  std::unique_lock lock(mu);
  cv.wait_for(lock, stop, d, [] { return false; });
  return !stop.stop_requested();
}

void parse_endpoint(std::string_view text, SourceConfig& cfg) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(ErrorCode::InvalidConfig, "endpoint must be host:port, got '" + std::string(text) + "'");
  }
  unsigned port = 0;
  const auto digits = text.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || port == 0 || port > 65535) {
    throw Error(ErrorCode::InvalidConfig, "bad port in endpoint '" + std::string(text) + "'");
  }
  cfg.mode = SourceMode::Live;
  cfg.host = std::string(text.substr(0, colon));
  cfg.port = static_cast<std::uint16_t>(port);
}

class Socket {
 public:
  explicit Socket(int fd = -1) : fd_(fd) {}
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() {
    if (fd_ >= 0) ::close(fd_);
  }
  int get() const noexcept { return fd_; }
  bool valid() const noexcept { return fd_ >= 0; }

 private:
  int fd_;
};

// Returns a connected socket or -1. Throws UnresolvableEndpoint on a
// permanent name-resolution failure.
int connect_to(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res);
  if (rc == EAI_AGAIN) {
    return -1;
  }
  if (rc != 0) {
    throw Error(ErrorCode::UnresolvableEndpoint, host + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  return fd;
}

struct LineItem {
  std::string text;
  Timestamp rx;
};
struct PartialItem {
  std::string text;
};
struct GapItem {
  validate::Outage gap;
};
struct ConnectedItem {};
using Item = std::variant<LineItem, PartialItem, GapItem, ConnectedItem>;

void reader_loop(const SourceConfig& cfg, BoundedQueue<Item>& queue, std::stop_token stop) {
  Backoff backoff(cfg.backoff_initial, cfg.backoff_max, cfg.jitter_seed);
  std::optional<Timestamp> gap_start;
  while (!stop.stop_requested()) {
    Socket sock(connect_to(cfg.host, cfg.port));
    if (!sock.valid()) {
      if (!sleep_for(backoff.next(), stop)) break;
      continue;
    }
    backoff.reset();
    queue.push(ConnectedItem{});
    if (gap_start) {
      validate::Outage gap;
      gap.scope = validate::OutageScope::Global;
      gap.start = *gap_start;
      // Clock resolution is one second; keep end > start for sub-second drops.
      gap.end = std::max(now_utc(), *gap_start + Duration{1});
      queue.push(GapItem{gap});
      gap_start.reset();
    }

    std::string buffer;
    char chunk[8192];
    while (!stop.stop_requested()) {
      pollfd pfd{sock.get(), POLLIN, 0};
      const int ready = ::poll(&pfd, 1, 100);
      if (ready < 0) {
        if (errno == EINTR) continue;
        break;
      }
      if (ready == 0) continue;
      const ssize_t n = ::recv(sock.get(), chunk, sizeof(chunk), 0);
      if (n <= 0) {
        if (n < 0 && errno == EINTR) continue;
        break;
      }
      buffer.append(chunk, static_cast<std::size_t>(n));
      const Timestamp rx = now_utc();
      std::size_t pos = 0;
      for (auto nl = buffer.find('\n'); nl != std::string::npos; nl = buffer.find('\n', pos)) {
        std::string line = buffer.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        queue.push(LineItem{std::move(line), rx});
        pos = nl + 1;
      }
      buffer.erase(0, pos);
    }
    if (!buffer.empty()) {
      queue.push(PartialItem{std::move(buffer)});
    }
    if (stop.stop_requested()) break;
    gap_start = now_utc();
    if (!sleep_for(backoff.next(), stop)) break;
  }
}

}  // namespace

std::chrono::milliseconds Backoff::ceiling() const noexcept {
  auto c = initial_;
  for (int i = 0; i < attempt_ && c < cap_; ++i) c *= 2;
  return std::min(c, cap_);
}

std::chrono::milliseconds Backoff::next() {
  const auto hi = ceiling();
  ++attempt_;
  std::uniform_int_distribution<std::int64_t> dist(0, hi.count());
  return std::chrono::milliseconds{dist(rng_)};
}

SourceConfig SourceConfig::parse(std::string_view source) {
  SourceConfig cfg;
  if (source.rfind("tcp://", 0) == 0) {
    parse_endpoint(source.substr(6), cfg);
  } else if (source.rfind("file:", 0) == 0) {
    cfg.mode = SourceMode::Replay;
    cfg.path = std::string(source.substr(5));
  } else if (!source.empty()) {
    cfg.mode = SourceMode::Replay;
    cfg.path = std::string(source);
  } else {
    throw Error(ErrorCode::InvalidConfig, "empty source");
  }
  if (cfg.mode == SourceMode::Replay && cfg.path.empty()) {
    throw Error(ErrorCode::InvalidConfig, "file source needs a path");
  }
  return cfg;
}

void apply_env_override(SourceConfig& cfg) {
  if (const char* env = std::getenv(kEndpointEnv); env != nullptr && *env != '\0') {
    std::string_view v(env);
    if (v.rfind("tcp://", 0) == 0) v.remove_prefix(6);
    parse_endpoint(v, cfg);
  }
}

std::vector<codec::PositionReport> CollectingSink::positions() const {
  std::vector<codec::PositionReport> out;
  for (const auto& r : records) {
    if (const auto* p = std::get_if<codec::PositionReport>(&r)) out.push_back(*p);
  }
  return out;
}

std::vector<codec::StaticReport> CollectingSink::statics() const {
  std::vector<codec::StaticReport> out;
  for (const auto& r : records) {
    if (const auto* s = std::get_if<codec::StaticReport>(&r)) out.push_back(*s);
  }
  return out;
}

StoreWriter::StoreWriter(std::string root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) {
    throw Error(ErrorCode::SinkWriteFailure, "cannot create store " + root_ + ": " + ec.message());
  }
}

std::string StoreWriter::file_name(Date d) { return "ais-" + format_date(d) + ".jsonl"; }

void StoreWriter::open_for(Date d) {
  if (current_ == d) return;
  data_.close();
  errors_.close();
  data_.open(fs::path(root_) / file_name(d), std::ios::binary | std::ios::app);
  errors_.open(fs::path(root_) / ("errors-" + format_date(d) + ".jsonl"), std::ios::binary | std::ios::app);
  if (!data_ || !errors_) {
    throw Error(ErrorCode::SinkWriteFailure, "cannot open store file for " + format_date(d));
  }
  current_ = d;
}

void StoreWriter::record(const io::Record& r) {
  const Timestamp ts = std::visit([](const auto& v) { return v.timestamp; }, r);
  open_for(utc_date(ts));
  data_ << io::dump_record(r) << '\n';
  if (!data_) throw Error(ErrorCode::SinkWriteFailure, "write to store failed");
}

void StoreWriter::error(const codec::DecodeError& e) {
  if (!current_) open_for(utc_date(Timestamp{}));
  errors_ << io::dump(io::to_json(e)) << '\n';
  if (!errors_) throw Error(ErrorCode::SinkWriteFailure, "write to store failed");
}

void StoreWriter::flush() {
  data_.flush();
  errors_.flush();
}

std::vector<io::Record> load_store(const std::string& root) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::MissingFile, "store directory not found: " + root);
  }
  static const std::regex pattern(R"(ais-\d{4}-\d{2}-\d{2}\.jsonl)");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_regular_file() && std::regex_match(entry.path().filename().string(), pattern)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<io::Record> out;
  for (const auto& f : files) {
    std::size_t n = 0;
    for (const auto& line : io::read_lines(f.string())) {
      ++n;
      if (line.empty()) continue;
      try {
        out.push_back(io::parse_record(line));
      } catch (const Error& e) {
        throw Error(ErrorCode::CorruptLine, f.string() + ":" + std::to_string(n) + ": " + e.what());
      }
    }
  }
  return out;
}

void LineProcessor::emit_error(const codec::DecodeError& e) {
  ++summary_.decode_errors;
  sink_.error(e);
}

std::optional<Timestamp> LineProcessor::process(std::string_view line, Timestamp rx) {
  if (line.empty()) return std::nullopt;
  ++summary_.lines;
  auto deliver = [&](io::Record r) {
    const Timestamp ts = std::visit([](const auto& v) { return v.timestamp; }, r);
    ++summary_.records;
    if (std::holds_alternative<codec::PositionReport>(r)) {
      ++summary_.positions;
    } else {
      ++summary_.statics;
    }
    sink_.record(r);
    return ts;
  };

  if (line.front() == '{') {
    try {
      return deliver(io::parse_record(line));
    } catch (const Error&) {
      ++summary_.corrupt_lines;
      return std::nullopt;
    }
  }

  auto result = decoder_.feed(line, rx);
  for (const auto& e : result.discarded) emit_error(e);
  if (auto* p = std::get_if<codec::PositionReport>(&result.outcome)) return deliver(std::move(*p));
  if (auto* s = std::get_if<codec::StaticReport>(&result.outcome)) return deliver(std::move(*s));
  if (const auto* e = std::get_if<codec::DecodeError>(&result.outcome)) {
    emit_error(*e);
  } else if (std::holds_alternative<codec::Skipped>(result.outcome)) {
    ++summary_.skipped;
  }
  return std::nullopt;
}

void LineProcessor::finish() {
  for (const auto& e : decoder_.finish()) emit_error(e);
}

IngestSummary run_replay(const SourceConfig& cfg, Sink& sink, std::stop_token stop) {
  const auto lines = io::read_lines(cfg.path);
  IngestSummary summary;
  LineProcessor proc(sink, summary);
  std::optional<Timestamp> prev;
  std::size_t index = 0;
  for (const auto& line : lines) {
    if (stop.stop_requested()) break;
    const Timestamp rx = cfg.synthetic_start + cfg.synthetic_cadence * static_cast<long>(index++);
    const auto ts = proc.process(line, rx);
    if (ts && cfg.replay_speed > 0.0) {
      if (prev && *ts > *prev) {
        const auto wait = std::chrono::duration<double>(*ts - *prev) / cfg.replay_speed;
        if (!sleep_for(std::chrono::duration_cast<std::chrono::milliseconds>(wait), stop)) break;
      }
      prev = ts;
    }
  }
  proc.finish();
  return summary;
}

IngestSummary run_live(const SourceConfig& cfg, Sink& sink, std::stop_token stop,
                       std::size_t queue_capacity) {
  if (cfg.mode != SourceMode::Live || cfg.host.empty()) {
    throw Error(ErrorCode::InvalidConfig, "live ingest needs a tcp://host:port source");
  }
  BoundedQueue<Item> queue(queue_capacity);
  std::exception_ptr reader_error;
  IngestSummary summary;
  LineProcessor proc(sink, summary);
  {
    std::jthread reader([&](std::stop_token own) {
      try {
        // Either token stops the loop.
        std::stop_source combined;
        std::stop_callback a(stop, [&] { combined.request_stop(); });
        std::stop_callback b(own, [&] { combined.request_stop(); });
        reader_loop(cfg, queue, combined.get_token());
      } catch (...) {
        reader_error = std::current_exception();
      }
      queue.close();
    });

    try {
      while (auto item = queue.pop()) {
        if (auto* l = std::get_if<LineItem>(&*item)) {
          proc.process(l->text, l->rx);
        } else if (auto* p = std::get_if<PartialItem>(&*item)) {
          ++summary.lines;
          ++summary.decode_errors;
          sink.error(codec::DecodeError{ErrorCode::Malformed, p->text, "partial line at disconnect"});
        } else if (auto* g = std::get_if<GapItem>(&*item)) {
          summary.gaps.push_back(g->gap);
          sink.connection_gap(g->gap);
        } else {
          ++summary.connections;
        }
      }
    } catch (...) {
      // Unblock a reader waiting on a full queue before the jthread joins.
      reader.request_stop();
      queue.close();
      throw;
    }
  }
  proc.finish();
  if (reader_error) std::rethrow_exception(reader_error);
  return summary;
}

}  // namespace aisport::ingest
