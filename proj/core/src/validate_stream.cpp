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

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "aisport/error.hpp"
#include "aisport/validate.hpp"

namespace aisport::validate {

namespace {

using codec::navstat::kAtAnchor;
using codec::navstat::kMoored;
using codec::navstat::kUnderwayEngine;

struct Decision {
  std::uint8_t status;
  Method method;
};

std::uint8_t reported_as_corrected(std::uint8_t reported) {
  return reported == kAtAnchor || reported == kMoored ? reported : kUnderwayEngine;
}

Method moving_label(Strategy s, bool have_polygons) {
  switch (s) {
    case Strategy::Geofence: return Method::Geofence;
    case Strategy::Kinematic: return Method::Kinematic;
    case Strategy::Knn: return Method::Knn;
    case Strategy::Ensemble: return have_polygons ? Method::Geofence : Method::Kinematic;
  }
  return Method::Geofence;
}

// Rotation vote for every stopped message of one vessel. Within a stopped run
// the window trails the message once the run is long enough; earlier messages
// of a long run use the run's first full window.
std::vector<std::optional<std::uint8_t>> kinematic_votes(
    std::span<const PositionReport> stream, const std::vector<std::size_t>& idx,
    const std::vector<signed char>& stopped, const ValidatorConfig& cfg) {
  const KinematicParams params = cfg.kinematic();
  const std::size_t n = idx.size();
  std::vector<std::optional<std::uint8_t>> votes(n);
  auto ts = [&](std::size_t i) { return stream[idx[i]].timestamp; };

  std::size_t i = 0;
  while (i < n) {
    if (stopped[i] != 1) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < n && stopped[end] == 1 && ts(end) - ts(end - 1) <= cfg.outages.vessel_gap) {
      ++end;
    }
    const std::size_t rs = i;
    const std::size_t re = end - 1;
    // Prefix sums over the run.
    const std::size_t len = end - rs;
    std::vector<double> ps(len + 1, 0.0);
    std::vector<double> pc(len + 1, 0.0);
    std::vector<std::size_t> ph(len + 1, 0);
    for (std::size_t j = 0; j < len; ++j) {
      const auto& h = stream[idx[rs + j]].heading;
      ps[j + 1] = ps[j];
      pc[j + 1] = pc[j];
      ph[j + 1] = ph[j];
      if (h) {
        const auto e = geo::encode_heading(static_cast<double>(*h));
        ps[j + 1] += e.s;
        pc[j + 1] += e.c;
        ph[j + 1] += 1;
      }
    }
    auto vote = [&](std::size_t lo, std::size_t hi) -> std::optional<std::uint8_t> {
      const std::size_t a = lo - rs;
      const std::size_t b = hi - rs + 1;
      const std::size_t heads = ph[b] - ph[a];
      const std::size_t samples = b - a;
      if (heads == 0 || static_cast<double>(heads) < params.min_heading_fraction * samples) {
        return std::nullopt;
      }
      const double hn = static_cast<double>(heads);
      const double rbar = std::hypot((ps[b] - ps[a]) / hn, (pc[b] - pc[a]) / hn);
      return rbar < params.rbar_threshold ? kAtAnchor : kMoored;
    };

    std::optional<std::uint8_t> leading;
    if (ts(re) - ts(rs) >= params.window) {
      std::size_t hi = rs;
      while (hi + 1 <= re && ts(hi + 1) <= ts(rs) + params.window) {
        ++hi;
      }
      leading = vote(rs, hi);
    }
    std::size_t lo = rs;
    for (std::size_t j = rs; j <= re; ++j) {
      if (ts(j) - ts(rs) >= params.window) {
        while (ts(lo) < ts(j) - params.window) {
          ++lo;
        }
        votes[j] = vote(lo, j);
      } else {
        votes[j] = leading;
      }
    }
    i = end;
  }
  return votes;
}

class Hysteresis {
 public:
  Hysteresis(int min_msgs, Duration min_time) : min_msgs_(min_msgs), min_time_(min_time) {}

  Decision apply(Decision raw, Timestamp t) {
    if (!current_) {
      current_ = raw;
      return raw;
    }
    if (raw.status == current_->status) {
      pending_count_ = 0;
      return raw;
    }
    if (pending_count_ > 0 && raw.status == pending_status_) {
      ++pending_count_;
    } else {
      pending_status_ = raw.status;
      pending_count_ = 1;
      pending_since_ = t;
    }
    if (pending_count_ >= min_msgs_ || t - pending_since_ >= min_time_) {
      current_ = raw;
      pending_count_ = 0;
      return raw;
    }
    return *current_;
  }

 private:
  int min_msgs_;
  Duration min_time_;
  std::optional<Decision> current_;
  std::uint8_t pending_status_ = 0;
  int pending_count_ = 0;
  Timestamp pending_since_{};
};

void process_vessel(std::span<const PositionReport> stream, const std::vector<std::size_t>& idx,
                    const geo::PortGeometry& port, const ValidatorConfig& cfg,
                    const KnnModel* model, const std::vector<Outage>& outages,
                    std::vector<ValidatedMessage>& out) {
  const std::size_t n = idx.size();
  const bool have_polygons = !port.empty();
  const std::uint32_t mmsi = stream[idx.front()].mmsi;

  std::vector<signed char> stopped(n, -1);  // -1 unknown speed
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = stream[idx[i]];
    if (r.sog) {
      stopped[i] = *r.sog < cfg.stopped_threshold_kn ? 1 : 0;
    }
  }
  std::vector<std::optional<std::uint8_t>> kin;
  if (cfg.method == Strategy::Kinematic || cfg.method == Strategy::Ensemble) {
    kin = kinematic_votes(stream, idx, stopped, cfg);
  }

  auto geofence = [&](const PositionReport& r) -> std::optional<std::uint8_t> {
    const geo::LatLon p{r.lat, r.lon};
    if (port.terminal_at(p) != nullptr) return kMoored;
    if (port.anchorage_at(p) != nullptr) return kAtAnchor;
    return std::nullopt;
  };
  auto knn = [&](const PositionReport& r) -> std::optional<std::uint8_t> {
    const geo::LatLon p{r.lat, r.lon};
    if (model == nullptr ||
        !(std::abs(p.lat - model->origin().lat) < geo::kMaxProjectionExtentDeg)) {
      return std::nullopt;
    }
    return model->vote(geo::project_local(model->origin(), p));
  };

  std::vector<const Outage*> relevant;
  for (const auto& o : outages) {
    if (o.scope == OutageScope::Global || o.scope == OutageScope::Area ||
        (o.scope == OutageScope::Vessel && o.mmsi == mmsi)) {
      relevant.push_back(&o);
    }
  }

  Hysteresis hysteresis(cfg.hysteresis_msgs,
                        Duration{static_cast<long long>(std::llround(cfg.hysteresis_min * 60.0))});
  for (std::size_t i = 0; i < n; ++i) {
    const PositionReport& r = stream[idx[i]];
    Decision d{reported_as_corrected(r.navstat), Method::Reported};
    if (stopped[i] == 0) {
      d = {kUnderwayEngine, moving_label(cfg.method, have_polygons)};
    } else if (stopped[i] == 1) {
      switch (cfg.method) {
        case Strategy::Geofence:
          d = {geofence(r).value_or(kUnderwayEngine), Method::Geofence};
          break;
        case Strategy::Kinematic:
          if (kin[i]) {
            d = {*kin[i], Method::Kinematic};
          } else if (have_polygons) {
            d = {geofence(r).value_or(kUnderwayEngine), Method::Geofence};
          }
          break;
        case Strategy::Knn:
          if (const auto v = knn(r)) {
            d = {*v, Method::Knn};
          }
          break;
        case Strategy::Ensemble: {
          const auto g = have_polygons ? geofence(r) : std::nullopt;
          const auto& k = kin[i];
          if (k && g && *k != *g) {
            // Kinematics override the polygons unless the knn vote sides with them.
            if (const auto v = knn(r)) {
              d = {*v, Method::Knn};
            } else {
              d = {*k, Method::Kinematic};
            }
          } else if (k) {
            d = {*k, Method::Kinematic};
          } else if (g) {
            d = {*g, Method::Geofence};
          } else if (const auto v = knn(r)) {
            d = {*v, Method::Knn};
          } else if (have_polygons) {
            d = {kUnderwayEngine, Method::Geofence};
          }
          break;
        }
      }
    }

    d = hysteresis.apply(d, r.timestamp);

    ValidatedMessage& m = out[idx[i]];
    m.report = r;
    m.corrected_navstat = d.status;
    m.method = d.method;
    m.agreed_with_reported = d.status == r.navstat;
    if (i > 0) {
      const Timestamp prev_t = stream[idx[i - 1]].timestamp;
      const auto& prev = stream[idx[i - 1]];
      for (const Outage* o : relevant) {
        if (!o->overlaps(prev_t, r.timestamp)) {
          continue;
        }
        if (o->scope == OutageScope::Area &&
            o->cell != cell_of({prev.lat, prev.lon}, cfg.outages.cell_deg)) {
          continue;
        }
        m.gap_flag = true;
        break;
      }
    }
  }
}

}  // namespace

ValidationResult validate_stream(std::span<const PositionReport> stream,
                                 const geo::PortGeometry& port, const ValidatorConfig& cfg,
                                 int jobs) {
  if (cfg.method == Strategy::Geofence && port.empty()) {
    throw Error(ErrorCode::InvalidConfig, "geofence method needs anchorage/terminal polygons");
  }

  ValidationResult result;
  result.messages.resize(stream.size());
  if (stream.empty()) {
    return result;
  }

  Timestamp now = stream.front().timestamp;
  for (const auto& r : stream) {
    now = std::max(now, r.timestamp);
  }
  result.outages = detect_outages(stream, now, cfg.outages);

  std::optional<KnnModel> model;
  if (cfg.method == Strategy::Knn || cfg.method == Strategy::Ensemble) {
    std::vector<TrainingPoint> training;
    for (const auto& r : stream) {
      if (r.sog && *r.sog < cfg.stopped_threshold_kn &&
          (r.navstat == kAtAnchor || r.navstat == kMoored)) {
        training.push_back({{r.lat, r.lon}, r.navstat});
      }
    }
    if (training.size() >= static_cast<std::size_t>(cfg.knn_k)) {
      model.emplace(training, cfg.knn_k);
    } else if (cfg.method == Strategy::Knn) {
      throw Error(ErrorCode::TooFewPoints, std::to_string(training.size()) +
                                               " stopped training messages for k = " +
                                               std::to_string(cfg.knn_k));
    }
  }

  std::map<std::uint32_t, std::vector<std::size_t>> by_vessel;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    by_vessel[stream[i].mmsi].push_back(i);
  }
  std::vector<std::vector<std::size_t>*> groups;
  groups.reserve(by_vessel.size());
  for (auto& [mmsi, idx] : by_vessel) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return stream[a].timestamp < stream[b].timestamp;
    });
    groups.push_back(&idx);
  }

  const KnnModel* model_ptr = model ? &*model : nullptr;
  auto work = [&](std::size_t first, std::size_t step) {
    for (std::size_t g = first; g < groups.size(); g += step) {
      process_vessel(stream, *groups[g], port, cfg, model_ptr, result.outages, result.messages);
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || groups.size() < 2) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(work, w, workers);
    }
  }

  auto& s = result.summary;
  s.messages = result.messages.size();
  s.knn_fitted = model.has_value();
  for (const auto& m : result.messages) {
    s.agreed += m.agreed_with_reported ? 1 : 0;
    s.by_method[static_cast<int>(m.method)] += 1;
    s.gap_flagged += m.gap_flag ? 1 : 0;
  }
  return result;
}

}  // namespace aisport::validate
