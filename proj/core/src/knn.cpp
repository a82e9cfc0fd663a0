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
#include <numeric>
#include <queue>

#include "aisport/error.hpp"
#include "aisport/validate.hpp"

namespace aisport::validate {

namespace {

constexpr std::uint32_t kLeafSize = 16;

struct Candidate {
  double d2;
  std::uint32_t index;
};

// Max-heap on (d2, index): the top is the worst of the current k best.
bool worse(const Candidate& a, const Candidate& b) noexcept {
  return a.d2 < b.d2 || (a.d2 == b.d2 && a.index < b.index);
}

double coord(const geo::PlanarPoint& p, int axis) noexcept { return axis == 0 ? p.x : p.y; }

double squared_distance(geo::PlanarPoint a, geo::PlanarPoint b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

struct KnnModel::Heap {
  std::size_t k;
  std::vector<Candidate> items;

  bool full() const noexcept { return items.size() == k; }
  double worst() const noexcept { return items.front().d2; }

  void offer(Candidate c) {
    if (!full()) {
      items.push_back(c);
      std::push_heap(items.begin(), items.end(), worse);
    } else if (worse(c, items.front())) {
      std::pop_heap(items.begin(), items.end(), worse);
      items.back() = c;
      std::push_heap(items.begin(), items.end(), worse);
    }
  }
};

KnnModel::KnnModel(std::span<const TrainingPoint> training, int k) : k_(k) {
  if (k < 1) {
    throw Error(ErrorCode::InvalidConfig, "k must be at least 1");
  }
  if (training.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::TooFewPoints, std::to_string(training.size()) +
                                             " training points for k = " + std::to_string(k));
  }
  double lat = 0.0;
  double lon = 0.0;
  for (const auto& t : training) {
    if (t.label != codec::navstat::kAtAnchor && t.label != codec::navstat::kMoored) {
      throw Error(ErrorCode::InvalidConfig, "training labels must be 1 or 5");
    }
    lat += t.position.lat;
    lon += t.position.lon;
  }
  const auto n = static_cast<double>(training.size());
  origin_ = {lat / n, lon / n};

  points_.reserve(training.size());
  for (const auto& t : training) {
    points_.push_back({geo::project_local(origin_, t.position), t.label});
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  split_.assign(points_.size(), 0.0);
  build(0, static_cast<std::uint32_t>(order_.size()), 0);
}

void KnnModel::build(std::uint32_t lo, std::uint32_t hi, int depth) {
  if (hi - lo <= kLeafSize) {
    return;
  }
  const int axis = depth % 2;
  const std::uint32_t mid = lo + (hi - lo) / 2;
  std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return coord(points_[a].xy, axis) < coord(points_[b].xy, axis);
                   });
  // Children reorder order_ again, so the split value is kept separately.
  split_[mid] = coord(points_[order_[mid]].xy, axis);
  build(lo, mid, depth + 1);
  build(mid, hi, depth + 1);
}

void KnnModel::search(geo::PlanarPoint q, std::uint32_t lo, std::uint32_t hi, int depth,
                      Heap& heap) const {
  if (hi - lo <= kLeafSize) {
    for (std::uint32_t i = lo; i < hi; ++i) {
      const std::uint32_t idx = order_[i];
      heap.offer({squared_distance(q, points_[idx].xy), idx});
    }
    return;
  }
  const int axis = depth % 2;
  const std::uint32_t mid = lo + (hi - lo) / 2;
  const double diff = coord(q, axis) - split_[mid];
  // Left holds coordinates <= split, right holds coordinates >= split.
  if (diff < 0) {
    search(q, lo, mid, depth + 1, heap);
    if (!heap.full() || diff * diff <= heap.worst()) {
      search(q, mid, hi, depth + 1, heap);
    }
  } else {
    search(q, mid, hi, depth + 1, heap);
    if (!heap.full() || diff * diff <= heap.worst()) {
      search(q, lo, mid, depth + 1, heap);
    }
  }
}

std::vector<std::uint32_t> KnnModel::nearest(geo::PlanarPoint q) const {
  Heap heap{static_cast<std::size_t>(k_), {}};
  heap.items.reserve(heap.k);
  search(q, 0, static_cast<std::uint32_t>(order_.size()), 0, heap);
  std::sort(heap.items.begin(), heap.items.end(), worse);
  std::vector<std::uint32_t> out;
  out.reserve(heap.items.size());
  for (const auto& c : heap.items) {
    out.push_back(c.index);
  }
  return out;
}

std::uint8_t KnnModel::vote(geo::PlanarPoint q) const {
  Heap heap{static_cast<std::size_t>(k_), {}};
  heap.items.reserve(heap.k);
  search(q, 0, static_cast<std::uint32_t>(order_.size()), 0, heap);
  std::size_t moored = 0;
  for (const auto& c : heap.items) {
    moored += points_[c.index].label == codec::navstat::kMoored ? 1 : 0;
  }
  return 2 * moored > heap.items.size() ? codec::navstat::kMoored : codec::navstat::kAtAnchor;
}

KnnModel fit_knn(std::span<const TrainingPoint> training, int k) { return KnnModel(training, k); }

KnnModel fit_knn(std::span<const ValidatedMessage> history, int k, double threshold_kn) {
  std::vector<TrainingPoint> training;
  for (const auto& m : history) {
    const auto& r = m.report;
    if (r.sog && *r.sog < threshold_kn &&
        (r.navstat == codec::navstat::kAtAnchor || r.navstat == codec::navstat::kMoored)) {
      training.push_back({{r.lat, r.lon}, r.navstat});
    }
  }
  return KnnModel(training, k);
}

std::uint8_t classify_knn(const KnnModel& model, const PositionReport& r, double threshold_kn) {
  if (!is_stopped(r, threshold_kn)) {
    return codec::navstat::kUnderwayEngine;
  }
  return model.vote(geo::project_local(model.origin(), {r.lat, r.lon}));
}

}  // namespace aisport::validate
