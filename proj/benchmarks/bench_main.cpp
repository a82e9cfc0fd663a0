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

// Throughput of the hot paths on synthetic port traffic.

#include <benchmark/benchmark.h>

#include <random>

#include "aisport/codec.hpp"
#include "aisport/pipeline.hpp"
#include "aisport/synth.hpp"
#include "aisport/validate.hpp"
#include "aisport/voyage.hpp"

using namespace aisport;

namespace {

const synth::Output& traffic() {
  static const synth::Output out = [] {
    synth::Scenario s;
    s.seed = 42;
    s.start = from_unix(1704067200);
    s.port = synth::builtin_port();
    s.error_rate = 0.3;
    s.traffic = synth::PoissonTraffic{};
    return synth::generate(s);
  }();
  return out;
}

const pipeline::Decoded& decoded() {
  static const pipeline::Decoded d = pipeline::decode_lines(traffic().nmea);
  return d;
}

void BM_Decode(benchmark::State& state) {
  const auto& lines = traffic().nmea;
  for (auto _ : state) {
    codec::Decoder dec;
    std::size_t n = 0;
    for (const auto& l : lines) n += dec.feed(l, Timestamp{}).outcome.index() == 0 ? 1 : 0;
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * lines.size()));
}
BENCHMARK(BM_Decode)->Unit(benchmark::kMillisecond);

void BM_Knn(benchmark::State& state) {
  const auto k = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> c(-0.05, 0.05);
  std::vector<validate::TrainingPoint> train;
  for (int i = 0; i < 20000; ++i) train.push_back({{37.9 + c(rng), 23.6 + c(rng)}, static_cast<std::uint8_t>(i % 2 ? 1 : 5)});
  const auto model = validate::fit_knn(train, k);
  std::vector<geo::PlanarPoint> queries;
  for (int i = 0; i < 1024; ++i) queries.push_back({c(rng) * 8000.0, c(rng) * 8000.0});
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(model.vote(queries[i++ & 1023]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Knn)->Arg(1)->Arg(50)->Arg(300);

void BM_Validate(benchmark::State& state) {
  const auto& recs = decoded().records;
  const auto port = synth::builtin_port();
  validate::ValidatorConfig cfg;
  std::size_t n = 0;
  for (auto _ : state) {
    const auto v = pipeline::run_validate(recs, port, cfg, {}, static_cast<int>(state.range(0)));
    n = v.messages.size();
    benchmark::DoNotOptimize(v.summary.agreed);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_Validate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ExtractVoyages(benchmark::State& state) {
  static const auto validated = pipeline::run_validate(decoded().records, synth::builtin_port(), {});
  for (auto _ : state) benchmark::DoNotOptimize(voyage::extract_voyages(validated.messages).size());
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * validated.messages.size()));
}
BENCHMARK(BM_ExtractVoyages)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
