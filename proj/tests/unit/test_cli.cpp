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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <sstream>

#include "aisport/io.hpp"
#include "aisport/pipeline.hpp"
#include "aisport/synth.hpp"
#include "fixtures.hpp"

#ifndef AISPORT_BIN
#error "AISPORT_BIN must point at the aisport executable"
#endif

using namespace aisport;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

// Runs the tool through the shell; stdout is captured, stderr goes to `err_file`.
Result run(const std::string& args, const std::string& err_file = "/dev/null") {
  const std::string cmd = std::string(AISPORT_BIN) + " " + args + " 2>" + err_file;
  Result r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int rc = ::pclose(p);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

/// Writes a small synthetic scenario, its NMEA and port GeoJSON into `dir`.
void synthesize(const fixture::TempDir& dir, double error_rate) {
  synth::Scenario s;
  s.seed = 11;
  s.start = from_unix(1704067200);
  s.port = synth::builtin_port();
  s.error_rate = error_rate;
  synth::PoissonTraffic t;
  t.per_day = 20;
  t.days = 2;
  s.traffic = t;
  const auto out = synth::generate(s);
  io::write_lines(dir.file("in.nmea"), out.nmea);
  io::write_file(dir.file("port.geojson"), geo::to_geojson(s.port));
}

std::size_t count_lines(const std::string& path) { return io::read_lines(path).size(); }

}  // namespace

TEST(Cli, DecodeValidAndErrors) {
  fixture::TempDir dir("cli-decode");
  synthesize(dir, 0.0);
  auto lines = io::read_lines(dir.file("in.nmea"));
  // Static reports span two lines each.
  const std::size_t n = pipeline::decode_lines(lines).records.size();
  lines[5].back() = lines[5].back() == '0' ? '1' : '0';
  io::write_lines(dir.file("bad.nmea"), lines);

  EXPECT_EQ(run("decode -i " + dir.file("in.nmea") + " -o " + dir.file("d.jsonl")).status, 0);
  EXPECT_EQ(count_lines(dir.file("d.jsonl")), n);
  EXPECT_EQ(count_lines(dir.file("d.errors.jsonl")), 0u);
  EXPECT_TRUE(std::filesystem::exists(dir.file("d.jsonl.manifest.json")));

  EXPECT_EQ(run("decode -i " + dir.file("bad.nmea") + " -o " + dir.file("b.jsonl")).status, 0);
  EXPECT_EQ(count_lines(dir.file("b.jsonl")), n - 1);
  const auto errs = io::read_lines(dir.file("b.errors.jsonl"));
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_NE(errs[0].find("BadChecksum"), std::string::npos);

  EXPECT_EQ(run("decode -i " + dir.file("absent.nmea")).status, 2);
  EXPECT_EQ(run("decode").status, 2);
}

TEST(Cli, ValidateExitCodesAndAgreement) {
  fixture::TempDir dir("cli-validate");
  synthesize(dir, 0.3);
  EXPECT_EQ(run("validate -i " + dir.file("in.nmea") + " --method geofence").status, 2);
  const std::string err = dir.file("err.txt");
  const auto r = run("validate -i " + dir.file("in.nmea") + " --port " + dir.file("port.geojson") + " -o " +
                         dir.file("v.jsonl"),
                     err);
  EXPECT_EQ(r.status, 0);
  const std::string log = io::read_file(err);
  const auto at = log.find("agreement=");
  ASSERT_NE(at, std::string::npos) << log;
  EXPECT_NEAR(std::stod(log.substr(at + 10)), 0.7, 0.05);

  io::write_file(dir.file("strict.cfg"), "min_agreement = 0.9\n");
  EXPECT_EQ(run("validate -i " + dir.file("in.nmea") + " --port " + dir.file("port.geojson") + " --config " +
                dir.file("strict.cfg") + " -o " + dir.file("v2.jsonl"))
                .status,
            1);
  io::write_file(dir.file("broken.cfg"), "knn_k = many\n");
  EXPECT_EQ(run("validate -i " + dir.file("in.nmea") + " --config " + dir.file("broken.cfg")).status, 2);
}

TEST(Cli, VoyagesEmptyAndUnsorted) {
  fixture::TempDir dir("cli-voyages");
  io::write_file(dir.file("empty.jsonl"), "");
  const std::string err = dir.file("err.txt");
  EXPECT_EQ(run("voyages -i " + dir.file("empty.jsonl") + " -o " + dir.file("e.jsonl"), err).status, 0);
  EXPECT_NE(io::read_file(err).find("voyages: 0"), std::string::npos);

  synthesize(dir, 0.0);
  ASSERT_EQ(run("validate -i " + dir.file("in.nmea") + " --port " + dir.file("port.geojson") + " -o " +
                dir.file("v.jsonl"))
                .status,
            0);
  auto lines = io::read_lines(dir.file("v.jsonl"));
  std::reverse(lines.begin(), lines.end());
  io::write_lines(dir.file("rev.jsonl"), lines);
  EXPECT_EQ(run("voyages -i " + dir.file("v.jsonl")).out, run("voyages -i " + dir.file("rev.jsonl")).out);
}

TEST(Cli, PipedStagesEqualRun) {
  fixture::TempDir dir("cli-run");
  synthesize(dir, 0.1);
  const std::string in = dir.file("in.nmea");
  const std::string port = " --port " + dir.file("port.geojson");
  ASSERT_EQ(run("run --source " + in + port + " --out " + dir.file("run")).status, 0);

  const std::string piped = std::string(AISPORT_BIN) + " decode -i " + in + " -o - | " + AISPORT_BIN +
                            " validate -i -" + port + " -o - | " + AISPORT_BIN + " voyages -i - -o " +
                            dir.file("piped.jsonl") + " 2>/dev/null";
  ASSERT_EQ(std::system(piped.c_str()), 0);
  EXPECT_EQ(io::read_file(dir.file("piped.jsonl")), io::read_file(dir.file("run/voyages.jsonl")));

  ASSERT_EQ(run("metrics -i " + dir.file("piped.jsonl") + port + " -o " + dir.file("m")).status, 0);
  EXPECT_EQ(io::read_file(dir.file("m/metrics.json")), io::read_file(dir.file("run/metrics/metrics.json")));
  EXPECT_EQ(io::read_file(dir.file("m/daily_arrivals.csv")), io::read_file(dir.file("run/metrics/daily_arrivals.csv")));

  // A second run reproduces every byte, manifest included.
  const std::string first = io::read_file(dir.file("run/manifest.json"));
  ASSERT_EQ(run("run --source " + in + port + " --out " + dir.file("run")).status, 0);
  EXPECT_EQ(io::read_file(dir.file("run/manifest.json")), first);
}

TEST(Cli, MetricsWithTruthAndVessel) {
  fixture::TempDir dir("cli-metrics");
  synthesize(dir, 0.0);
  ASSERT_EQ(run("run --source " + dir.file("in.nmea") + " --port " + dir.file("port.geojson") + " --out " +
                dir.file("run"))
                .status,
            0);
  const auto set = pipeline::parse_voyages_jsonl(io::read_lines(dir.file("run/voyages.jsonl")));
  ASSERT_FALSE(set.voyages.empty());
  const auto mmsi = set.voyages.front().mmsi;

  // Ground truth built from the predicted table gives zero error.
  std::string csv = "date,category,arrivals\n";
  const char* cats[] = {"cargo", "tanker", "passenger", "other"};
  const auto daily = io::read_lines(dir.file("run/metrics/daily_arrivals.csv"));
  for (std::size_t i = 1; i < daily.size(); ++i) {
    std::stringstream row(daily[i]);
    std::string date, n;
    std::getline(row, date, ',');
    for (const char* c : cats) {
      std::getline(row, n, ',');
      csv += date + "," + c + "," + n + "\n";
    }
  }
  io::write_file(dir.file("truth.csv"), csv);
  const auto r = run("metrics -i " + dir.file("run/voyages.jsonl") + " --ground-truth " + dir.file("truth.csv") +
                     " --vessel " + std::to_string(mmsi) + " -o " + dir.file("m"));
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("mae_macro=0"), std::string::npos) << r.out;
  EXPECT_TRUE(std::filesystem::exists(dir.file("m/schedule.csv")));
  EXPECT_NE(r.out.find("arrival"), std::string::npos);

  EXPECT_EQ(run("metrics -i " + dir.file("run/voyages.jsonl") + " --weekly mode -o " + dir.file("m2")).status, 2);
}

TEST(Cli, VersionAndHelp) {
  EXPECT_EQ(run("--help").status, 0);
  EXPECT_EQ(run("frobnicate").status, 2);
}
