// Copyright 2026 The fedotlab Authors.
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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fedotlab/errors.h"
#include "fedotlab/exp/checkpoint.h"
#include "fedotlab/exp/commands.h"
#include "fedotlab/exp/gradcheck_suite.h"
#include "fedotlab/exp/ot_check.h"
#include "fedotlab/exp/plan.h"
#include "fedotlab/exp/results.h"

namespace fedotlab::exp {
namespace {

using numkit::Matrix;
using numkit::RngStream;

const char* kSmallPlan = R"(# comment line
[plan]
output_dir = out   # trailing comment
seeds = 3, 4
methods = FedOT, FedAvg
m = 30
tau = 5

[task]
n = 3
d = 4
classes = 2

[federation]
T = 40
eta1 = 0.05
eta2 = 0.05
k = 2
batch = 10
proxy_burst = 0
eval_every = 4
threads = 1
)";

ExperimentPlan Parse(const std::string& text) {
  std::istringstream in(text);
  return ParsePlan(in);
}

std::string ErrorOf(const std::string& text) {
  try {
    Parse(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

TEST_CASE("plan parsing") {
  const ExperimentPlan p = Parse(kSmallPlan);
  CHECK(p.output_dir == "out");
  CHECK(p.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(p.methods == std::vector<sim::Method>{sim::Method::kFedOT, sim::Method::kFedAvg});
  CHECK(p.task.n == 3);
  CHECK(p.task.d == 4);
  CHECK(p.base.T == 40);
  CHECK(p.base.max_steps_per_min_step == 2);
  CHECK(p.base.eta1 == 0.05);

  const auto entries = p.Expand();
  REQUIRE(entries.size() == 4);
  CHECK(entries[0].config.method == sim::Method::kFedOT);
  CHECK(entries[0].config.seed == 3);
  CHECK(entries[1].config.seed == 4);
  CHECK(entries[2].config.method == sim::Method::kFedAvg);
  for (const auto& e : entries) CHECK(e.config.n == 3);
}

TEST_CASE("plan diagnostics carry line numbers") {
  CHECK(ErrorOf("[plan]\nseeds = 0\n[federation]\nbogus = 1\n").find("line 4") !=
        std::string::npos);
  CHECK(ErrorOf("[plan]\n\nm = ten\n").find("line 3") != std::string::npos);
  CHECK(ErrorOf("[plan]\nm = ten\n").find("'m'") != std::string::npos);
  CHECK(ErrorOf("seeds = 1\n").find("line 1") != std::string::npos);
  CHECK(ErrorOf("[nope]\n").find("unknown section") != std::string::npos);
  CHECK(ErrorOf("[plan]\nseeds 1\n").find("key = value") != std::string::npos);
  CHECK(ErrorOf("[federation]\nobjective = ThreeFedOT\n").find("line 2") != std::string::npos);
  CHECK(ErrorOf("[plan]\nseeds = -1\n").find("line 2") != std::string::npos);
}

TEST_CASE("empty grid is a validation error") {
  CHECK(ErrorOf("[plan]\nseeds =\n").find("empty grid") != std::string::npos);
  CHECK(ErrorOf("[plan]\nmethods = ,\n").find("empty grid") != std::string::npos);
  // Invalid federation values surface through config validation.
  CHECK_FALSE(ErrorOf("[federation]\neta1 = -1\n").empty());
}

TEST_CASE("task data depends only on seed and m") {
  TaskSettings t;
  t.n = 3;
  t.d = 4;
  t.m_test = 20;
  const auto a = BuildTask(t, 15, 7);
  const auto b = BuildTask(t, 15, 7);
  const auto c = BuildTask(t, 15, 8);
  CHECK(a.train[2].features == b.train[2].features);
  CHECK(a.test[1].labels == b.test[1].labels);
  CHECK_FALSE(a.train[0].features == c.train[0].features);
  t.shift = shift::ShiftKind::kColor;
  const auto col = BuildTask(t, 15, 7);
  CHECK(col.train[0].dim() == 12);
  for (double v : col.train[0].features.values()) CHECK((v >= 0.0 && v <= 1.0));
}

TEST_CASE("number formatting round-trips") {
  CHECK(FormatDouble(0.1) == "0.1");
  CHECK(FormatDouble(1.0) == "1");
  CHECK(FormatDouble(-2.5e-10) == "-2.5e-10");
  CHECK(FormatDouble(0.0) == "0");
  RngStream rng(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::ldexp(rng.Uniform(-1.0, 1.0), static_cast<int>(rng.Below(200)) - 100);
    CHECK(std::strtod(FormatDouble(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("results CSV round trip and blank fields") {
  std::vector<ResultRow> rows(2);
  rows[0] = {"FedOT", 50, 5, 1, 1, false, 0, 0, 0, 0, 0, 0, 0, false, 0};
  rows[1] = {"FedOT", 50, 5, 1, 2, true, 0.75, 0.6, -0.1, 0.02, 0.48, 1e-17, 3.5, false, 12.5};
  std::ostringstream out;
  WriteResultsCsv(out, rows);
  CHECK(out.str() == std::string(kResultColumns) +
                         "\nFedOT,50,5,1,1,,,,,,,,0,0\n"
                         "FedOT,50,5,1,2,0.75,0.6,-0.1,0.02,0.48,1e-17,3.5,0,12.5\n");
  std::istringstream in(out.str());
  const auto back = ReadResultsCsv(in);
  REQUIRE(back.size() == 2);
  CHECK_FALSE(back[0].evaluated);
  CHECK(back[1].evaluated);
  CHECK(back[1].zero_sum_residual == 1e-17);
  CHECK(back[1].wall_ms == 12.5);

  std::istringstream bad_header("method,m\n");
  CHECK_THROWS_AS(ReadResultsCsv(bad_header), ValidationError);
  std::istringstream short_row(std::string(kResultColumns) + "\nFedOT,1,2\n");
  CHECK_THROWS_AS(ReadResultsCsv(short_row), ValidationError);
}

TEST_CASE("summary over seeds") {
  std::vector<ResultRow> rows;
  auto add = [&](const char* m, std::uint64_t seed, double acc, bool evaluated, bool div = false) {
    ResultRow r;
    r.method = m;
    r.m = 50;
    r.tau = 5;
    r.seed = seed;
    r.evaluated = evaluated;
    r.avg_test_acc = acc;
    r.diverged = div;
    rows.push_back(r);
  };
  add("FedOT", 0, 0.5, true);
  add("FedOT", 0, 0.8, true);  // final evaluated row wins
  add("FedOT", 0, 0.0, false);
  add("FedOT", 1, 0.9, true);
  add("FedAvg", 0, 0.7, true);
  add("FedAvg", 1, 0.6, true);
  add("FedAvg", 1, 0.0, false, true);
  const auto cells = Summarize(rows);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].method == "FedOT");
  CHECK(cells[0].num_seeds == 2);
  CHECK(cells[0].mean_acc == doctest::Approx(0.85).epsilon(1e-15));
  // Sample std of {0.8, 0.9}: sqrt(0.005).
  CHECK(cells[0].std_acc == doctest::Approx(std::sqrt(0.005)).epsilon(1e-12));
  CHECK(cells[1].num_diverged == 1);
  CHECK(cells[1].mean_acc == doctest::Approx(0.65).epsilon(1e-15));

  std::ostringstream table;
  WriteSummaryTable(table, cells);
  CHECK(table.str().find("| FedOT | 85.0 ± 7.1 |") != std::string::npos);
  std::ostringstream json;
  WriteSummaryJson(json, cells);
  CHECK(json.str().find("\"method\": \"FedAvg\"") != std::string::npos);
}

model::ParamBundle RandomBundle(RngStream& rng) {
  auto b = model::MakeBundle(model::ClassifierKind::kMlp, model::TransportKind::kRelu,
                             model::PotentialKind::kRelu, 3, 4, 2, rng, 5);
  for (auto* set : {&b.potential.shared, &b.potential.heads[1], &b.theta[2].params}) {
    for (auto& t : set->tensors)
      for (auto& v : t.values()) v = rng.Normal();
  }
  return b;
}

TEST_CASE("checkpoint round trip is bit exact") {
  RngStream rng(2, 0);
  const auto b = RandomBundle(rng);
  const auto tensors = FlattenBundle(b);
  std::set<std::string> names;
  for (const auto& t : tensors) names.insert(t.name);
  CHECK(names.size() == tensors.size());
  CHECK(names.count("w.W1"));
  CHECK(names.count("theta.2.Theta2"));
  CHECK(names.count("potential.shared.V1"));
  CHECK(names.count("potential.head.1.v2"));

  std::stringstream buf;
  WriteCheckpoint(buf, tensors);
  const auto back = ReadCheckpoint(buf);
  const auto restored = RestoreBundle(back, b);
  CHECK(restored.w.params == b.w.params);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(restored.theta[i].params == b.theta[i].params);
    CHECK(restored.potential.heads[i] == b.potential.heads[i]);
  }
  CHECK(restored.potential.shared == b.potential.shared);
}

TEST_CASE("checkpoint payload is little-endian float64") {
  std::ostringstream out;
  WriteCheckpoint(out, {{"x", Matrix(1, 2, 1.0)}});
  const std::string s = out.str();
  const std::string header = "FEDOTCKPT 1\n1\nx 1 2 0\nEND\n";
  REQUIRE(s.size() == header.size() + 16);
  CHECK(s.substr(0, header.size()) == header);
  // 1.0 = 0x3FF0000000000000
  const unsigned char one[8] = {0, 0, 0, 0, 0, 0, 0xf0, 0x3f};
  CHECK(std::memcmp(s.data() + header.size(), one, 8) == 0);
  CHECK(std::memcmp(s.data() + header.size() + 8, one, 8) == 0);
}

TEST_CASE("malformed checkpoints are rejected") {
  std::ostringstream out;
  WriteCheckpoint(out, {{"x", Matrix(2, 2, 3.0)}});
  const std::string good = out.str();
  auto read = [](const std::string& s) {
    std::istringstream in(s);
    return ReadCheckpoint(in);
  };
  CHECK(read(good).size() == 1);
  CHECK_THROWS_AS(read(good.substr(0, good.size() - 3)), ValidationError);
  CHECK_THROWS_AS(read("FEDOTCKPT 2\n" + good.substr(12)), ValidationError);
  CHECK_THROWS_AS(read(good + "x"), ValidationError);
  std::string bad_offset = good;
  bad_offset.replace(bad_offset.find("x 2 2 0"), 7, "x 2 2 1");
  CHECK_THROWS_AS(read(bad_offset), ValidationError);

  RngStream rng(3, 0);
  const auto b = RandomBundle(rng);
  auto tensors = FlattenBundle(b);
  tensors.pop_back();
  CHECK_THROWS_AS(RestoreBundle(tensors, b), ValidationError);
  tensors = FlattenBundle(b);
  tensors[0].value = Matrix(1, 1);
  CHECK_THROWS_AS(RestoreBundle(tensors, b), ValidationError);
}

TEST_CASE("gradient-check suite") {
  const auto rep = RunGradcheckSuite(0);
  CHECK(rep.ok());
  std::set<std::string> seen;
  for (const auto& b : rep.blocks) {
    CHECK(seen.insert(b.name).second);
    CHECK(b.points == 10);
    CHECK(b.max_rel_err <= kGradcheckTolerance);
  }
  CHECK(seen.size() == GradcheckBlockNames().size());
  CHECK(seen.size() == 11);
}

TEST_CASE("gradient-check fault injection is detected in every block") {
  for (const auto& name : GradcheckBlockNames()) {
    const auto rep = RunGradcheckSuite(0, name);
    CHECK_FALSE(rep.ok());
    for (const auto& b : rep.blocks) {
      CHECK((b.max_rel_err > kGradcheckTolerance) == (b.name == name));
    }
  }
  CHECK_THROWS_AS(RunGradcheckSuite(0, "no.such.block"), ArgumentError);
}

TEST_CASE("ot check on fixed instances") {
  // Identical triple: everything is zero.
  const auto p = ot::DiscreteDist::Normalized(Matrix(3, 1, {0.0, 0.4, 1.0}), {1, 2, 3});
  const auto same = RunOtCheck({p, p, p}, ot::CostKind::kW2);
  CHECK(std::abs(same.primal) <= 1e-12);
  CHECK(std::abs(same.barycenter) <= 1e-12);
  CHECK(std::abs(same.gap) <= 1e-12);
  CHECK(same.ok());

  // Diracs at 0 and 2, half squared distance: meeting point 1, cost 1/2 + 1/2.
  const double a[] = {0.0}, b[] = {2.0};
  const auto pair = RunOtCheck({ot::DiscreteDist::Dirac(a), ot::DiscreteDist::Dirac(b)},
                               ot::CostKind::kW2);
  CHECK(pair.primal == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pair.barycenter == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(pair.pushforward.has_value());
  CHECK(pair.pushforward_is_map);
  CHECK(*pair.pushforward <= 1e-12);
  CHECK(pair.ok());
}

TEST_CASE("ot check on random instances: the two solvers agree") {
  RngStream rng(4, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto dists = RandomInstance(3, 4, 2, rng);
    const auto rep = RunOtCheck(dists, ot::CostKind::kW2);
    CHECK(rep.primal_barycenter_diff() <= kOtValueTolerance);
    CHECK(rep.gap >= -1e-9);
    CHECK(rep.ok());
  }
  ot::NaryOptions tight;
  tight.max_joint_atoms = 10;
  CHECK_THROWS_AS(RunOtCheck(RandomInstance(2, 4, 1, rng), ot::CostKind::kW2, tight),
                  ResourceError);
}

TEST_CASE("monotone coupling map test") {
  const auto u3 = ot::DiscreteDist::Uniform(Matrix(3, 1, {0.0, 1.0, 5.0}));
  const auto v3 = ot::DiscreteDist::Uniform(Matrix(3, 1, {-2.0, 0.5, 0.7}));
  const auto u2 = ot::DiscreteDist::Uniform(Matrix(2, 1, {0.0, 1.0}));
  CHECK(MonotoneCouplingIsMap(u3, v3));
  CHECK_FALSE(MonotoneCouplingIsMap(u3, u2));
  const double z[] = {3.0};
  CHECK_FALSE(MonotoneCouplingIsMap(u3, ot::DiscreteDist::Dirac(z)));
  // Coincident atoms merge into one breakpoint.
  const auto dup = ot::DiscreteDist::Uniform(Matrix(4, 1, {0.0, 0.0, 1.0, 1.0}));
  CHECK(MonotoneCouplingIsMap(dup, u2));
}

TEST_CASE("exit codes") {
  CHECK(ExitCodeFor(ValidationError("x")) == 1);
  CHECK(ExitCodeFor(ArgumentError("x")) == 1);
  CHECK(ExitCodeFor(NumericalError("x")) == 2);
  CHECK(ExitCodeFor(ConstraintError("x")) == 2);
  CHECK(ExitCodeFor(ConvergenceError("x", 1.0)) == 2);
  CHECK(ExitCodeFor(ResourceError("x")) == 3);
}

TEST_CASE("plan execution: row count and byte-identical reruns") {
  const ExperimentPlan plan = Parse(kSmallPlan);
  std::ostringstream log;
  const auto rows = ExecutePlan(plan, false, "", log);
  CHECK(rows.size() == 2 * 2 * (40 / 5));
  std::ostringstream a, b;
  WriteResultsCsv(a, rows);
  WriteResultsCsv(b, ExecutePlan(plan, false, "", log));
  CHECK(a.str() == b.str());
  // wall_ms stays 0 without timing.
  for (const auto& r : rows) CHECK(r.wall_ms == 0.0);
  // Evaluated every 4 syncs and at the last one.
  std::size_t evaluated = 0;
  for (const auto& r : rows) evaluated += r.evaluated;
  CHECK(evaluated == 4 * 2);
}

TEST_CASE("run command writes results and reports plan errors") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fedotlab_expctl_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "bad.plan");
    f << "[plan]\nseeds = 0\n[task]\nd = four\n";
  }
  std::ostringstream out, err;
  CHECK(CmdRun({(dir / "bad.plan").string(), (dir / "o").string(), false}, out, err) == 1);
  CHECK(err.str().find("line 4") != std::string::npos);

  {
    std::ofstream f(dir / "good.plan");
    f << kSmallPlan;
  }
  err.str("");
  CHECK(CmdRun({(dir / "good.plan").string(), (dir / "o").string(), true}, out, err) == 0);
  CHECK(fs::exists(dir / "o" / "results.csv"));
  CHECK(fs::exists(dir / "o" / "summary.json"));
  CHECK(fs::exists(dir / "o" / "checkpoints" / "FedAvg_m30_tau5_seed4.ckpt"));
  std::ostringstream rep;
  CHECK(CmdReport((dir / "o" / "results.csv").string(), rep, err) == 0);
  CHECK(rep.str().find("32 rows") != std::string::npos);
  CHECK(CmdReport((dir / "missing.csv").string(), rep, err) == 1);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace fedotlab::exp
