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

#include "fedotlab/exp/commands.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "fedotlab/errors.h"
#include "fedotlab/exp/checkpoint.h"
#include "fedotlab/exp/gradcheck_suite.h"
#include "fedotlab/exp/ot_check.h"

namespace fedotlab::exp {
namespace {

namespace fs = std::filesystem;

std::string Fixed(double x, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("output directory is not writable: cannot create " + path.string());
  f << content;
  if (!f) throw ValidationError("write failed for " + path.string());
}

template <typename F>
int Guard(std::ostream& err, F body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e);
  }
}

}  // namespace

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const ResourceError*>(&e)) return kExitResource;
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ArgumentError*>(&e)) {
    return kExitValidation;
  }
  return kExitNumerical;
}

std::vector<ResultRow> ExecutePlan(const ExperimentPlan& plan, bool write_checkpoints,
                                   const std::string& output_dir, std::ostream& log) {
  plan.Validate();
  std::map<std::pair<std::uint64_t, std::size_t>, shift::FederatedTask> tasks;
  std::vector<ResultRow> rows;
  const auto entries = plan.Expand();
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const PlanEntry& entry = entries[e];
    const auto& cfg = entry.config;
    const auto key = std::make_pair(cfg.seed, entry.m);
    auto it = tasks.find(key);
    if (it == tasks.end()) it = tasks.emplace(key, BuildTask(plan.task, entry.m, cfg.seed)).first;

    std::vector<double> wall;
    const auto start = std::chrono::steady_clock::now();
    sim::SyncObserver observer;
    if (plan.timing) {
      observer = [&](const sim::RoundMetrics&, const std::vector<sim::ClientState>&) {
        wall.push_back(std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start).count());
      };
    }
    const sim::RunResult res = sim::RunMethod(cfg, it->second, observer);
    for (std::size_t r = 0; r < res.history.size(); ++r) {
      const double ms = plan.timing && r < wall.size() ? wall[r] : 0.0;
      rows.push_back(RowFromMetrics(cfg, res.history[r], ms));
    }
    log << "[" << e + 1 << "/" << entries.size() << "] " << sim::MethodName(cfg.method)
        << " m=" << cfg.m << " tau=" << cfg.tau << " seed=" << cfg.seed;
    if (res.diverged) {
      log << " diverged at round " << res.history.back().round << '\n';
    } else {
      log << " acc=" << Fixed(res.history.empty() ? 0.0 : res.history.back().avg_test_acc, 4)
          << '\n';
    }
    if (write_checkpoints) {
      const fs::path dir = fs::path(output_dir) / "checkpoints";
      fs::create_directories(dir);
      const std::string name = std::string(sim::MethodName(cfg.method)) + "_m" +
                               std::to_string(cfg.m) + "_tau" + std::to_string(cfg.tau) +
                               "_seed" + std::to_string(cfg.seed) + ".ckpt";
      SaveCheckpoint((dir / name).string(), sim::AssembleBundle(res.clients, cfg.potential));
    }
  }
  return rows;
}

int CmdRun(const RunArgs& args, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const ExperimentPlan plan = LoadPlan(args.plan_path);
    const std::string dir = args.output_dir.value_or(plan.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
      throw ValidationError("output directory '" + dir + "' cannot be created");
    }
    const auto rows = ExecutePlan(plan, args.checkpoint, dir, err);
    std::ostringstream csv, table, json;
    WriteResultsCsv(csv, rows);
    const auto cells = Summarize(rows);
    WriteSummaryTable(table, cells);
    WriteSummaryJson(json, cells);
    WriteFile(fs::path(dir) / "results.csv", csv.str());
    WriteFile(fs::path(dir) / "summary.md", table.str());
    WriteFile(fs::path(dir) / "summary.json", json.str());
    out << table.str();
    out << rows.size() << " rows written to " << (fs::path(dir) / "results.csv").string() << '\n';
    return static_cast<int>(kExitOk);
  });
}

int CmdOtCheck(const OtCheckArgs& args, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const ot::CostKind cost = ot::ParseCostKind(args.cost);
    std::vector<ot::DiscreteDist> dists;
    if (args.random) {
      if (!args.files.empty()) throw ArgumentError("ot-check: give files or --random, not both");
      if (args.random->size() != 3) throw ArgumentError("ot-check: --random takes n k d");
      numkit::RngStream rng = numkit::RngStream::Named(args.seed, "ot-check");
      dists = RandomInstance((*args.random)[0], (*args.random)[1], (*args.random)[2], rng);
    } else {
      for (const auto& f : args.files) dists.push_back(ot::LoadDiscreteDist(f));
    }
    ot::NaryOptions options;
    options.max_joint_atoms = args.max_joint_atoms;
    const OtCheckReport rep = RunOtCheck(dists, cost, options);
    out << "n              " << rep.n << '\n'
        << "cost           " << ot::CostKindName(cost) << '\n'
        << "primal         " << Fixed(rep.primal, 12) << '\n'
        << "barycenter     " << Fixed(rep.barycenter, 12) << '\n'
        << "|primal - bary| " << Fixed(rep.primal_barycenter_diff(), 3) << "  (tol "
        << Fixed(kOtValueTolerance, 3) << ")\n"
        << "best_dual      " << Fixed(rep.best_dual, 12) << '\n'
        << "duality_gap    " << Fixed(rep.gap, 3) << "  (tol " << Fixed(kOtValueTolerance, 3)
        << ")\n"
        << "dual_violation " << Fixed(rep.dual_violation, 3) << '\n'
        << "pushforward    "
        << (!rep.pushforward ? std::string("n/a (n = 2, 1-D, W2 only)")
            : rep.pushforward_is_map
                ? Fixed(*rep.pushforward, 6) + "  (tol " + Fixed(kPushforwardTolerance, 3) + ")"
                : Fixed(*rep.pushforward, 6) + "  (not checked: monotone coupling splits mass)")
        << '\n'
        << (rep.ok() ? "OK" : "FAIL") << '\n';
    return static_cast<int>(rep.ok() ? kExitOk : kExitNumerical);
  });
}

int CmdGradcheck(const GradcheckArgs& args, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const GradcheckReport rep = RunGradcheckSuite(args.seed, args.inject_fault);
    for (const auto& b : rep.blocks) {
      char line[160];
      std::snprintf(line, sizeof line, "%-20s max_rel_err %.3e  points %zu  resampled %zu  %s\n",
                    b.name.c_str(), b.max_rel_err, b.points, b.resampled,
                    b.max_rel_err <= kGradcheckTolerance ? "ok" : "FAIL");
      out << line;
    }
    out << (rep.ok() ? "OK" : "FAIL") << '\n';
    return static_cast<int>(rep.ok() ? kExitOk : kExitNumerical);
  });
}

int CmdReport(const std::string& path, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::string first;
    std::getline(in, first);
    in.seekg(0);
    if (first.rfind("FEDOTCKPT", 0) == 0) {
      for (const auto& t : ReadCheckpoint(in)) {
        double ss = 0.0;
        for (double v : t.value.values()) ss += v * v;
        out << t.name << ' ' << t.value.rows() << 'x' << t.value.cols() << " norm "
            << Fixed(std::sqrt(ss), 6) << '\n';
      }
      return static_cast<int>(kExitOk);
    }
    const auto rows = ReadResultsCsv(in);
    WriteSummaryTable(out, Summarize(rows));
    std::size_t flagged = 0;
    for (const auto& r : rows) flagged += r.diverged ? 1 : 0;
    out << rows.size() << " rows, " << flagged << " flagged diverged\n";
    return static_cast<int>(kExitOk);
  });
}

}  // namespace fedotlab::exp
