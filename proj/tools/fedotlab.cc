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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fedotlab/exp/commands.h"

int main(int argc, char** argv) {
  namespace ex = fedotlab::exp;
  CLI::App app{"fedotlab: federated OT experiments and verification"};
  app.require_subcommand(1);

  ex::RunArgs run;
  std::string output_dir;
  auto* run_cmd = app.add_subcommand("run", "execute an experiment plan");
  run_cmd->add_option("plan", run.plan_path, "plan file")->required();
  run_cmd->add_option("--output-dir", output_dir, "override [plan] output_dir");
  run_cmd->add_flag("--checkpoint", run.checkpoint, "write final parameters per config");

  ex::OtCheckArgs ot;
  std::vector<std::size_t> random;
  auto* ot_cmd = app.add_subcommand("ot-check", "verify primal, barycenter, dual and pushforward");
  ot_cmd->add_option("files", ot.files, "distribution files (header 'd k', rows coords + weight)");
  ot_cmd->add_option("--random", random, "random instance: n k d")->expected(3);
  ot_cmd->add_option("--cost", ot.cost, "W1 or W2")->capture_default_str();
  ot_cmd->add_option("--seed", ot.seed, "seed for --random")->capture_default_str();
  ot_cmd->add_option("--max-joint-atoms", ot.max_joint_atoms, "joint coupling size cap")
      ->capture_default_str();

  ex::GradcheckArgs gc;
  auto* gc_cmd = app.add_subcommand("gradcheck", "finite-difference check of every gradient block");
  gc_cmd->add_option("--inject-fault", gc.inject_fault, "perturb one block's analytic gradient");
  gc_cmd->add_option("--seed", gc.seed)->capture_default_str();

  std::string report_path;
  auto* report_cmd = app.add_subcommand("report", "summarize a results CSV or list a checkpoint");
  report_cmd->add_option("path", report_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ex::kExitValidation;
  }

  if (*run_cmd) {
    if (!output_dir.empty()) run.output_dir = output_dir;
    return ex::CmdRun(run, std::cout, std::cerr);
  }
  if (*ot_cmd) {
    if (!random.empty()) ot.random = random;
    if (ot.files.empty() && !ot.random) {
      std::cerr << "error: ot-check needs distribution files or --random n k d\n";
      return ex::kExitValidation;
    }
    return ex::CmdOtCheck(ot, std::cout, std::cerr);
  }
  if (*gc_cmd) return ex::CmdGradcheck(gc, std::cout, std::cerr);
  return ex::CmdReport(report_path, std::cout, std::cerr);
}
