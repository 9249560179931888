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

#ifndef FEDOTLAB_EXP_COMMANDS_H_
#define FEDOTLAB_EXP_COMMANDS_H_

// Handlers behind the `fedotlab` subcommands. Each returns a process exit
// code: 0 ok, 1 validation or argument error, 2 numerical check failure
// (also numerical, convergence and constraint errors), 3 resource cap.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fedotlab/exp/plan.h"
#include "fedotlab/exp/results.h"

namespace fedotlab::exp {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNumerical = 2,
  kExitResource = 3,
};

int ExitCodeFor(const std::exception& e);

// Runs every grid entry in plan order. Rows are returned in the same order.
// Divergent configs are flagged in their rows and the plan continues.
std::vector<ResultRow> ExecutePlan(const ExperimentPlan& plan, bool write_checkpoints,
                                   const std::string& output_dir, std::ostream& log);

struct RunArgs {
  std::string plan_path;
  std::optional<std::string> output_dir;  // overrides [plan] output_dir
  bool checkpoint = false;
};
// Writes <out>/results.csv, summary.md and summary.json (and
// checkpoints/<method>_m<m>_tau<tau>_seed<seed>.ckpt with --checkpoint).
int CmdRun(const RunArgs& args, std::ostream& out, std::ostream& err);

struct OtCheckArgs {
  std::vector<std::string> files;
  std::optional<std::vector<std::size_t>> random;  // n k d
  std::string cost = "W2";
  std::uint64_t seed = 0;
  std::size_t max_joint_atoms = 10000;
};
int CmdOtCheck(const OtCheckArgs& args, std::ostream& out, std::ostream& err);

struct GradcheckArgs {
  std::string inject_fault;
  std::uint64_t seed = 0;
};
int CmdGradcheck(const GradcheckArgs& args, std::ostream& out, std::ostream& err);

// A results CSV (prints the summary table) or a checkpoint (lists tensors).
int CmdReport(const std::string& path, std::ostream& out, std::ostream& err);

}  // namespace fedotlab::exp

#endif  // FEDOTLAB_EXP_COMMANDS_H_
