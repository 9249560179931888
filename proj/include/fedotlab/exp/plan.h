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

#ifndef FEDOTLAB_EXP_PLAN_H_
#define FEDOTLAB_EXP_PLAN_H_

// Experiment plan files: `[section]` headers and `key = value` lines, `#`
// comments. Grid keys take comma-separated lists.
//
//   [plan]       output_dir, seeds, methods, m, tau, timing
//   [task]       shift (affine|color), n, d, classes, separation, noise,
//                sigma, m_test
//   [federation] T, eta1, eta2, objective (OneFedOT|TwoFedOTReg), lambda,
//                gamma, keep_psi_norm_term, batch, k, avg_mode, classifier
//                (linear|mlp), transport (affine|relu), potential
//                (quadratic|relu), hidden, freeze_transport, finetune_steps,
//                proxy_burst, proxy_eta, eval_every, threads

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "fedotlab/shift/shift_gen.h"
#include "fedotlab/sim/fed_sim.h"

namespace fedotlab::exp {

struct TaskSettings {
  shift::ShiftKind shift = shift::ShiftKind::kAffine;
  std::size_t n = 20;
  std::size_t d = 10;
  std::size_t num_classes = 3;
  double separation = 2.0;
  double noise = 0.3;
  double sigma = 1.0;
  std::size_t m_test = 500;
};

struct PlanEntry {
  sim::FederationConfig config;
  std::size_t m = 0;
};

struct ExperimentPlan {
  std::string output_dir = "fedotlab_out";
  std::vector<std::uint64_t> seeds{0};
  std::vector<sim::Method> methods{sim::Method::kFedOT};
  std::vector<std::size_t> ms{100};
  std::vector<std::size_t> taus{5};
  bool timing = false;  // wall_ms is written as 0 unless set
  TaskSettings task;
  sim::FederationConfig base;

  // method x m x tau x seed, seeds varying fastest.
  std::vector<PlanEntry> Expand() const;
  void Validate() const;
};

// Throws ValidationError with "line N" context.
ExperimentPlan ParsePlan(std::istream& in);
ExperimentPlan LoadPlan(const std::string& path);

// Data for one seed and m. Drawn from RngStream::Named(seed, "data"), so it
// does not depend on method, tau or stepsizes.
shift::FederatedTask BuildTask(const TaskSettings& task, std::size_t m, std::uint64_t seed);

}  // namespace fedotlab::exp

#endif  // FEDOTLAB_EXP_PLAN_H_
