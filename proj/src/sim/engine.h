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

#ifndef FEDOTLAB_SRC_SIM_ENGINE_H_
#define FEDOTLAB_SRC_SIM_ENGINE_H_

// Round loop shared by FedOT and the comparison methods.

#include <functional>
#include <utility>
#include <vector>

#include "fedotlab/sim/fed_sim.h"

namespace fedotlab::sim::internal {

struct Hooks {
  // One local iteration for client i.
  std::function<void(std::size_t i, ClientState& st)> local_step;
  // Aggregation then projection, run by the coordinator.
  std::function<void(std::vector<ClientState>& clients)> sync;
  // Runs once before the metrics of the last round.
  std::function<void(std::vector<ClientState>& clients)> finalize;
  // Classifier and map used to score client i.
  std::function<std::pair<model::Classifier, model::Transport>(std::size_t i,
                                                               const ClientState& st)>
      eval_model;
  loss::ObjectiveSpec metric_objective;
  bool carries_potential = false;
  bool trains_transport = false;
  bool syncs = true;
};

std::vector<ClientState> InitClients(const FederationConfig& config,
                                     const shift::FederatedTask& task);
loss::ClientView ViewOf(const ClientState& st, model::PotentialKind kind);
loss::ClientGrads GradsAt(const loss::ObjectiveSpec& spec, const ClientState& st,
                          model::PotentialKind kind, const shift::ClientDataset& data,
                          std::span<const std::size_t> rows);
RunResult RunLoop(const FederationConfig& config, const shift::FederatedTask& task,
                  const Hooks& hooks, const SyncObserver& observer);

}  // namespace fedotlab::sim::internal

#endif  // FEDOTLAB_SRC_SIM_ENGINE_H_
