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

#ifndef FEDOTLAB_LOSS_FEDOT_LOSS_H_
#define FEDOTLAB_LOSS_FEDOT_LOSS_H_

// Per-client FedOT minimax objectives and the feasibility projections for the
// potential heads.

#include <cstddef>
#include <span>
#include <vector>

#include "fedotlab/model/model_zoo.h"
#include "fedotlab/shift/shift_gen.h"

namespace fedotlab::loss {

using model::ParamSet;

enum class ObjectiveKind {
  kOneFedOT,     // potentials kept inside the 1-Lipschitz set by projection
  kTwoFedOTReg,  // L2-penalized lower bound with smoothness parameter gamma
};

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::kTwoFedOTReg;
  double lambda = 1.0;
  double gamma = 0.5;
  // Adds lambda * 1/2 |psi(x)|^2 to the dual term.
  bool keep_psi_norm_term = false;

  void Validate() const;
};

struct ClientLossReport {
  double classification_term = 0.0;  // mean cross-entropy
  double transport_dual_term = 0.0;  // mean phi_i(psi_i(x)), unscaled
  double reg_term = 0.0;             // lambda / (1 - gamma) (|v_i|^2 + |U|^2)
  double total = 0.0;                // classification + lambda * dual - reg
};

// One client's slice of the parameters.
struct ClientView {
  const model::Classifier& w;
  const model::Transport& theta;
  model::PotentialKind kind;
  const ParamSet& shared;  // U
  const ParamSet& head;    // v_i
};

// Gradients of `total` for each block.
struct ClientGrads {
  ParamSet w;
  ParamSet theta;
  ParamSet shared;
  ParamSet head;

  static ClientGrads ZerosFor(const ClientView& view);
};

// Loss over the rows `rows` of `data` (all rows when empty). Accumulates
// gradients into *grads when given. Does not check zero-sum feasibility.
ClientLossReport ClientLossOnView(const ObjectiveSpec& spec, const ClientView& view,
                                  const shift::ClientDataset& data,
                                  std::span<const std::size_t> rows, ClientGrads* grads);

// Bundle-level loss for client i. Throws ConstraintError when the heads'
// zero-sum residual exceeds 1e-8.
ClientLossReport ClientLoss(const ObjectiveSpec& spec, const model::ParamBundle& bundle,
                            std::size_t i, const shift::ClientDataset& data,
                            std::span<const std::size_t> rows = {}, ClientGrads* grads = nullptr);

// Mean of the per-client totals over each client's full training set.
double GlobalObjective(const ObjectiveSpec& spec, const model::ParamBundle& bundle,
                       std::span<const shift::ClientDataset> train);

// Subtracts the across-client mean from every head tensor.
void ProjectZeroSumInPlace(model::Potential& p);
model::Potential ProjectZeroSum(model::Potential p);

// Scales V1 (ReLU family) or all V_i jointly (quadratic family, so the zero sum
// survives) until every spectral norm is at most `cap`.
void ProjectSpectralInPlace(model::Potential& p, double cap);
model::Potential ProjectSpectral(model::Potential p, double cap);

// 1-Lipschitz set of the one-FedOT objective on a single client slice:
// spectral cap 1 on V1 (or V_i) and unit norm on the linear head.
void ProjectLipschitzLocal(model::PotentialKind kind, ParamSet& shared, ParamSet& head);
// Same set for the whole potential; heads are scaled by one common factor.
void ProjectLipschitz(model::Potential& p);

}  // namespace fedotlab::loss

#endif  // FEDOTLAB_LOSS_FEDOT_LOSS_H_
