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

#include "fedotlab/loss/fedot_loss.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fedotlab/errors.h"
#include "fedotlab/numkit/linalg.h"

namespace fedotlab::loss {
namespace {

constexpr double kFeasibilityTol = 1e-8;

double ScaleFor(double norm, double cap) { return norm > cap ? cap / norm : 1.0; }

// Norm of the linear part of a head: v1 (quadratic) or v2 (ReLU).
double LinearHeadNorm(model::PotentialKind kind, const ParamSet& head) {
  return numkit::Norm(head.tensors[kind == model::PotentialKind::kQuadratic ? 1 : 0].values());
}

}  // namespace

void ObjectiveSpec::Validate() const {
  if (!(lambda >= 0.0)) throw ValidationError("objective: lambda must be >= 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError("objective: gamma must lie in [0,1)");
}

ClientGrads ClientGrads::ZerosFor(const ClientView& view) {
  return {view.w.params.ZerosLike(), view.theta.params.ZerosLike(), view.shared.ZerosLike(),
          view.head.ZerosLike()};
}

ClientLossReport ClientLossOnView(const ObjectiveSpec& spec, const ClientView& view,
                                  const shift::ClientDataset& data,
                                  std::span<const std::size_t> rows, ClientGrads* grads) {
  std::vector<std::size_t> all;
  if (rows.empty()) {
    all.resize(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    rows = all;
  }
  if (rows.empty()) throw ArgumentError("client loss: empty batch");
  const double inv_b = 1.0 / static_cast<double>(rows.size());
  const bool dual_on = spec.lambda != 0.0;
  ClientLossReport rep;
  std::vector<double> dlogits, dpsi, dphi;
  for (std::size_t r : rows) {
    const auto x = data.features.row(r);
    const auto psi = model::TransportForward(view.theta, x);
    const auto logits = model::ClassifierForward(view.w, psi);
    rep.classification_term += model::CrossEntropy(logits, data.labels[r], &dlogits);
    double dual = 0.0;
    if (dual_on) {
      dual = model::PotentialForward(view.kind, view.shared, view.head, psi);
      if (spec.keep_psi_norm_term) dual += 0.5 * numkit::SquaredNorm(psi);
    }
    rep.transport_dual_term += dual;
    if (grads == nullptr) continue;
    for (auto& g : dlogits) g *= inv_b;
    model::ClassifierBackward(view.w, psi, dlogits, &grads->w, &dpsi);
    if (dual_on) {
      const double s = spec.lambda * inv_b;
      model::PotentialBackward(view.kind, view.shared, view.head, psi, s, &grads->shared,
                               &grads->head, &dphi);
      for (std::size_t k = 0; k < dpsi.size(); ++k) {
        dpsi[k] += dphi[k];
        if (spec.keep_psi_norm_term) dpsi[k] += s * psi[k];
      }
    }
    model::TransportBackward(view.theta, x, dpsi, &grads->theta, nullptr);
  }
  rep.classification_term *= inv_b;
  rep.transport_dual_term *= inv_b;
  if (spec.kind == ObjectiveKind::kTwoFedOTReg && dual_on) {
    const double coef = spec.lambda / (1.0 - spec.gamma);
    rep.reg_term = coef * (view.head.SquaredNorm() + view.shared.SquaredNorm());
    if (grads != nullptr) {
      grads->head.Axpy(-2.0 * coef, view.head);
      grads->shared.Axpy(-2.0 * coef, view.shared);
    }
  }
  rep.total = rep.classification_term + spec.lambda * rep.transport_dual_term - rep.reg_term;
  return rep;
}

ClientLossReport ClientLoss(const ObjectiveSpec& spec, const model::ParamBundle& bundle,
                            std::size_t i, const shift::ClientDataset& data,
                            std::span<const std::size_t> rows, ClientGrads* grads) {
  spec.Validate();
  if (i >= bundle.num_clients()) throw ArgumentError("client loss: client index out of range");
  const double residual = model::ZeroSumResidual(bundle.potential);
  if (residual > kFeasibilityTol) {
    throw ConstraintError("client loss: zero-sum residual " + std::to_string(residual) +
                          " exceeds 1e-8");
  }
  const ClientView view{bundle.w, bundle.theta[i], bundle.potential.kind, bundle.potential.shared,
                        bundle.potential.heads[i]};
  return ClientLossOnView(spec, view, data, rows, grads);
}

double GlobalObjective(const ObjectiveSpec& spec, const model::ParamBundle& bundle,
                       std::span<const shift::ClientDataset> train) {
  if (train.size() != bundle.num_clients()) throw ArgumentError("global objective: client count");
  double sum = 0.0;
  for (std::size_t i = 0; i < train.size(); ++i) sum += ClientLoss(spec, bundle, i, train[i]).total;
  return sum / static_cast<double>(train.size());
}

void ProjectZeroSumInPlace(model::Potential& p) {
  if (p.heads.empty()) return;
  // mean = h_0 + (1/n) sum_k (h_k - h_0): equal heads give exactly h_0.
  const double inv_n = 1.0 / static_cast<double>(p.heads.size());
  ParamSet mean = p.heads[0];
  for (std::size_t t = 0; t < mean.tensors.size(); ++t) {
    auto out = mean.tensors[t].values();
    for (std::size_t j = 0; j < out.size(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 1; k < p.heads.size(); ++k) acc += p.heads[k].tensors[t][j] - out[j];
      out[j] += acc * inv_n;
    }
  }
  for (auto& h : p.heads) h.Axpy(-1.0, mean);
}

model::Potential ProjectZeroSum(model::Potential p) {
  ProjectZeroSumInPlace(p);
  return p;
}

void ProjectSpectralInPlace(model::Potential& p, double cap) {
  if (!(cap > 0.0)) throw ArgumentError("spectral projection: cap must be > 0");
  if (p.kind == model::PotentialKind::kRelu) {
    auto& v1 = p.shared.tensors[0];
    v1.Scale(ScaleFor(numkit::SpectralNorm(v1), cap));
    return;
  }
  double factor = 1.0;
  for (const auto& h : p.heads) factor = std::min(factor, ScaleFor(numkit::SpectralNorm(h.tensors[0]), cap));
  if (factor < 1.0) {
    for (auto& h : p.heads) h.tensors[0].Scale(factor);
  }
}

model::Potential ProjectSpectral(model::Potential p, double cap) {
  ProjectSpectralInPlace(p, cap);
  return p;
}

void ProjectLipschitzLocal(model::PotentialKind kind, ParamSet& shared, ParamSet& head) {
  if (kind == model::PotentialKind::kRelu) {
    shared.tensors[0].Scale(ScaleFor(numkit::SpectralNorm(shared.tensors[0]), 1.0));
    head.tensors[0].Scale(ScaleFor(LinearHeadNorm(kind, head), 1.0));
    return;
  }
  head.tensors[0].Scale(ScaleFor(numkit::SpectralNorm(head.tensors[0]), 1.0));
  head.tensors[1].Scale(ScaleFor(LinearHeadNorm(kind, head), 1.0));
}

void ProjectLipschitz(model::Potential& p) {
  ProjectSpectralInPlace(p, 1.0);
  double worst = 0.0;
  for (const auto& h : p.heads) worst = std::max(worst, LinearHeadNorm(p.kind, h));
  const double factor = ScaleFor(worst, 1.0);
  if (factor < 1.0) {
    const std::size_t k = p.kind == model::PotentialKind::kQuadratic ? 1 : 0;
    for (auto& h : p.heads) h.tensors[k].Scale(factor);
  }
}

}  // namespace fedotlab::loss
