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

#include <memory>
#include <utility>

#include "engine.h"
#include "fedotlab/errors.h"

namespace fedotlab::sim {
namespace {

// Cross-entropy only; the potential arguments are never read.
const loss::ObjectiveSpec kPlain{loss::ObjectiveKind::kTwoFedOTReg, 0.0, 0.5, false};

ParamSet WGrad(const model::Classifier& w, const model::Transport& theta,
               const shift::ClientDataset& data, std::span<const std::size_t> rows) {
  const ParamSet none;
  const loss::ClientView v{w, theta, model::PotentialKind::kQuadratic, none, none};
  loss::ClientGrads g = loss::ClientGrads::ZerosFor(v);
  loss::ClientLossOnView(kPlain, v, data, rows, &g);
  return std::move(g.w);
}

model::Classifier Midpoint(const model::Classifier& a, const model::Classifier& b) {
  model::Classifier out = a;
  out.params.Scale(0.5).Axpy(0.5, b.params);
  return out;
}

}  // namespace

RunResult RunBaseline(const FederationConfig& config, const shift::FederatedTask& task,
                      const SyncObserver& observer) {
  const Method method = config.method;
  if (method == Method::kFedOT) throw ArgumentError("RunBaseline: FedOT is not a baseline");
  internal::Hooks h;
  h.metric_objective = kPlain;
  h.syncs = method != Method::kLocalOnly;
  const double eta = config.eta1;

  h.local_step = [&](std::size_t i, ClientState& st) {
    const auto& data = task.train[i];
    const auto rows = st.sampler.Next(config.batch);
    if (method == Method::kFedFOMAML) {
      // Inner step on the first half, outer first-order step on the second.
      const std::size_t half = rows.size() / 2;
      model::Classifier adapted = st.w;
      adapted.params.Axpy(-eta, WGrad(st.w, st.theta, data, rows.first(half)));
      st.w.params.Axpy(-eta, WGrad(adapted, st.theta, data, rows.subspan(half)));
      return;
    }
    if (method == Method::kFedMI) {
      st.local_w.params.Axpy(-eta, WGrad(st.local_w, st.theta, data, rows));
    }
    st.w.params.Axpy(-eta, WGrad(st.w, st.theta, data, rows));
  };

  h.sync = [](std::vector<ClientState>& clients) {
    std::vector<ParamSet*> ws;
    for (auto& c : clients) ws.push_back(&c.w.params);
    AverageInPlace(ws);
  };

  // L-FedAvg reports the shared model until the last round, then the
  // fine-tuned private copies.
  auto finalized = std::make_shared<bool>(false);
  if (method == Method::kLFedAvg) {
    h.finalize = [&, finalized](std::vector<ClientState>& clients) {
      for (std::size_t i = 0; i < clients.size(); ++i) {
        auto& st = clients[i];
        st.local_w = st.w;
        for (std::size_t s = 0; s < config.finetune_steps; ++s) {
          const auto rows = st.sampler.Next(config.batch);
          st.local_w.params.Axpy(-eta, WGrad(st.local_w, st.theta, task.train[i], rows));
        }
      }
      *finalized = true;
    };
  }

  h.eval_model = [&, finalized](std::size_t i, const ClientState& st) {
    switch (method) {
      case Method::kFedMI:
        return std::make_pair(Midpoint(st.w, st.local_w), st.theta);
      case Method::kFedFOMAML: {
        model::Classifier adapted = st.w;
        adapted.params.Axpy(-eta, WGrad(st.w, st.theta, task.train[i], {}));
        return std::make_pair(std::move(adapted), st.theta);
      }
      case Method::kLFedAvg:
        return std::make_pair(*finalized ? st.local_w : st.w, st.theta);
      default:
        return std::make_pair(st.w, st.theta);
    }
  };
  return internal::RunLoop(config, task, h, observer);
}

PooledResult TrainPooled(const FederationConfig& config, std::span<const shift::ClientDataset> train,
                         std::span<const shift::ClientDataset> test, std::size_t steps) {
  if (train.empty()) throw ArgumentError("TrainPooled: no data");
  shift::ClientDataset pooled;
  pooled.num_classes = train[0].num_classes;
  std::size_t total = 0;
  for (const auto& ds : train) total += ds.size();
  const std::size_t d = train[0].dim();
  pooled.features = numkit::Matrix(total, d);
  std::size_t r = 0;
  for (const auto& ds : train) {
    for (std::size_t j = 0; j < ds.size(); ++j, ++r) {
      std::copy(ds.features.row(j).begin(), ds.features.row(j).end(), pooled.features.row(r).begin());
      pooled.labels.push_back(ds.labels[j]);
    }
  }
  numkit::RngStream init = numkit::RngStream::Named(config.seed, "pooled-init");
  PooledResult out;
  out.w = model::MakeClassifier(config.classifier, pooled.num_classes, d, config.hidden, init);
  const model::Transport id = model::MakeIdentityTransport(model::TransportKind::kAffine, d);
  MinibatchSampler sampler(total, numkit::RngStream::Named(config.seed, "pooled-train"));
  for (std::size_t s = 0; s < steps; ++s) {
    out.w.params.Axpy(-config.eta1, WGrad(out.w, id, pooled, sampler.Next(config.batch)));
  }
  for (const auto& ds : test) out.avg_test_acc += Accuracy(out.w, id, ds) / test.size();
  return out;
}

}  // namespace fedotlab::sim
