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

#include "fedotlab/sim/fed_sim.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <thread>

#include "engine.h"
#include "fedotlab/errors.h"

namespace fedotlab::sim {
namespace {

constexpr double kDivergenceNorm = 1e8;

void ParallelFor(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    // Static striding: worker t owns clients t, t + threads, ...
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += threads) run(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double MaxNorm(const std::vector<ClientState>& clients) {
  double worst = 0.0;
  for (const auto& c : clients) {
    for (const ParamSet* p : {&c.w.params, &c.theta.params, &c.shared, &c.head, &c.local_w.params}) {
      const double nrm = std::sqrt(p->SquaredNorm());
      if (!std::isfinite(nrm)) return nrm;
      worst = std::max(worst, nrm);
    }
  }
  return worst;
}

bool SharedEqual(const std::vector<ClientState>& clients) {
  for (const auto& c : clients) {
    if (!(c.w.params == clients[0].w.params) || !(c.shared == clients[0].shared)) return false;
  }
  return true;
}

double HeadResidual(const std::vector<ClientState>& clients, model::PotentialKind kind) {
  model::Potential p{kind, {}, {}};
  for (const auto& c : clients) p.heads.push_back(c.head);
  return model::ZeroSumResidual(p);
}

void UpdateHeads(std::vector<ClientState>& clients, model::PotentialKind kind,
                 loss::ObjectiveKind objective) {
  model::Potential p{kind, clients[0].shared, {}};
  for (const auto& c : clients) p.heads.push_back(c.head);
  loss::ProjectZeroSumInPlace(p);
  if (objective == loss::ObjectiveKind::kOneFedOT) loss::ProjectLipschitz(p);
  for (std::size_t i = 0; i < clients.size(); ++i) {
    clients[i].head = std::move(p.heads[i]);
    clients[i].shared = p.shared;
  }
}

}  // namespace

const char* MethodName(Method m) {
  switch (m) {
    case Method::kFedOT: return "FedOT";
    case Method::kFedAvg: return "FedAvg";
    case Method::kLFedAvg: return "LFedAvg";
    case Method::kFedMI: return "FedMI";
    case Method::kFedFOMAML: return "FedFOMAML";
    case Method::kLocalOnly: return "LocalOnly";
  }
  return "?";
}

Method ParseMethod(const std::string& name) {
  for (Method m : {Method::kFedOT, Method::kFedAvg, Method::kLFedAvg, Method::kFedMI,
                   Method::kFedFOMAML, Method::kLocalOnly}) {
    if (name == MethodName(m)) return m;
  }
  throw ValidationError("unknown method '" + name + "'");
}

const char* AvgModeName(AvgMode m) {
  return m == AvgMode::kLiteralAll ? "LiteralAll" : "PartialPersonalized";
}

AvgMode ParseAvgMode(const std::string& name) {
  if (name == "LiteralAll") return AvgMode::kLiteralAll;
  if (name == "PartialPersonalized") return AvgMode::kPartialPersonalized;
  throw ValidationError("unknown avg_mode '" + name + "'");
}

void FederationConfig::Validate() const {
  if (n == 0) throw ValidationError("config: n must be >= 1");
  if (tau == 0) throw ValidationError("config: tau must be >= 1");
  if (T == 0 || T % tau != 0) throw ValidationError("config: T must be a positive multiple of tau");
  if (!(eta1 > 0.0) || !(eta2 > 0.0)) throw ValidationError("config: eta1 and eta2 must be > 0");
  if (batch == 0 || batch > m) throw ValidationError("config: need 1 <= batch <= m");
  if (method == Method::kFedFOMAML && batch < 2) {
    throw ValidationError("config: FedFOMAML needs batch >= 2");
  }
  if (max_steps_per_min_step == 0) throw ValidationError("config: max_steps_per_min_step >= 1");
  if (eval_every == 0) throw ValidationError("config: eval_every must be >= 1");
  if (proxy_eta < 0.0) throw ValidationError("config: proxy_eta must be >= 0");
  objective.Validate();
}

MinibatchSampler::MinibatchSampler(std::size_t m, numkit::RngStream rng)
    : order_(m), cursor_(m), rng_(rng) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
}

std::span<const std::size_t> MinibatchSampler::Next(std::size_t batch) {
  if (batch == 0 || batch > order_.size()) throw ArgumentError("sampler: bad batch size");
  if (cursor_ + batch > order_.size()) {
    rng_.Shuffle(std::span<std::size_t>(order_));
    cursor_ = 0;
  }
  const std::span<const std::size_t> out(order_.data() + cursor_, batch);
  cursor_ += batch;
  return out;
}

std::size_t ResolveThreads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FEDOTLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

model::ParamBundle InitialBundle(const FederationConfig& config, std::size_t d,
                                 std::size_t num_classes) {
  numkit::RngStream rng = numkit::RngStream::Named(config.seed, "init");
  return model::MakeBundle(config.classifier, config.transport, config.potential, config.n, d,
                           num_classes, rng, config.hidden);
}

numkit::RngStream ClientStream(const FederationConfig& config, std::size_t i) {
  return numkit::RngStream::Named(config.seed, "train").Split("client", config.common_streams ? 0 : i);
}

void AverageInPlace(std::span<ParamSet* const> sets) {
  if (sets.size() <= 1) return;
  const double inv_n = 1.0 / static_cast<double>(sets.size());
  const ParamSet& base = *sets[0];
  ParamSet mean = base;
  for (std::size_t t = 0; t < mean.tensors.size(); ++t) {
    auto out = mean.tensors[t].values();
    const auto x0 = base.tensors[t].values();
    for (std::size_t j = 0; j < out.size(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 1; k < sets.size(); ++k) acc += sets[k]->tensors[t][j] - x0[j];
      out[j] = x0[j] + acc * inv_n;
    }
  }
  for (ParamSet* s : sets) *s = mean;
}

double Accuracy(const model::Classifier& w, const model::Transport& theta,
                const shift::ClientDataset& test) {
  if (test.size() == 0) throw ArgumentError("evaluate: empty test set");
  std::size_t correct = 0;
  for (std::size_t r = 0; r < test.size(); ++r) {
    const auto logits = model::ClassifierForward(w, model::TransportForward(theta, test.features.row(r)));
    correct += model::ArgMax(logits) == test.labels[r];
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::vector<double> Evaluate(const model::ParamBundle& bundle,
                             std::span<const shift::ClientDataset> test) {
  if (test.size() != bundle.num_clients()) throw ArgumentError("evaluate: client count mismatch");
  std::vector<double> acc(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) acc[i] = Accuracy(bundle.w, bundle.theta[i], test[i]);
  return acc;
}

model::ParamBundle AssembleBundle(const std::vector<ClientState>& clients,
                                  model::PotentialKind kind) {
  model::ParamBundle b;
  b.w = clients.at(0).w;
  b.potential = {kind, clients[0].shared, {}};
  for (const auto& c : clients) {
    b.theta.push_back(c.theta);
    b.potential.heads.push_back(c.head);
  }
  return b;
}

double StationarityProxy(const MinimaxOracle& oracle, std::span<const double> x,
                         std::span<const double> y0, std::size_t burst, double eta) {
  std::vector<double> y(y0.begin(), y0.end()), gx, gy;
  for (std::size_t s = 0; s < burst; ++s) {
    oracle.grad(x, y, nullptr, &gy);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += eta * gy[k];
  }
  oracle.grad(x, y, &gx, nullptr);
  return numkit::Norm(gx);
}

namespace {

double ProxyImpl(const loss::ObjectiveSpec& spec, model::ParamBundle b,
                 std::span<const shift::ClientDataset> train, std::size_t burst, double eta,
                 bool include_transport) {
  const std::size_t n = b.num_clients();
  const double inv_n = 1.0 / static_cast<double>(n);
  auto grads = [&](std::size_t i) {
    const loss::ClientView v{b.w, b.theta[i], b.potential.kind, b.potential.shared,
                             b.potential.heads[i]};
    loss::ClientGrads g = loss::ClientGrads::ZerosFor(v);
    loss::ClientLossOnView(spec, v, train[i], {}, &g);
    return g;
  };
  if (spec.lambda != 0.0) {
    for (std::size_t s = 0; s < burst; ++s) {
      ParamSet du = b.potential.shared.ZerosLike();
      std::vector<ParamSet> dh;
      for (std::size_t i = 0; i < n; ++i) {
        auto g = grads(i);
        du.Axpy(inv_n, g.shared);
        dh.push_back(std::move(g.head));
      }
      b.potential.shared.Axpy(eta, du);
      for (std::size_t i = 0; i < n; ++i) b.potential.heads[i].Axpy(eta, dh[i]);
      loss::ProjectZeroSumInPlace(b.potential);
      if (spec.kind == loss::ObjectiveKind::kOneFedOT) loss::ProjectLipschitz(b.potential);
    }
  }
  ParamSet gw = b.w.params.ZerosLike();
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto g = grads(i);
    gw.Axpy(inv_n, g.w);
    if (include_transport) sq += g.theta.SquaredNorm() * inv_n * inv_n;
  }
  return std::sqrt(sq + gw.SquaredNorm());
}

}  // namespace

double FedOtStationarityProxy(const loss::ObjectiveSpec& spec, const model::ParamBundle& bundle,
                              std::span<const shift::ClientDataset> train, std::size_t burst,
                              double eta) {
  if (train.size() != bundle.num_clients()) throw ArgumentError("proxy: client count mismatch");
  return ProxyImpl(spec, bundle, train, burst, eta, true);
}

namespace internal {

std::vector<ClientState> InitClients(const FederationConfig& config,
                                     const shift::FederatedTask& task) {
  config.Validate();
  if (task.num_clients() != config.n) throw ValidationError("config n differs from the task");
  const std::size_t d = task.train[0].dim();
  const std::size_t k = task.train[0].num_classes;
  for (const auto& ds : task.train) {
    ds.Validate();
    if (ds.size() < config.batch) throw ValidationError("client has fewer samples than the batch");
  }
  const auto b = InitialBundle(config, d, k);
  std::vector<ClientState> clients;
  for (std::size_t i = 0; i < config.n; ++i) {
    clients.push_back({b.w, b.theta[i], b.potential.shared, b.potential.heads[i], b.w,
                       MinibatchSampler(task.train[i].size(), ClientStream(config, i))});
  }
  return clients;
}

loss::ClientView ViewOf(const ClientState& st, model::PotentialKind kind) {
  return {st.w, st.theta, kind, st.shared, st.head};
}

loss::ClientGrads GradsAt(const loss::ObjectiveSpec& spec, const ClientState& st,
                          model::PotentialKind kind, const shift::ClientDataset& data,
                          std::span<const std::size_t> rows) {
  const auto v = ViewOf(st, kind);
  loss::ClientGrads g = loss::ClientGrads::ZerosFor(v);
  loss::ClientLossOnView(spec, v, data, rows, &g);
  return g;
}

RunResult RunLoop(const FederationConfig& config, const shift::FederatedTask& task,
                  const Hooks& hooks, const SyncObserver& observer) {
  RunResult result;
  result.clients = InitClients(config, task);
  auto& clients = result.clients;
  const std::size_t threads = ResolveThreads(config.threads);
  const std::size_t rounds = config.T / config.tau;
  const double proxy_eta = config.proxy_eta > 0.0 ? config.proxy_eta : config.eta2;
  RoundMetrics last;
  for (std::size_t r = 1; r <= rounds; ++r) {
    RoundMetrics met;
    met.round = r;
    met.iteration = r * config.tau;
    try {
      ParallelFor(config.n, threads, [&](std::size_t i) {
        for (std::size_t s = 0; s < config.tau; ++s) hooks.local_step(i, clients[i]);
      });
      if (hooks.syncs) hooks.sync(clients);
    } catch (const NumericalError&) {
      met.diverged = true;
    }
    if (!met.diverged) {
      const double norm = MaxNorm(clients);
      met.diverged = !(norm <= kDivergenceNorm);
    }
    if (met.diverged) {
      RoundMetrics flagged = last;
      flagged.round = r;
      flagged.iteration = met.iteration;
      flagged.evaluated = false;
      flagged.diverged = true;
      result.history.push_back(flagged);
      result.diverged = true;
      if (observer) observer(flagged, clients);
      return result;
    }
    if (r == rounds && hooks.finalize) hooks.finalize(clients);
    met.zero_sum_residual =
        hooks.carries_potential ? HeadResidual(clients, config.potential) : 0.0;
    met.shared_blocks_equal = SharedEqual(clients);
    if (r % config.eval_every == 0 || r == rounds) {
      met.evaluated = true;
      met.client_acc.resize(config.n);
      for (std::size_t i = 0; i < config.n; ++i) {
        const auto [w, theta] = hooks.eval_model(i, clients[i]);
        met.client_acc[i] = Accuracy(w, theta, task.test[i]);
        const loss::ClientView v{w, theta, config.potential, clients[i].shared, clients[i].head};
        const auto rep = loss::ClientLossOnView(hooks.metric_objective, v, task.train[i], {}, nullptr);
        met.classification_term += rep.classification_term / config.n;
        met.transport_dual_term += rep.transport_dual_term / config.n;
        met.reg_term += rep.reg_term / config.n;
        met.total += rep.total / config.n;
      }
      met.avg_test_acc =
          std::accumulate(met.client_acc.begin(), met.client_acc.end(), 0.0) / config.n;
      if (config.proxy_burst > 0) {
        model::ParamBundle b = AssembleBundle(clients, config.potential);
        for (std::size_t i = 0; i < config.n; ++i) {
          auto [w, theta] = hooks.eval_model(i, clients[i]);
          if (i == 0) b.w = std::move(w);
          b.theta[i] = std::move(theta);
        }
        met.stationarity_proxy = ProxyImpl(hooks.metric_objective, std::move(b), task.train,
                                           config.proxy_burst, proxy_eta, hooks.trains_transport);
      }
    }
    last = met;
    result.history.push_back(met);
    if (observer) observer(met, clients);
  }
  return result;
}

}  // namespace internal

RunResult RunFedOtGda(const FederationConfig& config, const shift::FederatedTask& task,
                      const SyncObserver& observer) {
  const loss::ObjectiveSpec obj = config.objective;
  const auto kind = config.potential;
  const bool one = obj.kind == loss::ObjectiveKind::kOneFedOT;
  // With lambda = 0 the ascent gradients vanish identically.
  const std::size_t k = obj.lambda == 0.0 ? 1 : config.max_steps_per_min_step;
  internal::Hooks h;
  h.metric_objective = obj;
  h.carries_potential = true;
  h.trains_transport = !config.freeze_transport;
  h.local_step = [&, k](std::size_t i, ClientState& st) {
    const auto rows = st.sampler.Next(config.batch);
    auto ascend = [&](const loss::ClientGrads& g) {
      st.head.Axpy(config.eta2, g.head);
      st.shared.Axpy(config.eta2, g.shared);
      if (one) loss::ProjectLipschitzLocal(kind, st.shared, st.head);
    };
    for (std::size_t s = 1; s < k; ++s) ascend(internal::GradsAt(obj, st, kind, task.train[i], rows));
    const auto g = internal::GradsAt(obj, st, kind, task.train[i], rows);
    st.w.params.Axpy(-config.eta1, g.w);
    if (!config.freeze_transport) st.theta.params.Axpy(-config.eta1, g.theta);
    ascend(g);
  };
  h.sync = [&](std::vector<ClientState>& clients) {
    std::vector<ParamSet*> ws, us, thetas, heads;
    for (auto& c : clients) {
      ws.push_back(&c.w.params);
      us.push_back(&c.shared);
      thetas.push_back(&c.theta.params);
      heads.push_back(&c.head);
    }
    AverageInPlace(ws);
    AverageInPlace(us);
    if (config.avg_mode == AvgMode::kLiteralAll) {
      AverageInPlace(thetas);
      AverageInPlace(heads);
    }
    UpdateHeads(clients, kind, obj.kind);
  };
  h.eval_model = [](std::size_t, const ClientState& st) { return std::make_pair(st.w, st.theta); };
  return internal::RunLoop(config, task, h, observer);
}

RunResult RunMethod(const FederationConfig& config, const shift::FederatedTask& task,
                    const SyncObserver& observer) {
  if (config.method == Method::kFedOT) return RunFedOtGda(config, task, observer);
  return RunBaseline(config, task, observer);
}

}  // namespace fedotlab::sim
