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

#ifndef FEDOTLAB_SIM_FED_SIM_H_
#define FEDOTLAB_SIM_FED_SIM_H_

// In-process star-topology simulation of FedOT gradient descent-ascent and
// the comparison methods.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fedotlab/loss/fedot_loss.h"
#include "fedotlab/model/model_zoo.h"
#include "fedotlab/numkit/rng.h"
#include "fedotlab/shift/shift_gen.h"

namespace fedotlab::sim {

using model::ParamSet;

enum class Method { kFedOT, kFedAvg, kLFedAvg, kFedMI, kFedFOMAML, kLocalOnly };
enum class AvgMode {
  kPartialPersonalized,  // average w and U only
  kLiteralAll,           // average every block, personal ones included
};

const char* MethodName(Method m);
Method ParseMethod(const std::string& name);
const char* AvgModeName(AvgMode m);
AvgMode ParseAvgMode(const std::string& name);

struct FederationConfig {
  std::size_t n = 20;
  std::size_t m = 100;
  std::size_t tau = 5;
  std::size_t T = 2000;
  double eta1 = 1e-4;  // descent
  double eta2 = 1e-4;  // ascent
  loss::ObjectiveSpec objective;
  std::size_t batch = 20;
  // k: k - 1 ascent-only steps, then one simultaneous descent/ascent step.
  std::size_t max_steps_per_min_step = 10;
  std::uint64_t seed = 0;
  Method method = Method::kFedOT;
  AvgMode avg_mode = AvgMode::kPartialPersonalized;

  model::ClassifierKind classifier = model::ClassifierKind::kLinear;
  model::TransportKind transport = model::TransportKind::kAffine;
  model::PotentialKind potential = model::PotentialKind::kQuadratic;
  std::size_t hidden = 0;  // 0 means 2d

  bool freeze_transport = false;      // keep psi at the identity
  std::size_t finetune_steps = 500;   // L-FedAvg private steps, at eta1
  std::size_t proxy_burst = 10;       // 0 disables the stationarity proxy
  double proxy_eta = 0.0;             // 0 means eta2
  std::size_t eval_every = 1;         // full metrics every this many syncs
  std::size_t threads = 0;            // 0: FEDOTLAB_THREADS, else hardware
  bool common_streams = false;        // every client samples with client 0's stream

  void Validate() const;
};

// Epoch-wise sampling without replacement; reshuffles when an epoch cannot
// fill the next batch.
class MinibatchSampler {
 public:
  MinibatchSampler(std::size_t m, numkit::RngStream rng);
  std::span<const std::size_t> Next(std::size_t batch);

 private:
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  numkit::RngStream rng_;
};

struct ClientState {
  model::Classifier w;
  model::Transport theta;
  ParamSet shared;  // U
  ParamSet head;    // v_i
  model::Classifier local_w;  // FedMI private model, L-FedAvg fine-tuned copy
  MinibatchSampler sampler;
};

struct RoundMetrics {
  std::size_t round = 0;  // 1-based sync index
  std::size_t iteration = 0;
  bool evaluated = false;
  std::vector<double> client_acc;
  double avg_test_acc = 0.0;
  double classification_term = 0.0;
  double transport_dual_term = 0.0;
  double reg_term = 0.0;
  double total = 0.0;
  double zero_sum_residual = 0.0;
  bool shared_blocks_equal = true;
  double stationarity_proxy = 0.0;
  bool diverged = false;
};

struct RunResult {
  std::vector<RoundMetrics> history;
  std::vector<ClientState> clients;
  bool diverged = false;
};

// Called after every sync with the post-projection client states.
using SyncObserver = std::function<void(const RoundMetrics&, const std::vector<ClientState>&)>;

// Initial bundle drawn from RngStream::Named(seed, "init").
model::ParamBundle InitialBundle(const FederationConfig& config, std::size_t d,
                                 std::size_t num_classes);
// Client i's training stream: RngStream::Named(seed, "train").Split("client", i),
// with i = 0 for every client under common_streams.
numkit::RngStream ClientStream(const FederationConfig& config, std::size_t i);

RunResult RunFedOtGda(const FederationConfig& config, const shift::FederatedTask& task,
                      const SyncObserver& observer = {});
RunResult RunBaseline(const FederationConfig& config, const shift::FederatedTask& task,
                      const SyncObserver& observer = {});
// Dispatches on config.method.
RunResult RunMethod(const FederationConfig& config, const shift::FederatedTask& task,
                    const SyncObserver& observer = {});

// Replaces every set by the common mean x_0 + (1/n) sum_k (x_k - x_0), so
// identical inputs are left bit-for-bit unchanged.
void AverageInPlace(std::span<ParamSet* const> sets);

// Per-client accuracy of argmax f_w(psi_i(x)); ties go to the lowest class.
double Accuracy(const model::Classifier& w, const model::Transport& theta,
                const shift::ClientDataset& test);
std::vector<double> Evaluate(const model::ParamBundle& bundle,
                             std::span<const shift::ClientDataset> test);

model::ParamBundle AssembleBundle(const std::vector<ClientState>& clients,
                                  model::PotentialKind kind);

// Gradient oracle for min_x max_y L(x, y).
struct MinimaxOracle {
  std::function<void(std::span<const double> x, std::span<const double> y, std::vector<double>* gx,
                     std::vector<double>* gy)>
      grad;
};

// `burst` ascent steps of size eta on y from y0, then |grad_x L(x, y)|.
double StationarityProxy(const MinimaxOracle& oracle, std::span<const double> x,
                         std::span<const double> y0, std::size_t burst, double eta);

// Full-batch version on the FedOT objective: ascent on (v, U) with zero-sum
// projection, then the norm of the descent gradient in (w, theta_1..n) of the
// mean client loss.
double FedOtStationarityProxy(const loss::ObjectiveSpec& spec, const model::ParamBundle& bundle,
                              std::span<const shift::ClientDataset> train, std::size_t burst,
                              double eta);

// Minibatch SGD on a single classifier over the pooled data for `steps`
// iterations; returns the mean per-client test accuracy.
struct PooledResult {
  model::Classifier w;
  double avg_test_acc = 0.0;
};
PooledResult TrainPooled(const FederationConfig& config, std::span<const shift::ClientDataset> train,
                         std::span<const shift::ClientDataset> test, std::size_t steps);

// FEDOTLAB_THREADS when set, else hardware concurrency (at least 1).
std::size_t ResolveThreads(std::size_t requested);

}  // namespace fedotlab::sim

#endif  // FEDOTLAB_SIM_FED_SIM_H_
