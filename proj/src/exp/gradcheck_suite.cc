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

#include "fedotlab/exp/gradcheck_suite.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fedotlab/errors.h"
#include "fedotlab/loss/fedot_loss.h"
#include "fedotlab/model/model_zoo.h"
#include "fedotlab/numkit/gradcheck.h"
#include "fedotlab/numkit/linalg.h"
#include "fedotlab/numkit/rng.h"

namespace fedotlab::exp {
namespace {

using model::ClassifierKind;
using model::ParamSet;
using model::PotentialKind;
using model::TransportKind;
using numkit::Matrix;
using numkit::RngStream;

constexpr double kKinkMargin = 1e-3;
constexpr std::size_t kDim = 4;
constexpr std::size_t kClasses = 3;
constexpr std::size_t kHidden = 5;
constexpr std::size_t kRows = 8;

void Randomize(ParamSet& p, RngStream& rng) {
  for (auto& t : p.tensors)
    for (auto& v : t.values()) v = rng.Uniform(-1.0, 1.0);
}

std::vector<double> RandomVec(RngStream& rng, std::size_t d) {
  std::vector<double> x(d);
  for (auto& v : x) v = rng.Uniform(-1.5, 1.5);
  return x;
}

// min_k |(A x + b)_k|
double Margin(const Matrix& a, const Matrix& b, std::span<const double> x) {
  const auto pre = numkit::MatVec(a, x);
  double m = 1e300;
  for (std::size_t k = 0; k < pre.size(); ++k) m = std::min(m, std::abs(pre[k] + b[k]));
  return m;
}

// Finite differences of f over the coordinates of `sets` (concatenated),
// against the concatenated analytic gradients.
double CheckSets(std::vector<ParamSet*> sets, const std::function<double()>& f,
                 std::vector<const ParamSet*> analytic, bool inject) {
  std::vector<double> point, grad;
  for (auto* s : sets) {
    const auto flat = s->Flatten();
    point.insert(point.end(), flat.begin(), flat.end());
  }
  for (const auto* g : analytic) {
    const auto flat = g->Flatten();
    grad.insert(grad.end(), flat.begin(), flat.end());
  }
  auto assign = [&](std::span<const double> p) {
    std::size_t off = 0;
    for (auto* s : sets) {
      const std::size_t k = s->NumValues();
      s->Unflatten(p.subspan(off, k));
      off += k;
    }
  };
  const auto numeric = numkit::FiniteDiffGrad(
      [&](std::span<const double> p) {
        assign(p);
        return f();
      },
      point);
  assign(point);
  if (inject && !grad.empty()) grad[0] += 1e-3;
  return numkit::CompareGradients(grad, numeric, numkit::kDefaultFdStep).max_rel_err;
}

struct Sample {
  bool accepted = false;
  double err = 0.0;
};

Sample ClassifierSample(ClassifierKind kind, RngStream& rng, bool inject) {
  model::Classifier c = model::MakeClassifier(kind, kClasses, kDim, kHidden, rng);
  Randomize(c.params, rng);
  const auto x = RandomVec(rng, kDim);
  if (kind == ClassifierKind::kMlp &&
      Margin(c.params.tensors[0], c.params.tensors[1], x) < kKinkMargin) {
    return {};
  }
  const int y = static_cast<int>(rng.Below(kClasses));
  std::vector<double> dl;
  model::CrossEntropy(model::ClassifierForward(c, x), y, &dl);
  ParamSet g = c.params.ZerosLike();
  model::ClassifierBackward(c, x, dl, &g, nullptr);
  auto f = [&] { return model::CrossEntropy(model::ClassifierForward(c, x), y, nullptr); };
  return {true, CheckSets({&c.params}, f, {&g}, inject)};
}

// Scalar probe r^T psi(x).
Sample TransportSample(TransportKind kind, RngStream& rng, bool inject) {
  model::Transport t = model::MakeIdentityTransport(kind, kDim);
  Randomize(t.params, rng);
  const auto x = RandomVec(rng, kDim);
  if (kind == TransportKind::kRelu &&
      Margin(t.params.tensors[0], t.params.tensors[1], x) < kKinkMargin) {
    return {};
  }
  const auto r = RandomVec(rng, kDim);
  ParamSet g = t.params.ZerosLike();
  model::TransportBackward(t, x, r, &g, nullptr);
  auto f = [&] {
    const auto y = model::TransportForward(t, x);
    double s = 0.0;
    for (std::size_t k = 0; k < kDim; ++k) s += r[k] * y[k];
    return s;
  };
  return {true, CheckSets({&t.params}, f, {&g}, inject)};
}

Sample PotentialSample(PotentialKind kind, RngStream& rng, bool inject) {
  model::Potential p = model::MakeZeroPotential(kind, 1, kDim, kHidden);
  Randomize(p.shared, rng);
  Randomize(p.heads[0], rng);
  const auto x = RandomVec(rng, kDim);
  if (kind == PotentialKind::kRelu &&
      Margin(p.shared.tensors[0], p.shared.tensors[1], x) < kKinkMargin) {
    return {};
  }
  ParamSet gs = p.shared.ZerosLike(), gh = p.heads[0].ZerosLike();
  model::PotentialBackward(kind, p.shared, p.heads[0], x, 1.0, &gs, &gh, nullptr);
  auto f = [&] { return model::PotentialForward(p, 0, x); };
  return {true, CheckSets({&p.shared, &p.heads[0]}, f, {&gs, &gh}, inject)};
}

struct ClientPoint {
  model::Classifier w;
  model::Transport theta;
  PotentialKind kind = PotentialKind::kQuadratic;
  ParamSet shared;
  ParamSet head;
  shift::ClientDataset data;
  loss::ObjectiveSpec spec;

  loss::ClientView View() const { return {w, theta, kind, shared, head}; }
};

// Linear/affine/quadratic or MLP/ReLU/ReLU. False when any
// pre-activation sits within the kink margin.
bool DrawClientPoint(RngStream& rng, bool relu_family, loss::ObjectiveKind objective,
                     ClientPoint* out) {
  ClientPoint& p = *out;
  p.w = model::MakeClassifier(relu_family ? ClassifierKind::kMlp : ClassifierKind::kLinear,
                              kClasses, kDim, kHidden, rng);
  p.theta = model::MakeIdentityTransport(relu_family ? TransportKind::kRelu : TransportKind::kAffine,
                                         kDim);
  p.kind = relu_family ? PotentialKind::kRelu : PotentialKind::kQuadratic;
  model::Potential pot = model::MakeZeroPotential(p.kind, 1, kDim, kHidden);
  Randomize(p.w.params, rng);
  Randomize(p.theta.params, rng);
  Randomize(pot.shared, rng);
  Randomize(pot.heads[0], rng);
  p.shared = pot.shared;
  p.head = pot.heads[0];
  p.data = shift::ClientDataset{Matrix(kRows, kDim), std::vector<int>(kRows), 0, kClasses};
  for (auto& v : p.data.features.values()) v = rng.Uniform(-1.5, 1.5);
  for (auto& y : p.data.labels) y = static_cast<int>(rng.Below(kClasses));
  p.spec = loss::ObjectiveSpec{objective, rng.Uniform(0.5, 2.0), rng.Uniform(0.1, 0.9), false};
  if (!relu_family) return true;
  for (std::size_t r = 0; r < kRows; ++r) {
    const auto x = p.data.features.row(r);
    if (Margin(p.theta.params.tensors[0], p.theta.params.tensors[1], x) < kKinkMargin) return false;
    const auto psi = model::TransportForward(p.theta, x);
    if (Margin(p.w.params.tensors[0], p.w.params.tensors[1], psi) < kKinkMargin) return false;
    if (Margin(p.shared.tensors[0], p.shared.tensors[1], psi) < kKinkMargin) return false;
  }
  return true;
}

enum class ClientBlock { kW, kTheta, kHead, kShared };

Sample ClientLossSample(ClientBlock block, std::size_t trial, RngStream& rng, bool inject) {
  // The shared block only exists for the ReLU potential.
  const bool relu = block == ClientBlock::kShared || trial % 2 == 1;
  const auto objective =
      (trial / 2) % 2 ? loss::ObjectiveKind::kOneFedOT : loss::ObjectiveKind::kTwoFedOTReg;
  ClientPoint p;
  if (!DrawClientPoint(rng, relu, objective, &p)) return {};
  auto grads = loss::ClientGrads::ZerosFor(p.View());
  loss::ClientLossOnView(p.spec, p.View(), p.data, {}, &grads);
  auto f = [&] { return loss::ClientLossOnView(p.spec, p.View(), p.data, {}, nullptr).total; };
  switch (block) {
    case ClientBlock::kW:
      return {true, CheckSets({&p.w.params}, f, {&grads.w}, inject)};
    case ClientBlock::kTheta:
      return {true, CheckSets({&p.theta.params}, f, {&grads.theta}, inject)};
    case ClientBlock::kHead:
      return {true, CheckSets({&p.head}, f, {&grads.head}, inject)};
    case ClientBlock::kShared:
      return {true, CheckSets({&p.shared}, f, {&grads.shared}, inject)};
  }
  return {};
}

// lambda/(1-gamma)(|v|^2 + |U|^2): analytic gradient read off as the
// difference between the unpenalized and penalized client gradients.
Sample PenaltySample(std::size_t trial, RngStream& rng, bool inject) {
  ClientPoint p;
  if (!DrawClientPoint(rng, trial % 2 == 1, loss::ObjectiveKind::kTwoFedOTReg, &p)) return {};
  loss::ObjectiveSpec plain = p.spec;
  plain.kind = loss::ObjectiveKind::kOneFedOT;
  auto with = loss::ClientGrads::ZerosFor(p.View());
  auto without = loss::ClientGrads::ZerosFor(p.View());
  loss::ClientLossOnView(p.spec, p.View(), p.data, {}, &with);
  loss::ClientLossOnView(plain, p.View(), p.data, {}, &without);
  ParamSet gh = without.head, gs = without.shared;
  gh.Axpy(-1.0, with.head);
  gs.Axpy(-1.0, with.shared);
  auto f = [&] { return loss::ClientLossOnView(p.spec, p.View(), p.data, {}, nullptr).reg_term; };
  return {true, CheckSets({&p.head, &p.shared}, f, {&gh, &gs}, inject)};
}

struct BlockDef {
  std::string name;
  std::function<Sample(std::size_t, RngStream&, bool)> sample;
};

const std::vector<BlockDef>& Blocks() {
  static const std::vector<BlockDef> blocks = {
      {"classifier.linear",
       [](std::size_t, RngStream& r, bool f) { return ClassifierSample(ClassifierKind::kLinear, r, f); }},
      {"classifier.mlp",
       [](std::size_t, RngStream& r, bool f) { return ClassifierSample(ClassifierKind::kMlp, r, f); }},
      {"transport.affine",
       [](std::size_t, RngStream& r, bool f) { return TransportSample(TransportKind::kAffine, r, f); }},
      {"transport.relu",
       [](std::size_t, RngStream& r, bool f) { return TransportSample(TransportKind::kRelu, r, f); }},
      {"potential.quadratic",
       [](std::size_t, RngStream& r, bool f) {
         return PotentialSample(PotentialKind::kQuadratic, r, f);
       }},
      {"potential.relu",
       [](std::size_t, RngStream& r, bool f) { return PotentialSample(PotentialKind::kRelu, r, f); }},
      {"client_loss.w",
       [](std::size_t t, RngStream& r, bool f) { return ClientLossSample(ClientBlock::kW, t, r, f); }},
      {"client_loss.theta",
       [](std::size_t t, RngStream& r, bool f) {
         return ClientLossSample(ClientBlock::kTheta, t, r, f);
       }},
      {"client_loss.head",
       [](std::size_t t, RngStream& r, bool f) {
         return ClientLossSample(ClientBlock::kHead, t, r, f);
       }},
      {"client_loss.shared",
       [](std::size_t t, RngStream& r, bool f) {
         return ClientLossSample(ClientBlock::kShared, t, r, f);
       }},
      {"penalty", [](std::size_t t, RngStream& r, bool f) { return PenaltySample(t, r, f); }},
  };
  return blocks;
}

}  // namespace

bool GradcheckReport::ok() const {
  return std::all_of(blocks.begin(), blocks.end(), [](const GradcheckBlock& b) {
    return b.points > 0 && b.max_rel_err <= kGradcheckTolerance;
  });
}

const std::vector<std::string>& GradcheckBlockNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& b : Blocks()) out.push_back(b.name);
    return out;
  }();
  return names;
}

GradcheckReport RunGradcheckSuite(std::uint64_t seed, const std::string& fault_block,
                                  std::size_t points) {
  const auto& names = GradcheckBlockNames();
  if (!fault_block.empty() && std::find(names.begin(), names.end(), fault_block) == names.end()) {
    throw ArgumentError("gradcheck: unknown block '" + fault_block + "'");
  }
  if (points == 0) throw ArgumentError("gradcheck: points must be >= 1");
  const RngStream root = RngStream::Named(seed, "gradcheck");
  GradcheckReport report;
  for (std::size_t b = 0; b < Blocks().size(); ++b) {
    const BlockDef& def = Blocks()[b];
    RngStream rng = root.Split(def.name, 0);
    GradcheckBlock out{def.name};
    const bool inject = def.name == fault_block;
    std::size_t draws = 0;
    while (out.points < points) {
      if (++draws > 1000 * points) {
        throw NumericalError("gradcheck: block " + def.name + " keeps landing on ReLU kinks");
      }
      const Sample s = def.sample(out.points, rng, inject);
      if (!s.accepted) {
        ++out.resampled;
        continue;
      }
      out.max_rel_err = std::max(out.max_rel_err, s.err);
      ++out.points;
    }
    report.blocks.push_back(out);
  }
  return report;
}

}  // namespace fedotlab::exp
