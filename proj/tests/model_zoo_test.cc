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

#include "fedotlab/model/model_zoo.h"

#include <cmath>

#include "doctest.h"
#include "fedotlab/errors.h"
#include "fedotlab/numkit/gradcheck.h"

namespace fedotlab::model {
namespace {

using numkit::RngStream;

void Randomize(ParamSet& p, RngStream& rng, double scale = 1.0) {
  for (auto& t : p.tensors)
    for (auto& v : t.values()) v = rng.Uniform(-scale, scale);
}

std::vector<double> RandomVec(RngStream& rng, std::size_t d) {
  std::vector<double> x(d);
  for (auto& v : x) v = rng.Uniform(-1.0, 1.0);
  return x;
}

double MinAbs(std::span<const double> v) {
  double m = 1e300;
  for (double x : v) m = std::min(m, std::abs(x));
  return m;
}

// Finite-difference check of d f / d params where f rebuilds from a flat vector.
double CheckBlock(ParamSet& p, const std::function<double()>& f, const ParamSet& analytic) {
  const auto base = p.Flatten();
  const numkit::ScalarFn g = [&](std::span<const double> flat) {
    p.Unflatten(flat);
    return f();
  };
  const auto numeric = numkit::FiniteDiffGrad(g, base);
  p.Unflatten(base);
  return numkit::CompareGradients(analytic.Flatten(), numeric, numkit::kDefaultFdStep).max_rel_err;
}

TEST_CASE("classifier forward basics") {
  RngStream rng(1, 0);
  Classifier c = MakeClassifier(ClassifierKind::kLinear, 3, 3, 0, rng);
  for (double v : c.params.Flatten()) CHECK(std::abs(v) <= 0.01);
  c.params = c.params.ZerosLike();
  CHECK(ClassifierForward(c, std::vector<double>{1, 2, 3}) == std::vector<double>{0, 0, 0});
  c.params.tensors[0] = Matrix::Identity(3);
  CHECK(ClassifierForward(c, std::vector<double>{1, 0, 0}) == std::vector<double>{1, 0, 0});
  CHECK_THROWS_AS(ClassifierForward(c, std::vector<double>{1, 0}), ArgumentError);
  c.params.tensors[1][0] = std::nan("");
  CHECK_THROWS_AS(ClassifierForward(c, std::vector<double>{1, 0, 0}), NumericalError);
}

TEST_CASE("classifier cross-entropy gradients match finite differences") {
  RngStream rng(2, 0);
  for (auto kind : {ClassifierKind::kLinear, ClassifierKind::kMlp}) {
    for (int trial = 0; trial < 10; ++trial) {
      Classifier c = MakeClassifier(kind, 3, 4, 5, rng);
      Randomize(c.params, rng);
      auto x = RandomVec(rng, 4);
      if (kind == ClassifierKind::kMlp) {
        const auto& t = c.params.tensors;
        std::vector<double> pre = numkit::MatVec(t[0], x);
        for (std::size_t k = 0; k < pre.size(); ++k) pre[k] += t[1][k];
        if (MinAbs(pre) < 1e-3) continue;
      }
      const int y = static_cast<int>(rng.Below(3));
      std::vector<double> dl;
      CrossEntropy(ClassifierForward(c, x), y, &dl);
      ParamSet grad = c.params.ZerosLike();
      std::vector<double> dx;
      ClassifierBackward(c, x, dl, &grad, &dx);
      CHECK(CheckBlock(c.params, [&] { return CrossEntropy(ClassifierForward(c, x), y, nullptr); },
                       grad) <= 1e-5);
      const auto ndx = numkit::FiniteDiffGrad(
          [&](std::span<const double> z) { return CrossEntropy(ClassifierForward(c, z), y, nullptr); },
          x);
      CHECK(numkit::CompareGradients(dx, ndx, 1e-5).max_rel_err <= 1e-5);
    }
  }
}

TEST_CASE("saturated softmax gives a vanishing gradient") {
  const std::vector<double> logits{40.0, 5.0, 0.0};
  std::vector<double> dl;
  CHECK(CrossEntropy(logits, 0, &dl) <= 1e-12);
  CHECK(numkit::Norm(dl) <= 1e-6);
  CHECK(ArgMax(std::vector<double>{1.0, 3.0, 3.0}) == 1);
}

TEST_CASE("transport maps") {
  const Transport id = MakeIdentityTransport(TransportKind::kAffine, 3);
  const std::vector<double> x{0.5, -1.0, 2.0};
  CHECK(TransportForward(id, x) == x);

  // Inverse of x' = diag(s) x + z: Theta1 = diag(1/s), theta0 = -diag(1/s) z.
  RngStream rng(3, 0);
  const std::vector<double> s{0.7, 1.3, 1.1}, z{0.4, -2.0, 0.9};
  Transport inv = id;
  for (int j = 0; j < 3; ++j) {
    inv.params.tensors[0](j, j) = 1.0 / s[j];
    inv.params.tensors[1][j] = -z[j] / s[j];
  }
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    auto v = RandomVec(rng, 3);
    std::vector<double> shifted(3);
    for (int j = 0; j < 3; ++j) shifted[j] = s[j] * v[j] + z[j];
    const auto back = TransportForward(inv, shifted);
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(back[j] - v[j]));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("transport gradients match finite differences") {
  RngStream rng(4, 0);
  for (auto kind : {TransportKind::kAffine, TransportKind::kRelu}) {
    int checked = 0;
    while (checked < 10) {
      Transport t = MakeIdentityTransport(kind, 4);
      Randomize(t.params, rng);
      const auto x = RandomVec(rng, 4);
      if (kind == TransportKind::kRelu) {
        auto pre = numkit::MatVec(t.params.tensors[0], x);
        for (std::size_t k = 0; k < 4; ++k) pre[k] += t.params.tensors[1][k];
        if (MinAbs(pre) < 1e-3) continue;
      }
      // Scalar probe r^T psi(x) exercises every output coordinate.
      const auto r = RandomVec(rng, 4);
      ParamSet grad = t.params.ZerosLike();
      std::vector<double> dx;
      TransportBackward(t, x, r, &grad, &dx);
      CHECK(CheckBlock(t.params, [&] { return numkit::Dot(r, TransportForward(t, x)); }, grad) <=
            1e-5);
      const auto ndx = numkit::FiniteDiffGrad(
          [&](std::span<const double> z) { return numkit::Dot(r, TransportForward(t, z)); }, x);
      CHECK(numkit::CompareGradients(dx, ndx, 1e-5).max_rel_err <= 1e-5);
      ++checked;
    }
  }
}

TEST_CASE("potential values and zero-sum cancellation") {
  Potential q = MakeZeroPotential(PotentialKind::kQuadratic, 2, 2, 0);
  q.heads[0].tensors[0] = Matrix::Identity(2);
  CHECK(PotentialForward(q, 0, std::vector<double>{1.0, 1.0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(PotentialForward(q, 2, std::vector<double>{1.0, 1.0}), ArgumentError);

  RngStream rng(5, 0);
  for (auto kind : {PotentialKind::kQuadratic, PotentialKind::kRelu}) {
    Potential p = MakeZeroPotential(kind, 4, 3, 5);
    Randomize(p.shared, rng);
    ParamSet sum = p.heads[0].ZerosLike();
    for (std::size_t i = 0; i < 3; ++i) {
      Randomize(p.heads[i], rng);
      sum.Axpy(1.0, p.heads[i]);
    }
    p.heads[3] = sum.Scale(-1.0);
    CHECK(ZeroSumResidual(p) <= 1e-15);
    for (int k = 0; k < 20; ++k) {
      const auto x = RandomVec(rng, 3);
      double total = 0.0;
      for (std::size_t i = 0; i < 4; ++i) total += PotentialForward(p, i, x);
      CHECK(std::abs(total) <= 1e-9);
    }
    // Moving mass between two heads keeps the sum at zero.
    ParamSet delta = p.heads[0].ZerosLike();
    Randomize(delta, rng);
    p.heads[1].Axpy(1.0, delta);
    p.heads[2].Axpy(-1.0, delta);
    const auto x = RandomVec(rng, 3);
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) total += PotentialForward(p, i, x);
    CHECK(std::abs(total) <= 1e-9);
  }
}

TEST_CASE("potential gradients match finite differences") {
  RngStream rng(6, 0);
  for (auto kind : {PotentialKind::kQuadratic, PotentialKind::kRelu}) {
    int checked = 0;
    while (checked < 10) {
      Potential p = MakeZeroPotential(kind, 1, 4, 6);
      Randomize(p.shared, rng);
      Randomize(p.heads[0], rng);
      if (kind == PotentialKind::kQuadratic) {
        p.heads[0].tensors[0] = numkit::Matrix(p.heads[0].tensors[0]) + p.heads[0].tensors[0].Transposed();
      }
      const auto x = RandomVec(rng, 4);
      if (kind == PotentialKind::kRelu) {
        auto pre = numkit::MatVec(p.shared.tensors[0], x);
        for (std::size_t k = 0; k < pre.size(); ++k) pre[k] += p.shared.tensors[1][k];
        if (MinAbs(pre) < 1e-3) continue;
      }
      ParamSet gs = p.shared.ZerosLike(), gh = p.heads[0].ZerosLike();
      std::vector<double> dx;
      PotentialBackward(p.kind, p.shared, p.heads[0], x, 1.0, &gs, &gh, &dx);
      auto f = [&] { return PotentialForward(p, 0, x); };
      CHECK(CheckBlock(p.heads[0], f, gh) <= 1e-5);
      if (kind == PotentialKind::kRelu) CHECK(CheckBlock(p.shared, f, gs) <= 1e-5);
      const auto ndx = numkit::FiniteDiffGrad(
          [&](std::span<const double> z) { return PotentialForward(p, 0, z); }, x);
      CHECK(numkit::CompareGradients(dx, ndx, 1e-5).max_rel_err <= 1e-6);
      if (kind == PotentialKind::kQuadratic) {
        // Closed form V x + v1.
        const auto vx = numkit::MatVec(p.heads[0].tensors[0], x);
        for (std::size_t k = 0; k < 4; ++k)
          CHECK(dx[k] == doctest::Approx(vx[k] + p.heads[0].tensors[1][k]));
        // The V gradient is symmetric.
        CHECK(gh.tensors[0] == gh.tensors[0].Transposed());
      }
      ++checked;
    }
  }
}

TEST_CASE("ReLU subgradient at zero is zero") {
  Transport t = MakeIdentityTransport(TransportKind::kRelu, 2);
  ParamSet g = t.params.ZerosLike();
  std::vector<double> dx;
  TransportBackward(t, std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 1.0}, &g, &dx);
  CHECK(dx == std::vector<double>{0.0, 1.0});
}

TEST_CASE("param set plumbing") {
  RngStream rng(7, 0);
  ParamBundle b = MakeBundle(ClassifierKind::kMlp, TransportKind::kAffine, PotentialKind::kRelu, 3,
                             4, 2, rng);
  CHECK(b.num_clients() == 3);
  CHECK(b.w.params.tensors[0].rows() == 8);
  CHECK(b.potential.shared.tensors[0].rows() == 8);
  ParamSet p = b.w.params;
  const auto flat = p.Flatten();
  CHECK(flat.size() == p.NumValues());
  p.Scale(2.0).Axpy(-1.0, b.w.params);
  CHECK(p == b.w.params);
  CHECK(MaxAbsDiff(p, b.w.params) == 0.0);
  CHECK_THROWS_AS(p.Unflatten(std::vector<double>(3)), ArgumentError);
}

}  // namespace
}  // namespace fedotlab::model
