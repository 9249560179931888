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

#include "fedotlab/shift/shift_gen.h"

#include <cmath>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "doctest.h"
#include "fedotlab/errors.h"

namespace fedotlab::shift {
namespace {

using numkit::RngStream;

BaseTaskSpec Base(double sep, double scale, std::size_t m, std::size_t m_test = 200) {
  BaseTaskSpec b;
  b.d = 4;
  b.num_classes = 3;
  b.class_means = SimplexMeans(3, 4, sep);
  b.class_cov_scale = scale;
  b.n_train_per_client = m;
  b.n_test_per_client = m_test;
  return b;
}

std::vector<ShiftSpec> Identity(std::size_t n, std::size_t d) {
  return std::vector<ShiftSpec>(n, AffineShift{std::vector<double>(d, 1.0), std::vector<double>(d)});
}

TEST_CASE("affine shift formula and inverse") {
  const AffineShift id{{1.0, 1.0}, {0.0, 0.0}};
  const std::vector<double> x{0.3, -2.0};
  CHECK(ApplyAffine(x, id) == x);
  const AffineShift s{{2.0, 0.5}, {1.0, -1.0}};
  CHECK(ApplyAffine(std::vector<double>{1.0, 4.0}, s) == std::vector<double>{3.0, 1.0});
  CHECK_THROWS_AS(ApplyAffine(std::vector<double>{1.0}, s), ArgumentError);

  RngStream rng(1, 0);
  const auto shifts = GenClientShifts(1, ShiftKind::kAffine, 6, 1.0, rng);
  const auto& a = std::get<AffineShift>(shifts[0]);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    std::vector<double> v(6);
    for (auto& e : v) e = rng.Uniform(-5.0, 5.0);
    const auto back = InvertAffine(ApplyAffine(v, a), a);
    for (int j = 0; j < 6; ++j) worst = std::max(worst, std::abs(back[j] - v[j]));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("color shift threshold rule") {
  const ColorShift c{{0.1, 0.2, 0.3}, {1.0, 0.5, 0.0}, 1e-4};
  CHECK(ApplyColor(0.0, c) == c.a);
  CHECK(ApplyColor(1e-4, c) == c.a);
  const auto half = ApplyColor(0.5, c);
  CHECK(half == std::array<double, 3>{0.5, 0.25, 0.0});
  CHECK_THROWS_AS(ApplyColor(1.5, c), ValidationError);
  CHECK_THROWS_AS(ApplyColor(-0.1, c), ValidationError);
  CHECK_THROWS_AS(ValidateShift(ColorShift{{1.2, 0, 0}, {0, 0, 0}, 1e-4}), ValidationError);
  CHECK_THROWS_AS(ValidateShift(AffineShift{{1.0, 0.0}, {0.0, 0.0}}), ValidationError);
}

TEST_CASE("client shift generation") {
  RngStream rng(2, 0);
  for (const auto& s : GenClientShifts(5, ShiftKind::kAffine, 3, 0.0, rng)) {
    for (double z : std::get<AffineShift>(s).z) CHECK(z == 0.0);
  }
  const auto shifts = GenClientShifts(100, ShiftKind::kAffine, 10, 1.0, rng);
  double mean = 0.0;
  for (const auto& s : shifts) {
    for (double v : std::get<AffineShift>(s).s) {
      CHECK(v >= 0.5);
      CHECK(v <= 1.5);
      mean += v / 1000.0;
    }
  }
  // Unif[0.5,1.5] has sd 1/sqrt(12); 3 standard errors over 1000 draws ~ 0.027.
  CHECK(std::abs(mean - 1.0) <= 0.02);
  const auto again = GenClientShifts(100, ShiftKind::kAffine, 10, 1.0, rng);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(std::get<AffineShift>(again[i]).s == std::get<AffineShift>(shifts[i]).s);
    CHECK(std::get<AffineShift>(again[i]).z == std::get<AffineShift>(shifts[i]).z);
  }
  for (const auto& s : GenClientShifts(10, ShiftKind::kColor, 0, 0.0, rng)) {
    CHECK_NOTHROW(ValidateShift(s));
  }
}

TEST_CASE("identity shifts leave the base draws untouched") {
  const auto task = MakeFederatedTask(Base(4.0, 1.0, 50), Identity(3, 4), RngStream(3, 0));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(task.train[i].features == task.train_base[i].features);
    CHECK(task.train[i].labels == task.train_base[i].labels);
  }
  // Different clients see different i.i.d. draws.
  CHECK(!(task.train[0].features == task.train[1].features));
}

TEST_CASE("shifts never touch labels and are invertible per client") {
  RngStream rng(4, 0);
  auto shifts = GenClientShifts(5, ShiftKind::kAffine, 4, 1.0, rng);
  const auto task = MakeFederatedTask(Base(4.0, 1.0, 50), shifts, rng);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(task.train[i].labels == task.train_base[i].labels);
    const auto& a = std::get<AffineShift>(shifts[i]);
    double worst = 0.0;
    for (std::size_t r = 0; r < 50; ++r) {
      const auto back = InvertAffine(task.train[i].features.row(r), a);
      for (std::size_t j = 0; j < 4; ++j)
        worst = std::max(worst, std::abs(back[j] - task.train_base[i].features(r, j)));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("label marginals agree across clients") {
  const std::size_t n = 8, m = 300;
  const double crit = boost::math::quantile(
      boost::math::complement(boost::math::chi_squared((n - 1) * 2.0), 0.01));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RngStream rng(100 + seed, 0);
    const auto task = MakeFederatedTask(
        Base(4.0, 1.0, m), GenClientShifts(n, ShiftKind::kAffine, 4, 1.0, rng), rng);
    std::vector<std::vector<double>> counts(n, std::vector<double>(3));
    std::vector<double> col(3);
    for (std::size_t i = 0; i < n; ++i) {
      for (int y : task.train[i].labels) {
        counts[i][y] += 1;
        col[y] += 1;
      }
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < 3; ++k) {
        const double expected = col[k] / n;
        stat += (counts[i][k] - expected) * (counts[i][k] - expected) / expected;
      }
    }
    CHECK(stat <= crit);
  }
}

TEST_CASE("well separated base task is nearly Bayes-perfect") {
  const auto b = Base(6.0, 1.0, 10, 20000);
  const auto task = MakeFederatedTask(b, Identity(1, 4), RngStream(5, 0));
  // Equal isotropic covariances and uniform priors: the Bayes rule is the nearest mean.
  const auto& test = task.test[0];
  std::size_t correct = 0;
  for (std::size_t r = 0; r < test.size(); ++r) {
    int best = 0;
    double best_d = 1e300;
    for (int k = 0; k < 3; ++k) {
      double dist = 0.0;
      for (std::size_t j = 0; j < 4; ++j) {
        const double diff = test.features(r, j) - b.class_means(k, j);
        dist += diff * diff;
      }
      if (dist < best_d) best_d = dist, best = k;
    }
    correct += best == test.labels[r];
  }
  CHECK(static_cast<double>(correct) / test.size() >= 0.99);
}

TEST_CASE("color task expands intensities into RGB") {
  BaseTaskSpec b = Base(0.5, 0.2, 20);
  b.class_means = Matrix(3, 4);
  for (int k = 0; k < 3; ++k) b.class_means(k, k) = 0.8;
  RngStream rng(6, 0);
  const auto task = MakeFederatedTask(b, GenClientShifts(2, ShiftKind::kColor, 0, 0.0, rng), rng);
  CHECK(task.train[0].dim() == 12);
  const auto& c = std::get<ColorShift>(task.shifts[1]);
  for (std::size_t r = 0; r < 20; ++r) {
    for (std::size_t j = 0; j < 4; ++j) {
      const auto rgb = ApplyColor(task.train_base[1].features(r, j), c);
      for (int ch = 0; ch < 3; ++ch) CHECK(task.train[1].features(r, 3 * j + ch) == rgb[ch]);
    }
  }
}

TEST_CASE("base task validation") {
  BaseTaskSpec b = Base(4.0, 0.0, 10);
  CHECK_THROWS_AS(MakeFederatedTask(b, Identity(1, 4), RngStream(7, 0)), ValidationError);
  b = Base(4.0, 1.0, 10);
  b.class_means = Matrix(3, 4);
  CHECK_THROWS_AS(b.Validate(), ValidationError);
  CHECK_THROWS_AS(SimplexMeans(5, 4, 1.0), ArgumentError);
}

TEST_CASE("dataset CSV round trip") {
  const auto task = MakeFederatedTask(Base(4.0, 1.0, 7), Identity(2, 4), RngStream(8, 0));
  std::stringstream ss;
  WriteClientCsv(ss, task.train[1]);
  const auto back = ReadClientCsv(ss);
  CHECK(back.features == task.train[1].features);
  CHECK(back.labels == task.train[1].labels);
  CHECK(back.client_id == 1);
  std::stringstream bad("d,K,m,client_id\n2,3,1,0\n0.5,x,1\n");
  CHECK_THROWS_AS(ReadClientCsv(bad), ValidationError);
}

}  // namespace
}  // namespace fedotlab::shift
