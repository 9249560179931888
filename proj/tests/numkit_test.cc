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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "fedotlab/errors.h"
#include "fedotlab/numkit/gradcheck.h"
#include "fedotlab/numkit/linalg.h"
#include "fedotlab/numkit/matrix.h"
#include "fedotlab/numkit/rng.h"

namespace fedotlab::numkit {
namespace {

TEST_CASE("finite differences of x^2 at 3") {
  auto f = [](std::span<const double> p) { return p[0] * p[0]; };
  const std::vector<double> point{3.0};
  const auto g = FiniteDiffGrad(f, point, 1e-5);
  CHECK(std::abs(g[0] - 6.0) <= 1e-8);
}

TEST_CASE("finite differences of a constant vanish") {
  auto f = [](std::span<const double>) { return 4.25; };
  const std::vector<double> point{1.0, -2.0, 7.5};
  for (double v : FiniteDiffGrad(f, point)) CHECK(v == 0.0);
}

TEST_CASE("finite differences match random cubic polynomials") {
  RngStream rng(11, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 4;
    // f(x) = sum_i a_i x_i + sum_ij b_ij x_i x_j + sum_ijk c_ijk x_i x_j x_k
    std::vector<double> a(d), b(d * d), c(d * d * d);
    for (double& v : a) v = rng.Uniform(-1, 1);
    for (double& v : b) v = rng.Uniform(-1, 1);
    for (double& v : c) v = rng.Uniform(-1, 1);
    auto f = [&](std::span<const double> x) {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        s += a[i] * x[i];
        for (std::size_t j = 0; j < d; ++j) {
          s += b[i * d + j] * x[i] * x[j];
          for (std::size_t k = 0; k < d; ++k) s += c[(i * d + j) * d + k] * x[i] * x[j] * x[k];
        }
      }
      return s;
    };
    std::vector<double> x(d);
    for (double& v : x) v = rng.Uniform(-2, 2);
    std::vector<double> analytic(d, 0.0);
    for (std::size_t m = 0; m < d; ++m) {
      analytic[m] = a[m];
      for (std::size_t j = 0; j < d; ++j) analytic[m] += (b[m * d + j] + b[j * d + m]) * x[j];
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
          analytic[m] += (c[(m * d + j) * d + k] + c[(j * d + m) * d + k] +
                          c[(j * d + k) * d + m]) * x[j] * x[k];
        }
      }
    }
    const auto numeric = FiniteDiffGrad(f, x, 1e-5);
    CHECK(CompareGradients(analytic, numeric, 1e-5).max_rel_err <= 1e-7);
  }
}

TEST_CASE("non-finite evaluation names the coordinate") {
  auto f = [](std::span<const double> p) { return p[1] > 0.5 ? std::log(-1.0) : 0.0; };
  const std::vector<double> point{0.0, 0.5};
  try {
    FiniteDiffGrad(f, point);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("coordinate 1") != std::string::npos);
  }
}

TEST_CASE("compare gradients reports the worst coordinate") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> b{1.0, 2.5, 3.0};
  const auto r = CompareGradients(a, b, 1e-5);
  CHECK(r.worst_coordinate == 1);
  CHECK(r.max_rel_err == doctest::Approx(0.5 / 3.0));
  CHECK(r.max_rel_err >= 0.0);
}

TEST_CASE("uniform draws on a degenerate interval collapse to lo") {
  RngStream rng(5, 1);
  const double lo = 0.3;
  const Matrix m = DrawUniform(rng, lo, lo + 1e-12, 10, 10);
  for (double v : m.values()) CHECK(std::abs(v - lo) <= 1e-9);
}

TEST_CASE("uniform draws reject lo >= hi") {
  RngStream rng(5, 1);
  CHECK_THROWS_AS(DrawUniform(rng, 1.0, 1.0, 2, 2), ArgumentError);
  CHECK_THROWS_AS(DrawUniform(rng, 2.0, 1.0, 2, 2), ArgumentError);
}

TEST_CASE("streams are pure functions of seed, stream id and call index") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  CHECK(DrawUniform(a, 0, 1, 3, 4) == DrawUniform(b, 0, 1, 3, 4));
  // Frozen first draws: these must never change across builds or runs.
  RngStream c(42, 7);
  CHECK(c.NextU64() == 1037384221499809813ULL);
  CHECK(c.NextU64() == 8755455212002584689ULL);
  RngStream named = RngStream::Named(2026, "train", 3);
  RngStream named2 = RngStream::Named(2026, "train", 3);
  CHECK(named.stream_id() == named2.stream_id());
  CHECK(named.stream_id() != RngStream::Named(2026, "train", 4).stream_id());
  CHECK(named.stream_id() != RngStream::Named(2026, "test", 3).stream_id());
}

TEST_CASE("empirical mean of 1e6 uniform draws") {
  RngStream rng(123, 0);
  const Matrix m = DrawUniform(rng, 0.0, 1.0, 1000, 1000);
  double sum = 0.0;
  for (double v : m.values()) sum += v;
  // 3 sigma of the mean is 3 * sqrt(1/12) / 1000 ~ 8.7e-4.
  CHECK(std::abs(sum / 1e6 - 0.5) <= 0.002);
}

TEST_CASE("distinct streams are uncorrelated") {
  RngStream a(9, 1);
  RngStream b(9, 2);
  RngStream c = a.Split("child");
  const int n = 200000;
  double sab = 0.0, sac = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = a.Uniform01() - 0.5;
    const double y = b.Uniform01() - 0.5;
    const double z = c.Uniform01() - 0.5;
    sab += x * y;
    sac += x * z;
  }
  // Correlation of independent uniforms has sd 1/sqrt(n); allow 4 sd.
  CHECK(std::abs(12.0 * sab / n) <= 4.0 / std::sqrt(n));
  CHECK(std::abs(12.0 * sac / n) <= 4.0 / std::sqrt(n));
}

TEST_CASE("normal draws have unit variance") {
  RngStream rng(77, 0);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double z = rng.Normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) <= 4.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) <= 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("shuffle is a permutation") {
  RngStream rng(1, 1);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
  rng.Shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("linear solve and spectral norm") {
  const Matrix a = Matrix::FromRows({{4, 1, 0}, {1, 3, 1}, {0, 1, 2}});
  const std::vector<double> x{1.0, -2.0, 0.5};
  const auto b = MatVec(a, x);
  const auto solved = Solve(a, b);
  for (std::size_t k = 0; k < 3; ++k) CHECK(solved[k] == doctest::Approx(x[k]).epsilon(1e-12));
  CHECK_THROWS_AS(Solve(Matrix(2, 2), std::vector<double>{1, 1}), NumericalError);

  const Matrix diag = Matrix::FromRows({{-3, 0}, {0, 2}});
  CHECK(SpectralNorm(diag) == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(SpectralNorm(Matrix(3, 3)) == 0.0);
}

TEST_CASE("matrix shape errors") {
  Matrix a(2, 3);
  Matrix b(3, 2);
  CHECK_THROWS_AS(a += b, ArgumentError);
  CHECK_THROWS_AS(Matrix(2, 2, std::vector<double>{1, 2, 3}), ArgumentError);
  CHECK(MatMul(a, b).rows() == 2);
}

}  // namespace
}  // namespace fedotlab::numkit
