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

#include "fedotlab/numkit/linalg.h"

#include <cmath>
#include <utility>

#include "fedotlab/errors.h"

namespace fedotlab::numkit {

std::vector<double> Solve(Matrix a, std::span<const double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw ArgumentError("Solve: need square A and matching b");
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) < 1e-300) throw NumericalError("Solve: singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      std::swap(x[pivot], x[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      x[r] -= f * x[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a(i, c) * x[c];
    x[i] = s / a(i, i);
  }
  return x;
}

double SpectralNorm(const Matrix& a, double rel_tol, int max_iters) {
  if (a.empty()) return 0.0;
  std::vector<double> v(a.cols());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = 1.0 + 0.01 * static_cast<double>(k);
  double estimate = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const double nv = Norm(v);
    if (nv == 0.0) return 0.0;
    for (double& e : v) e /= nv;
    const std::vector<double> av = MatVec(a, v);
    const double next = Norm(av);
    if (next == 0.0) return 0.0;
    v = MatTVec(a, av);
    if (std::abs(next - estimate) <= rel_tol * next) return next;
    estimate = next;
  }
  throw ConvergenceError("SpectralNorm: power iteration did not converge", estimate);
}

Matrix SymmetricPart(const Matrix& a) {
  if (a.rows() != a.cols()) throw ArgumentError("SymmetricPart: matrix not square");
  Matrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

}  // namespace fedotlab::numkit
