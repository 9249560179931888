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

#ifndef FEDOTLAB_NUMKIT_LINALG_H_
#define FEDOTLAB_NUMKIT_LINALG_H_

#include <span>
#include <vector>

#include "fedotlab/numkit/matrix.h"

namespace fedotlab::numkit {

// Solves A x = b by Gaussian elimination with partial pivoting.
// Throws NumericalError if A is singular to working precision.
std::vector<double> Solve(Matrix a, std::span<const double> b);

// Largest singular value by power iteration on A^T A, stopped when the
// relative change of the estimate falls below rel_tol. Throws
// ConvergenceError (carrying the last estimate) after max_iters.
double SpectralNorm(const Matrix& a, double rel_tol = 1e-8, int max_iters = 10000);

// (A + A^T) / 2
Matrix SymmetricPart(const Matrix& a);

}  // namespace fedotlab::numkit

#endif  // FEDOTLAB_NUMKIT_LINALG_H_
