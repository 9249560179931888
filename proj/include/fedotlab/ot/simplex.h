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

#ifndef FEDOTLAB_OT_SIMPLEX_H_
#define FEDOTLAB_OT_SIMPLEX_H_

#include <vector>

#include "fedotlab/numkit/matrix.h"

namespace fedotlab::ot {

// min c^T x  s.t.  A x = b, x >= 0.
struct LinearProgram {
  numkit::Matrix a;
  std::vector<double> b;
  std::vector<double> c;
};

struct LpSolution {
  double objective = 0.0;
  std::vector<double> x;
  // One multiplier per equality row; b^T duals == objective at optimality.
  // Rows found redundant during phase 1 get multiplier 0.
  std::vector<double> duals;
  int iterations = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-11;
  double feasibility_tol = 1e-9;
  // Dantzig pricing switches to Bland's rule after this many consecutive
  // degenerate pivots, and back after the next nondegenerate one.
  int degenerate_streak_limit = 50;
  int max_iterations = 200000;
};

// Dense two-phase primal simplex. Throws ValidationError when the program is
// infeasible, NumericalError when unbounded, ConvergenceError at the cap.
LpSolution SolveLinearProgram(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace fedotlab::ot

#endif  // FEDOTLAB_OT_SIMPLEX_H_
