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

#ifndef FEDOTLAB_TESTS_DUAL_SEARCH_ORACLE_H_
#define FEDOTLAB_TESTS_DUAL_SEARCH_ORACLE_H_

// Exhaustive search over quantized two-marginal dual potentials. Each
// candidate fixes atom multipliers u on a lattice (u_0 = 0), takes the exact
// c-transform v_b = min_a c(x_a, y_b) - u_a, and tabulates the zero-sum pair
// phi_1(g) = max_a u_a - c~(x_a, g), phi_2 = -phi_1 on the grid. Every
// candidate is scored through DualValue.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fedotlab/errors.h"
#include "fedotlab/ot/ot_core.h"

namespace fedotlab::testing {

struct DualSearchResult {
  double best_dual = -std::numeric_limits<double>::infinity();
  double worst_excess = -std::numeric_limits<double>::infinity();  // max(dual - primal)
  long candidates = 0;
  long feasibility_violations = 0;
};

inline DualSearchResult QuantizedDualSearch(const ot::DiscreteDist& p, const ot::DiscreteDist& q,
                                            ot::CostKind cost, double primal, int levels = 200) {
  const std::vector<ot::DiscreteDist> dists{p, q};
  const numkit::Matrix grid = ot::TupleMinimizers(dists, cost);
  const std::size_t kp = p.size();
  const std::size_t kq = q.size();
  // Pairwise n-ary cost straight from the definition, minimized over the grid.
  std::vector<double> c(kp * kq, std::numeric_limits<double>::infinity());
  double range = 0.0;
  for (std::size_t a = 0; a < kp; ++a) {
    for (std::size_t b = 0; b < kq; ++b) {
      for (std::size_t g = 0; g < grid.rows(); ++g) {
        c[a * kq + b] = std::min(c[a * kq + b], ot::GroundCost(cost, p.point(a), grid.row(g)) +
                                                    ot::GroundCost(cost, q.point(b), grid.row(g)));
      }
      range = std::max(range, c[a * kq + b]);
    }
  }
  range = std::max(range, 1e-6);
  const double step = range / levels;

  DualSearchResult result;
  std::vector<long> digit(kp, -levels);
  digit[0] = 0;
  while (true) {
    std::vector<double> u(kp);
    for (std::size_t a = 0; a < kp; ++a) u[a] = step * static_cast<double>(digit[a]);
    ot::DualPotentials pot;
    pot.grid = grid;
    pot.phi_values.assign(2, std::vector<double>(grid.rows()));
    for (std::size_t g = 0; g < grid.rows(); ++g) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < kp; ++a) {
        best = std::max(best, u[a] - ot::GroundCost(cost, p.point(a), grid.row(g)));
      }
      pot.phi_values[0][g] = best;
      pot.phi_values[1][g] = -best;
    }
    ++result.candidates;
    try {
      const double dual = ot::DualValue(dists, pot, cost);
      result.best_dual = std::max(result.best_dual, dual);
      result.worst_excess = std::max(result.worst_excess, dual - primal);
    } catch (const ConstraintError&) {
      ++result.feasibility_violations;
    }
    std::size_t a = kp;
    while (a-- > 1) {
      if (++digit[a] <= levels) break;
      digit[a] = -levels;
    }
    if (a == 0) break;
  }
  return result;
}

}  // namespace fedotlab::testing

#endif  // FEDOTLAB_TESTS_DUAL_SEARCH_ORACLE_H_
