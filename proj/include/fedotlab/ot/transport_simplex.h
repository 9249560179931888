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

#ifndef FEDOTLAB_OT_TRANSPORT_SIMPLEX_H_
#define FEDOTLAB_OT_TRANSPORT_SIMPLEX_H_

#include <span>
#include <vector>

#include "fedotlab/numkit/matrix.h"

namespace fedotlab::ot {

struct TransportSolution {
  double cost = 0.0;
  numkit::Matrix flow;      // supply.size() x demand.size()
  std::vector<double> row_potential;
  std::vector<double> col_potential;
  int iterations = 0;
};

// Balanced transportation problem solved by the primal transportation
// simplex (u-v method). The basis is a spanning tree of the bipartite
// supply/demand graph seeded by the north-west corner rule. Pricing is
// Dantzig's rule with a Bland fallback during degenerate stalls.
TransportSolution SolveTransport(std::span<const double> supply, std::span<const double> demand,
                                 const numkit::Matrix& cost, int max_iterations = 1000000);

}  // namespace fedotlab::ot

#endif  // FEDOTLAB_OT_TRANSPORT_SIMPLEX_H_
