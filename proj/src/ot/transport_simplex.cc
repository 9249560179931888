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

#include "fedotlab/ot/transport_simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fedotlab/errors.h"

namespace fedotlab::ot {
namespace {

struct Cell {
  std::size_t row;
  std::size_t col;
  double flow;
};

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

TransportSolution SolveTransport(std::span<const double> supply, std::span<const double> demand,
                                 const numkit::Matrix& cost, int max_iterations) {
  const std::size_t rows = supply.size();
  const std::size_t cols = demand.size();
  if (rows == 0 || cols == 0) throw ArgumentError("SolveTransport: empty supply or demand");
  if (cost.rows() != rows || cost.cols() != cols) {
    throw ArgumentError("SolveTransport: cost matrix shape mismatch");
  }
  const double total_s = std::accumulate(supply.begin(), supply.end(), 0.0);
  const double total_d = std::accumulate(demand.begin(), demand.end(), 0.0);
  if (std::abs(total_s - total_d) > 1e-9 * std::max(1.0, total_s)) {
    throw ValidationError("SolveTransport: unbalanced problem");
  }

  // North-west corner: every step advances exactly one index, so the
  // rows + cols - 1 cells always form a spanning tree.
  std::vector<Cell> basis;
  basis.reserve(rows + cols - 1);
  {
    std::vector<double> s(supply.begin(), supply.end());
    std::vector<double> d(demand.begin(), demand.end());
    std::size_t i = 0;
    std::size_t j = 0;
    while (true) {
      const double x = std::max(0.0, std::min(s[i], d[j]));
      basis.push_back({i, j, x});
      s[i] -= x;
      d[j] -= x;
      if (i == rows - 1 && j == cols - 1) break;
      if (i == rows - 1) {
        ++j;
      } else if (j == cols - 1) {
        ++i;
      } else if (s[i] <= d[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  double cost_scale = 0.0;
  for (double c : cost.values()) cost_scale = std::max(cost_scale, std::abs(c));
  const double tol = 1e-12 * std::max(1.0, cost_scale);

  const std::size_t nodes = rows + cols;
  std::vector<std::vector<std::size_t>> adjacency(nodes);
  std::vector<double> potential(nodes);
  std::vector<std::size_t> parent_edge(nodes);
  std::vector<std::size_t> order;
  std::vector<char> is_basic(rows * cols, 0);
  for (const Cell& c : basis) is_basic[c.row * cols + c.col] = 1;

  auto rebuild_tree = [&]() {
    for (auto& adj : adjacency) adj.clear();
    for (std::size_t e = 0; e < basis.size(); ++e) {
      adjacency[basis[e].row].push_back(e);
      adjacency[rows + basis[e].col].push_back(e);
    }
    // BFS from row node 0; potentials satisfy u_i + v_j = c_ij on the tree.
    std::fill(parent_edge.begin(), parent_edge.end(), kNone);
    order.clear();
    std::vector<char> seen(nodes, 0);
    order.push_back(0);
    seen[0] = 1;
    potential[0] = 0.0;
    for (std::size_t head = 0; head < order.size(); ++head) {
      const std::size_t node = order[head];
      for (std::size_t e : adjacency[node]) {
        const Cell& c = basis[e];
        const std::size_t other = node < rows ? rows + c.col : c.row;
        if (seen[other]) continue;
        seen[other] = 1;
        parent_edge[other] = e;
        potential[other] = cost(c.row, c.col) - potential[node];
        order.push_back(other);
      }
    }
    if (order.size() != nodes) throw NumericalError("SolveTransport: basis is not a spanning tree");
  };

  TransportSolution sol;
  int degenerate_streak = 0;
  std::vector<std::size_t> depth(nodes);
  while (true) {
    rebuild_tree();
    const bool bland = degenerate_streak >= 50;
    std::size_t enter_r = kNone;
    std::size_t enter_c = kNone;
    double best = -tol;
    for (std::size_t i = 0; i < rows && !(bland && enter_r != kNone); ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (is_basic[i * cols + j]) continue;
        const double rc = cost(i, j) - potential[i] - potential[rows + j];
        if (rc < best) {
          enter_r = i;
          enter_c = j;
          if (bland) break;
          best = rc;
        }
      }
    }
    if (enter_r == kNone) break;
    if (++sol.iterations > max_iterations) {
      throw ConvergenceError("SolveTransport: iteration cap reached", best);
    }

    // Tree path between column node and row node of the entering cell.
    // BFS order visits parents first.
    std::fill(depth.begin(), depth.end(), 0);
    for (std::size_t node : order) {
      if (parent_edge[node] == kNone) continue;
      const Cell& c = basis[parent_edge[node]];
      const std::size_t par = node < rows ? rows + c.col : c.row;
      depth[node] = depth[par] + 1;
    }
    auto parent_of = [&](std::size_t node) {
      const Cell& c = basis[parent_edge[node]];
      return node < rows ? rows + c.col : c.row;
    };
    std::vector<std::size_t> from_col;
    std::vector<std::size_t> from_row;
    std::size_t a = rows + enter_c;
    std::size_t b = enter_r;
    while (depth[a] > depth[b]) {
      from_col.push_back(parent_edge[a]);
      a = parent_of(a);
    }
    while (depth[b] > depth[a]) {
      from_row.push_back(parent_edge[b]);
      b = parent_of(b);
    }
    while (a != b) {
      from_col.push_back(parent_edge[a]);
      a = parent_of(a);
      from_row.push_back(parent_edge[b]);
      b = parent_of(b);
    }
    // Cycle: entering (+), then walking from the column node to the row
    // node the signs alternate starting with (-).
    std::vector<std::size_t> path = from_col;
    path.insert(path.end(), from_row.rbegin(), from_row.rend());

    std::size_t leave = kNone;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const Cell& c = basis[path[k]];
      const std::size_t key = c.row * cols + c.col;
      if (c.flow < theta - 1e-15 ||
          (c.flow <= theta + 1e-15 && leave != kNone &&
           key < basis[leave].row * cols + basis[leave].col)) {
        theta = std::min(theta, c.flow);
        leave = path[k];
      }
    }
    theta = std::max(theta, 0.0);
    for (std::size_t k = 0; k < path.size(); ++k) {
      basis[path[k]].flow += (k % 2 == 0 ? -theta : theta);
    }
    degenerate_streak = theta <= 1e-15 ? degenerate_streak + 1 : 0;
    is_basic[basis[leave].row * cols + basis[leave].col] = 0;
    basis[leave] = {enter_r, enter_c, theta};
    is_basic[enter_r * cols + enter_c] = 1;
  }

  sol.flow = numkit::Matrix(rows, cols);
  for (const Cell& c : basis) sol.flow(c.row, c.col) = std::max(c.flow, 0.0);
  sol.cost = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) sol.cost += sol.flow(i, j) * cost(i, j);
  sol.row_potential.assign(potential.begin(), potential.begin() + rows);
  sol.col_potential.assign(potential.begin() + rows, potential.end());
  return sol;
}

}  // namespace fedotlab::ot
