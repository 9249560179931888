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

#include "fedotlab/exp/ot_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fedotlab/errors.h"

namespace fedotlab::exp {

double OtCheckReport::primal_barycenter_diff() const { return std::abs(primal - barycenter); }

bool OtCheckReport::ok() const {
  if (!(primal_barycenter_diff() <= kOtValueTolerance)) return false;
  if (!(gap >= -kOtValueTolerance && gap <= kOtValueTolerance)) return false;
  if (pushforward && pushforward_is_map && !(*pushforward <= kPushforwardTolerance)) return false;
  return true;
}

OtCheckReport RunOtCheck(const std::vector<ot::DiscreteDist>& dists, ot::CostKind cost,
                         const ot::NaryOptions& options) {
  if (dists.size() < 2) throw ArgumentError("ot-check: need at least two distributions");
  OtCheckReport rep;
  rep.n = dists.size();
  rep.cost = cost;
  const ot::NaryOtSolution sol = ot::NaryOtExact(dists, cost, options);
  rep.primal = sol.value;
  const numkit::Matrix grid = ot::TupleMinimizers(dists, cost, options);
  rep.barycenter = ot::BarycenterValue(dists, cost, grid);
  const ot::DualPotentials pots = ot::PotentialsFromAtomDuals(dists, sol.atom_duals, cost, grid);
  rep.dual_violation = pots.Violation();
  rep.best_dual = ot::DualValue(dists, pots, cost);
  rep.gap = rep.primal - rep.best_dual;
  if (dists.size() == 2 && dists[0].dim() == 1 && cost == ot::CostKind::kW2) {
    rep.pushforward = ot::PushforwardCheck(dists[0], dists[1]);
    rep.pushforward_is_map = MonotoneCouplingIsMap(dists[0], dists[1]);
  }
  return rep;
}

namespace {

std::vector<double> CumulativeLevels(const ot::DiscreteDist& d) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d.point(a)[0] < d.point(b)[0]; });
  std::vector<double> levels;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    acc += d.weight(order[k]);
    // Coincident atoms do not add a breakpoint.
    if (d.point(order[k])[0] != d.point(order[k + 1])[0]) levels.push_back(acc);
  }
  return levels;
}

}  // namespace

bool MonotoneCouplingIsMap(const ot::DiscreteDist& a, const ot::DiscreteDist& b) {
  if (a.dim() != 1 || b.dim() != 1) throw ArgumentError("monotone coupling: 1-D only");
  const auto la = CumulativeLevels(a), lb = CumulativeLevels(b);
  if (la.size() != lb.size()) return false;
  for (std::size_t k = 0; k < la.size(); ++k) {
    if (std::abs(la[k] - lb[k]) > 1e-12) return false;
  }
  return true;
}

std::vector<ot::DiscreteDist> RandomInstance(std::size_t n, std::size_t k, std::size_t d,
                                             numkit::RngStream& rng) {
  if (n == 0 || k == 0 || d == 0) throw ArgumentError("random instance: n, k, d must be >= 1");
  std::vector<ot::DiscreteDist> out;
  for (std::size_t i = 0; i < n; ++i) {
    numkit::Matrix pts(k, d);
    for (auto& v : pts.values()) v = rng.Uniform(-1.0, 1.0);
    std::vector<double> w(k);
    for (auto& v : w) v = 1.1 - rng.Uniform01();
    out.push_back(ot::DiscreteDist::Normalized(std::move(pts), std::move(w)));
  }
  return out;
}

}  // namespace fedotlab::exp
