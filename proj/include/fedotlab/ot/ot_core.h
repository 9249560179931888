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

#ifndef FEDOTLAB_OT_OT_CORE_H_
#define FEDOTLAB_OT_OT_CORE_H_

// Exact discrete multi-marginal optimal transport with the infimal
// convolution cost c(x_1..x_n) = min_x' sum_i c~(x', x_i).

#include <cstddef>
#include <span>
#include <vector>

#include "fedotlab/numkit/matrix.h"
#include "fedotlab/numkit/rng.h"
#include "fedotlab/ot/discrete_dist.h"

namespace fedotlab::ot {

struct NaryCostResult {
  double value = 0.0;
  std::vector<double> minimizer;
};

// Rows of `points` are x_1..x_n. W2: the minimizer is the mean. W1: the
// geometric median (exact vertex test, then Weiszfeld with 1e-12 damping at
// collisions, residual <= 1e-10, at most 10000 iterations).
NaryCostResult NaryCost(const Matrix& points, CostKind cost);

struct OtResult {
  double value = 0.0;
  Coupling coupling;
};

OtResult BinaryOtExact(const DiscreteDist& p, const DiscreteDist& q, CostKind cost);

struct NaryOptions {
  std::size_t max_joint_atoms = 10000;
};

struct NaryOtSolution {
  double value = 0.0;
  Coupling coupling;
  // LP multipliers, one per atom per marginal: sum_i duals[i][t_i] <= c(t).
  std::vector<std::vector<double>> atom_duals;
};

// Exact LP over the joint coupling tensor. Throws ResourceError when the
// product of support sizes exceeds options.max_joint_atoms.
NaryOtSolution NaryOtExact(std::span<const DiscreteDist> dists, CostKind cost,
                           const NaryOptions& options = {});

struct BarycenterResult {
  double value = 0.0;
  // Barycenter weights over the candidate support.
  std::vector<double> weights;
};

// min over Q supported on candidate_support of sum_i W_c~(Q, P_i), as one LP
// with Q's weights free.
BarycenterResult Barycenter(std::span<const DiscreteDist> dists, CostKind cost,
                            const Matrix& candidate_support);
double BarycenterValue(std::span<const DiscreteDist> dists, CostKind cost,
                       const Matrix& candidate_support);

// Distinct minimizers of the n-ary cost over all support tuples: tuple means
// for W2, geometric medians for W1. The optimal barycenter lives here.
Matrix TupleMinimizers(std::span<const DiscreteDist> dists, CostKind cost,
                       const NaryOptions& options = {});

// min over candidates x' of c~(query, x') + phi(x').
double CTransform(std::span<const double> phi, CostKind cost, const Matrix& candidates,
                  std::span<const double> query);

enum class Feasibility {
  kZeroSum,         // sum_i phi_i(x) = 0 on the grid
  kNonPositiveSum,  // sum_i phi_i(x) <= 0 on the grid
};

struct DualPotentials {
  Matrix grid;
  // phi_values[i][g] = phi_i(grid row g)
  std::vector<std::vector<double>> phi_values;
  Feasibility feasibility = Feasibility::kZeroSum;

  // max_g |sum_i phi_i(g)| (zero-sum) or max_g max(sum_i phi_i(g), 0).
  double Violation() const;
};

// sum_i E_{P_i}[phi_i^c~(X)], c-transforms taken over the grid. Bounded by
// the primal value whenever the grid holds every tuple minimizer.
// Throws ConstraintError if the feasibility violation exceeds 1e-8.
double DualValue(std::span<const DiscreteDist> dists, const DualPotentials& potentials,
                 CostKind cost);

// Zero-sum potentials on `grid` built from LP atom multipliers u_i:
// phi_i(g) = max_a u_i(a) - c~(x_a, g), with the nonpositive slack of the sum
// pushed into phi_0.
DualPotentials PotentialsFromAtomDuals(std::span<const DiscreteDist> dists,
                                       const std::vector<std::vector<double>>& atom_duals,
                                       CostKind cost, const Matrix& grid);

// 1-D W1 distance via the CDF formula.
double W1Distance1D(const DiscreteDist& a, const DiscreteDist& b);

// W2 barycenter of two 1-D distributions by quantile averaging.
DiscreteDist QuantileBarycenter1D(const DiscreteDist& a, const DiscreteDist& b);

// Maps each marginal to the W2 barycenter with the monotone (quantile)
// coupling, pushes it forward through the barycentric projection, and
// returns the W1 distance between the two pushforwards.
double PushforwardCheck(const DiscreteDist& a, const DiscreteDist& b);

// Random quadratics phi(x) = 1/2 x^T V x + b^T x with |V|_2 = gamma checked
// against phi^c~2(x) >= phi(x) - |grad phi(x)|^2 / (2(1 - gamma)) at
// num_points random x. Returns the worst violation, 0 when it holds.
double Lemma1Check(double gamma, std::size_t num_points, numkit::RngStream& rng,
                   std::size_t dim = 3);

// Closed-form c~2 transform of phi(x) = 1/2 x^T V x + b^T x (requires I + V
// positive definite).
double QuadraticCTransform(const Matrix& v, std::span<const double> b,
                           std::span<const double> x);

// Bures-Wasserstein squared distance under the 1/2 |.|^2 convention.
double GaussianW2(const GaussianSpec& a, const GaussianSpec& b);

}  // namespace fedotlab::ot

#endif  // FEDOTLAB_OT_OT_CORE_H_
