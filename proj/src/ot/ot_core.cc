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

#include "fedotlab/ot/ot_core.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "fedotlab/errors.h"
#include "fedotlab/numkit/linalg.h"
#include "fedotlab/ot/simplex.h"
#include "fedotlab/ot/transport_simplex.h"

namespace fedotlab::ot {
namespace {

constexpr double kWeiszfeldDamping = 1e-12;
constexpr double kWeiszfeldTol = 1e-10;
constexpr int kWeiszfeldMaxIters = 10000;
constexpr double kFeasibilityTol = 1e-8;

void RequireCommonDim(std::span<const DiscreteDist> dists) {
  for (const auto& d : dists) {
    if (d.dim() != dists.front().dim()) {
      throw ArgumentError("marginals have different dimensions");
    }
  }
}

std::size_t JointSize(std::span<const DiscreteDist> dists, std::size_t cap) {
  std::size_t total = 1;
  for (const auto& d : dists) {
    if (total > cap / d.size() + 1) {
      total = cap + 1;
      break;
    }
    total *= d.size();
  }
  if (total > cap) {
    throw ResourceError("joint support exceeds the configured cap of " + std::to_string(cap) +
                        " atoms");
  }
  return total;
}

// Calls fn(index) for every support tuple, last marginal fastest.
template <typename Fn>
void ForEachTuple(std::span<const DiscreteDist> dists, Fn&& fn) {
  std::vector<std::size_t> idx(dists.size(), 0);
  while (true) {
    fn(std::span<const std::size_t>(idx));
    std::size_t i = dists.size();
    while (i-- > 0) {
      if (++idx[i] < dists[i].size()) break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) return;
  }
}

Matrix TuplePoints(std::span<const DiscreteDist> dists, std::span<const std::size_t> idx) {
  Matrix pts(dists.size(), dists.front().dim());
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const auto p = dists[i].point(idx[i]);
    std::copy(p.begin(), p.end(), pts.row(i).begin());
  }
  return pts;
}

std::vector<double> GeometricMedian(const Matrix& points) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  auto dist = [&](std::span<const double> a, std::span<const double> b) {
    return GroundCost(CostKind::kW1, a, b);
  };
  // A data point is optimal iff the pull of the others is at most its
  // multiplicity.
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> pull(d, 0.0);
    double multiplicity = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = dist(points.row(i), points.row(k));
      if (r == 0.0) {
        multiplicity += 1.0;
        continue;
      }
      for (std::size_t j = 0; j < d; ++j) pull[j] += (points(i, j) - points(k, j)) / r;
    }
    if (numkit::Norm(pull) <= multiplicity + 1e-12) {
      const auto p = points.row(k);
      return {p.begin(), p.end()};
    }
  }
  std::vector<double> x(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) x[j] += points(i, j) / static_cast<double>(n);
  double residual = 0.0;
  for (int it = 0; it < kWeiszfeldMaxIters; ++it) {
    std::vector<double> next(d, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = 1.0 / std::max(dist(points.row(i), x), kWeiszfeldDamping);
      total += w;
      for (std::size_t j = 0; j < d; ++j) next[j] += w * points(i, j);
    }
    for (double& v : next) v /= total;
    residual = dist(next, x);
    x = std::move(next);
    if (residual <= kWeiszfeldTol) return x;
  }
  throw ConvergenceError("NaryCost: Weiszfeld iteration did not converge", residual);
}

struct AtomMass {
  std::size_t a;
  std::size_t b;
  double mass;
};

std::vector<std::size_t> SortedOrder1D(const DiscreteDist& d) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return d.point(i)[0] < d.point(j)[0]; });
  return order;
}

// Monotone (north-west corner on sorted atoms) coupling of two 1-D laws.
std::vector<AtomMass> MonotoneCoupling(const DiscreteDist& p, const DiscreteDist& q) {
  const auto op = SortedOrder1D(p);
  const auto oq = SortedOrder1D(q);
  std::vector<AtomMass> cells;
  std::size_t i = 0;
  std::size_t j = 0;
  double rp = p.weight(op[0]);
  double rq = q.weight(oq[0]);
  while (i < op.size() && j < oq.size()) {
    const double m = std::min(rp, rq);
    if (m > 0.0) cells.push_back({op[i], oq[j], m});
    rp -= m;
    rq -= m;
    const bool last_p = i + 1 == op.size();
    const bool last_q = j + 1 == oq.size();
    if (last_p && last_q) break;
    if ((rp <= rq && !last_p) || last_q) {
      if (++i < op.size()) rp += p.weight(op[i]);
    } else {
      if (++j < oq.size()) rq += q.weight(oq[j]);
    }
  }
  return cells;
}

void Require1D(const DiscreteDist& d, const char* op) {
  if (d.dim() != 1) {
    throw ArgumentError(std::string(op) + ": unsupported dimension " + std::to_string(d.dim()) +
                        " (only 1-D inputs)");
  }
}

}  // namespace

NaryCostResult NaryCost(const Matrix& points, CostKind cost) {
  if (points.rows() == 0 || points.cols() == 0) throw ArgumentError("NaryCost: no points");
  NaryCostResult result;
  if (cost == CostKind::kW2) {
    result.minimizer.assign(points.cols(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(points.rows());
    for (std::size_t i = 0; i < points.rows(); ++i)
      for (std::size_t j = 0; j < points.cols(); ++j) result.minimizer[j] += points(i, j) * inv_n;
  } else {
    result.minimizer = GeometricMedian(points);
  }
  for (std::size_t i = 0; i < points.rows(); ++i) {
    result.value += GroundCost(cost, points.row(i), result.minimizer);
  }
  return result;
}

OtResult BinaryOtExact(const DiscreteDist& p, const DiscreteDist& q, CostKind cost) {
  if (p.dim() != q.dim()) throw ArgumentError("BinaryOtExact: dimension mismatch");
  Matrix c(p.size(), q.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) c(i, j) = GroundCost(cost, p.point(i), q.point(j));
  const TransportSolution sol = SolveTransport(p.weights(), q.weights(), c);
  OtResult result;
  result.value = sol.cost;
  result.coupling.marginals = {p, q};
  result.coupling.joint_weights.assign(sol.flow.values().begin(), sol.flow.values().end());
  return result;
}

NaryOtSolution NaryOtExact(std::span<const DiscreteDist> dists, CostKind cost,
                           const NaryOptions& options) {
  if (dists.size() < 2) throw ArgumentError("NaryOtExact: need at least two marginals");
  RequireCommonDim(dists);
  const std::size_t vars = JointSize(dists, options.max_joint_atoms);
  std::vector<std::size_t> row_offset(dists.size(), 0);
  std::size_t rows = 0;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    row_offset[i] = rows;
    rows += dists[i].size();
  }
  LinearProgram lp{Matrix(rows, vars), std::vector<double>(rows), std::vector<double>(vars)};
  for (std::size_t i = 0; i < dists.size(); ++i)
    for (std::size_t a = 0; a < dists[i].size(); ++a) lp.b[row_offset[i] + a] = dists[i].weight(a);
  std::size_t col = 0;
  ForEachTuple(dists, [&](std::span<const std::size_t> idx) {
    lp.c[col] = NaryCost(TuplePoints(dists, idx), cost).value;
    for (std::size_t i = 0; i < dists.size(); ++i) lp.a(row_offset[i] + idx[i], col) = 1.0;
    ++col;
  });
  const LpSolution sol = SolveLinearProgram(lp);

  NaryOtSolution result;
  result.value = sol.objective;
  result.coupling.marginals.assign(dists.begin(), dists.end());
  result.coupling.joint_weights = sol.x;
  result.atom_duals.resize(dists.size());
  for (std::size_t i = 0; i < dists.size(); ++i) {
    result.atom_duals[i].assign(sol.duals.begin() + row_offset[i],
                                sol.duals.begin() + row_offset[i] + dists[i].size());
  }
  return result;
}

BarycenterResult Barycenter(std::span<const DiscreteDist> dists, CostKind cost,
                            const Matrix& candidate_support) {
  if (dists.empty()) throw ArgumentError("Barycenter: no marginals");
  if (candidate_support.rows() == 0) throw ArgumentError("Barycenter: empty candidate support");
  RequireCommonDim(dists);
  if (candidate_support.cols() != dists.front().dim()) {
    throw ArgumentError("Barycenter: candidate dimension mismatch");
  }
  const std::size_t n = dists.size();
  const std::size_t g_count = candidate_support.rows();
  // Variables pi_i(g, a). Q's weights are q_g = sum_a pi_0(g, a); the other
  // plans are tied to them by sum_a pi_i(g, a) = sum_a pi_0(g, a).
  std::vector<std::size_t> var_offset(n, 0);
  std::size_t vars = 0;
  std::size_t atoms = 0;
  for (std::size_t i = 0; i < n; ++i) {
    var_offset[i] = vars;
    vars += g_count * dists[i].size();
    atoms += dists[i].size();
  }
  const std::size_t rows = atoms + (n - 1) * g_count;
  LinearProgram lp{Matrix(rows, vars), std::vector<double>(rows, 0.0),
                   std::vector<double>(vars, 0.0)};
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = dists[i].size();
    for (std::size_t a = 0; a < k; ++a, ++row) {
      lp.b[row] = dists[i].weight(a);
      for (std::size_t g = 0; g < g_count; ++g) lp.a(row, var_offset[i] + g * k + a) = 1.0;
    }
    for (std::size_t g = 0; g < g_count; ++g)
      for (std::size_t a = 0; a < k; ++a)
        lp.c[var_offset[i] + g * k + a] =
            GroundCost(cost, candidate_support.row(g), dists[i].point(a));
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t g = 0; g < g_count; ++g, ++row) {
      for (std::size_t a = 0; a < dists[i].size(); ++a)
        lp.a(row, var_offset[i] + g * dists[i].size() + a) = 1.0;
      for (std::size_t a = 0; a < dists[0].size(); ++a)
        lp.a(row, var_offset[0] + g * dists[0].size() + a) = -1.0;
    }
  }
  const LpSolution sol = SolveLinearProgram(lp);
  BarycenterResult result;
  result.value = sol.objective;
  result.weights.assign(g_count, 0.0);
  for (std::size_t g = 0; g < g_count; ++g)
    for (std::size_t a = 0; a < dists[0].size(); ++a)
      result.weights[g] += sol.x[var_offset[0] + g * dists[0].size() + a];
  return result;
}

double BarycenterValue(std::span<const DiscreteDist> dists, CostKind cost,
                       const Matrix& candidate_support) {
  return Barycenter(dists, cost, candidate_support).value;
}

Matrix TupleMinimizers(std::span<const DiscreteDist> dists, CostKind cost,
                       const NaryOptions& options) {
  if (dists.empty()) throw ArgumentError("TupleMinimizers: no marginals");
  RequireCommonDim(dists);
  JointSize(dists, options.max_joint_atoms);
  std::vector<std::vector<double>> found;
  ForEachTuple(dists, [&](std::span<const std::size_t> idx) {
    found.push_back(NaryCost(TuplePoints(dists, idx), cost).minimizer);
  });
  std::sort(found.begin(), found.end());
  std::vector<std::vector<double>> unique;
  for (auto& p : found) {
    if (!unique.empty()) {
      double diff = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) diff = std::max(diff, std::abs(p[j] - unique.back()[j]));
      if (diff <= 1e-12) continue;
    }
    unique.push_back(std::move(p));
  }
  Matrix out(unique.size(), dists.front().dim());
  for (std::size_t g = 0; g < unique.size(); ++g)
    std::copy(unique[g].begin(), unique[g].end(), out.row(g).begin());
  return out;
}

double CTransform(std::span<const double> phi, CostKind cost, const Matrix& candidates,
                  std::span<const double> query) {
  if (candidates.rows() == 0) throw ArgumentError("CTransform: empty candidate set");
  if (phi.size() != candidates.rows()) {
    throw ArgumentError("CTransform: one potential value per candidate required");
  }
  double best = GroundCost(cost, query, candidates.row(0)) + phi[0];
  for (std::size_t g = 1; g < candidates.rows(); ++g) {
    best = std::min(best, GroundCost(cost, query, candidates.row(g)) + phi[g]);
  }
  return best;
}

double DualPotentials::Violation() const {
  double worst = 0.0;
  for (std::size_t g = 0; g < grid.rows(); ++g) {
    double sum = 0.0;
    for (const auto& phi : phi_values) sum += phi[g];
    worst = std::max(worst, feasibility == Feasibility::kZeroSum ? std::abs(sum)
                                                                 : std::max(sum, 0.0));
  }
  return worst;
}

double DualValue(std::span<const DiscreteDist> dists, const DualPotentials& potentials,
                 CostKind cost) {
  if (potentials.phi_values.size() != dists.size()) {
    throw ArgumentError("DualValue: one potential per marginal required");
  }
  const double violation = potentials.Violation();
  if (violation > kFeasibilityTol) {
    throw ConstraintError("DualValue: potentials violate the sum constraint by " +
                          std::to_string(violation));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    for (std::size_t a = 0; a < dists[i].size(); ++a) {
      total += dists[i].weight(a) *
               CTransform(potentials.phi_values[i], cost, potentials.grid, dists[i].point(a));
    }
  }
  return total;
}

DualPotentials PotentialsFromAtomDuals(std::span<const DiscreteDist> dists,
                                       const std::vector<std::vector<double>>& atom_duals,
                                       CostKind cost, const Matrix& grid) {
  if (atom_duals.size() != dists.size()) throw ArgumentError("one dual vector per marginal");
  DualPotentials pot;
  pot.grid = grid;
  pot.phi_values.assign(dists.size(), std::vector<double>(grid.rows(), 0.0));
  for (std::size_t g = 0; g < grid.rows(); ++g) {
    double slack = 0.0;
    for (std::size_t i = 0; i < dists.size(); ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < dists[i].size(); ++a) {
        best = std::max(best, atom_duals[i][a] - GroundCost(cost, dists[i].point(a), grid.row(g)));
      }
      pot.phi_values[i][g] = best;
      slack += best;
    }
    pot.phi_values[0][g] -= slack;
  }
  return pot;
}

double W1Distance1D(const DiscreteDist& a, const DiscreteDist& b) {
  Require1D(a, "W1Distance1D");
  Require1D(b, "W1Distance1D");
  std::vector<std::pair<double, double>> events;
  events.reserve(a.size() + b.size());
  for (std::size_t k = 0; k < a.size(); ++k) events.emplace_back(a.point(k)[0], a.weight(k));
  for (std::size_t k = 0; k < b.size(); ++k) events.emplace_back(b.point(k)[0], -b.weight(k));
  std::sort(events.begin(), events.end());
  double cdf_gap = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < events.size(); ++k) {
    cdf_gap += events[k].second;
    total += std::abs(cdf_gap) * (events[k + 1].first - events[k].first);
  }
  return total;
}

DiscreteDist QuantileBarycenter1D(const DiscreteDist& a, const DiscreteDist& b) {
  Require1D(a, "QuantileBarycenter1D");
  Require1D(b, "QuantileBarycenter1D");
  const auto cells = MonotoneCoupling(a, b);
  Matrix pts(cells.size(), 1);
  std::vector<double> w(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    pts(k, 0) = 0.5 * (a.point(cells[k].a)[0] + b.point(cells[k].b)[0]);
    w[k] = cells[k].mass;
  }
  return DiscreteDist::Normalized(std::move(pts), std::move(w));
}

double PushforwardCheck(const DiscreteDist& a, const DiscreteDist& b) {
  Require1D(a, "PushforwardCheck");
  Require1D(b, "PushforwardCheck");
  const DiscreteDist bary = QuantileBarycenter1D(a, b);
  auto push = [&](const DiscreteDist& p) {
    std::vector<double> image(p.size(), 0.0);
    for (const AtomMass& c : MonotoneCoupling(p, bary)) {
      image[c.a] += c.mass * bary.point(c.b)[0];
    }
    Matrix pts(p.size(), 1);
    for (std::size_t k = 0; k < p.size(); ++k) {
      pts(k, 0) = p.weight(k) > 0.0 ? image[k] / p.weight(k) : p.point(k)[0];
    }
    return DiscreteDist::Normalized(std::move(pts), {p.weights().begin(), p.weights().end()});
  };
  return W1Distance1D(push(a), push(b));
}

double QuadraticCTransform(const Matrix& v, std::span<const double> b,
                           std::span<const double> x) {
  const std::size_t d = x.size();
  Matrix system = Matrix::Identity(d) + v;
  std::vector<double> rhs(d);
  for (std::size_t j = 0; j < d; ++j) rhs[j] = x[j] - b[j];
  const std::vector<double> xp = numkit::Solve(system, rhs);
  const std::vector<double> vxp = numkit::MatVec(v, xp);
  double value = 0.5 * numkit::Dot(xp, vxp) + numkit::Dot(b, xp);
  for (std::size_t j = 0; j < d; ++j) value += 0.5 * (xp[j] - x[j]) * (xp[j] - x[j]);
  return value;
}

double Lemma1Check(double gamma, std::size_t num_points, numkit::RngStream& rng,
                   std::size_t dim) {
  if (!(gamma >= 0.0) || gamma >= 1.0) {
    throw ArgumentError("Lemma1Check: gamma must lie in [0, 1)");
  }
  double worst = 0.0;
  for (std::size_t p = 0; p < num_points; ++p) {
    Matrix v(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        v(i, j) = rng.Normal();
        v(j, i) = v(i, j);
      }
    }
    const double sigma = numkit::SpectralNorm(v);
    v.Scale(sigma > 0.0 ? gamma / sigma : 0.0);
    std::vector<double> b(dim);
    std::vector<double> x(dim);
    for (double& e : b) e = rng.Normal();
    for (double& e : x) e = 2.0 * rng.Normal();

    const std::vector<double> vx = numkit::MatVec(v, x);
    std::vector<double> grad(dim);
    for (std::size_t j = 0; j < dim; ++j) grad[j] = vx[j] + b[j];
    const double phi = 0.5 * numkit::Dot(x, vx) + numkit::Dot(b, x);
    const double lhs = QuadraticCTransform(v, b, x);
    const double rhs = phi - numkit::SquaredNorm(grad) / (2.0 * (1.0 - gamma));
    worst = std::max(worst, rhs - lhs);
  }
  return std::max(worst, 0.0);
}

double GaussianW2(const GaussianSpec& a, const GaussianSpec& b) {
  a.Validate();
  b.Validate();
  const std::size_t d = a.mean.size();
  if (b.mean.size() != d) throw ArgumentError("GaussianW2: dimension mismatch");
  auto to_eigen = [d](const Matrix& m) {
    Eigen::MatrixXd e(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) e(i, j) = m(i, j);
    return e;
  };
  auto sqrtm = [](const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return Eigen::MatrixXd(eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose());
  };
  const Eigen::MatrixXd ca = to_eigen(a.covariance);
  const Eigen::MatrixXd cb = to_eigen(b.covariance);
  const Eigen::MatrixXd ra = sqrtm(ca);
  Eigen::MatrixXd cross = ra * cb * ra;
  cross = 0.5 * (cross + cross.transpose());
  double mean_sq = 0.0;
  for (std::size_t j = 0; j < d; ++j) mean_sq += (a.mean[j] - b.mean[j]) * (a.mean[j] - b.mean[j]);
  const double bures = ca.trace() + cb.trace() - 2.0 * sqrtm(cross).trace();
  return 0.5 * (mean_sq + std::max(bures, 0.0));
}

}  // namespace fedotlab::ot
