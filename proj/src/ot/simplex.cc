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

#include "fedotlab/ot/simplex.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedotlab/errors.h"

namespace fedotlab::ot {
namespace {

// Tableau with m constraint rows, n structural columns, m artificial columns
// and a right-hand side column. Row m holds reduced costs; its rhs entry is
// minus the current objective.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, std::vector<double>& row_sign)
      : m_(lp.b.size()), n_(lp.c.size()), width_(n_ + m_ + 1), t_((m_ + 1) * width_, 0.0),
        basis_(m_) {
    row_sign.assign(m_, 1.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
      row_sign[i] = sign;
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * lp.a(i, j);
      at(i, n_ + i) = 1.0;
      rhs(i) = sign * lp.b[i];
      basis_[i] = n_ + i;
    }
  }

  double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
  double& rhs(std::size_t i) { return t_[i * width_ + width_ - 1]; }
  double rhs(std::size_t i) const { return t_[i * width_ + width_ - 1]; }
  std::size_t rows() const { return m_; }
  std::size_t structural() const { return n_; }
  std::size_t basis(std::size_t i) const { return basis_[i]; }

  // Loads reduced costs for cost vector `cost` (length n + m).
  void SetObjective(const std::vector<double>& cost) {
    for (std::size_t j = 0; j + 1 < width_; ++j) at(m_, j) = cost[j];
    rhs(m_) = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(m_, j) -= cb * at(i, j);
    }
  }

  void Pivot(std::size_t r, std::size_t q) {
    const double inv = 1.0 / at(r, q);
    double* prow = &t_[r * width_];
    nonzero_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (prow[j] != 0.0) {
        prow[j] *= inv;
        nonzero_.push_back(j);
      }
    }
    prow[q] = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * width_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j : nonzero_) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    basis_[r] = q;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nonzero_;
};

// Runs simplex iterations over columns [0, allowed). Returns iterations used.
int Iterate(Tableau& tab, std::size_t allowed, const SimplexOptions& opt, int budget) {
  const std::size_t m = tab.rows();
  int iterations = 0;
  int degenerate_streak = 0;
  while (true) {
    const bool bland = degenerate_streak >= opt.degenerate_streak_limit;
    std::size_t entering = allowed;
    double best = -opt.optimality_tol;
    for (std::size_t j = 0; j < allowed; ++j) {
      const double rc = tab.at(m, j);
      if (rc < best) {
        entering = j;
        if (bland) break;
        best = rc;
      }
    }
    if (entering == allowed) return iterations;

    std::size_t leaving = m;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = tab.at(i, entering);
      if (a <= opt.pivot_tol) continue;
      const double ratio = std::max(tab.rhs(i), 0.0) / a;
      if (leaving == m || ratio < best_ratio - 1e-14 ||
          (ratio <= best_ratio + 1e-14 && tab.basis(i) < tab.basis(leaving))) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving == m) throw NumericalError("simplex: linear program is unbounded");

    degenerate_streak = best_ratio <= 1e-14 ? degenerate_streak + 1 : 0;
    tab.Pivot(leaving, entering);
    if (++iterations > budget) {
      throw ConvergenceError("simplex: iteration cap reached", -tab.rhs(m));
    }
  }
}

}  // namespace

LpSolution SolveLinearProgram(const LinearProgram& lp, const SimplexOptions& options) {
  const std::size_t m = lp.b.size();
  const std::size_t n = lp.c.size();
  if (lp.a.rows() != m || lp.a.cols() != n) {
    throw ArgumentError("SolveLinearProgram: A is " + std::to_string(lp.a.rows()) + "x" +
                        std::to_string(lp.a.cols()) + ", expected " + std::to_string(m) + "x" +
                        std::to_string(n));
  }
  std::vector<double> row_sign;
  Tableau tab(lp, row_sign);

  // Phase 1: minimize the sum of artificials.
  std::vector<double> cost(n + m, 0.0);
  for (std::size_t i = 0; i < m; ++i) cost[n + i] = 1.0;
  tab.SetObjective(cost);
  int iterations = Iterate(tab, n, options, options.max_iterations);
  double scale = 1.0;
  for (double v : lp.b) scale = std::max(scale, std::abs(v));
  if (-tab.rhs(m) > options.feasibility_tol * scale) {
    throw ValidationError("simplex: linear program is infeasible (phase-1 residual " +
                          std::to_string(-tab.rhs(m)) + ")");
  }
  // Drive zero-level artificials out of the basis; rows where that is
  // impossible are redundant and keep their artificial at zero.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis(i) < n) continue;
    std::size_t best = n;
    double best_abs = options.pivot_tol;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(tab.at(i, j)) > best_abs) {
        best = j;
        best_abs = std::abs(tab.at(i, j));
      }
    }
    if (best < n) tab.Pivot(i, best);
  }

  // Phase 2 over structural columns only.
  std::fill(cost.begin(), cost.end(), 0.0);
  std::copy(lp.c.begin(), lp.c.end(), cost.begin());
  tab.SetObjective(cost);
  iterations += Iterate(tab, n, options, options.max_iterations - iterations);

  LpSolution sol;
  sol.iterations = iterations;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis(i) < n) sol.x[tab.basis(i)] = std::max(tab.rhs(i), 0.0);
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.c[j] * sol.x[j];
  sol.duals.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) sol.duals[i] = -tab.at(m, n + i) * row_sign[i];
  return sol;
}

}  // namespace fedotlab::ot
