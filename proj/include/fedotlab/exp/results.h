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

#ifndef FEDOTLAB_EXP_RESULTS_H_
#define FEDOTLAB_EXP_RESULTS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fedotlab/sim/fed_sim.h"

namespace fedotlab::exp {

// One row per (config, sync round). Metric fields are blank in the CSV for
// rounds that were not evaluated.
struct ResultRow {
  std::string method;
  std::size_t m = 0;
  std::size_t tau = 0;
  std::uint64_t seed = 0;
  std::size_t round = 0;
  bool evaluated = false;
  double avg_test_acc = 0.0;
  double classification_term = 0.0;
  double transport_dual_term = 0.0;
  double reg_term = 0.0;
  double total = 0.0;
  double zero_sum_residual = 0.0;
  double stationarity_proxy = 0.0;
  bool diverged = false;
  double wall_ms = 0.0;
};

extern const char* const kResultColumns;

ResultRow RowFromMetrics(const sim::FederationConfig& config, const sim::RoundMetrics& met,
                         double wall_ms);

// Shortest round-trip decimal ("%.17g" trimmed), '.' decimal point.
std::string FormatDouble(double x);

void WriteResultsCsv(std::ostream& out, const std::vector<ResultRow>& rows);
// Throws ValidationError on a header mismatch or malformed line.
std::vector<ResultRow> ReadResultsCsv(std::istream& in);

struct SummaryCell {
  std::string method;
  std::size_t m = 0;
  std::size_t tau = 0;
  std::size_t num_seeds = 0;
  std::size_t num_diverged = 0;
  double mean_acc = 0.0;
  double std_acc = 0.0;  // sample standard deviation, 0 for one seed
};

// Final evaluated accuracy of each (method, m, tau, seed) run, aggregated over
// seeds, in first-appearance order.
std::vector<SummaryCell> Summarize(const std::vector<ResultRow>& rows);

// Methods as rows, (m, tau) as columns, cells "mean ± std" in percent.
void WriteSummaryTable(std::ostream& out, const std::vector<SummaryCell>& cells);
void WriteSummaryJson(std::ostream& out, const std::vector<SummaryCell>& cells);

}  // namespace fedotlab::exp

#endif  // FEDOTLAB_EXP_RESULTS_H_
