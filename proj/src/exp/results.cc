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

#include "fedotlab/exp/results.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "fedotlab/errors.h"

namespace fedotlab::exp {

const char* const kResultColumns =
    "method,m,tau,seed,round,avg_test_acc,classification_term,transport_dual_term,reg_term,"
    "total,zero_sum_residual,stationarity_proxy,diverged,wall_ms";

namespace {

constexpr std::size_t kNumColumns = 14;

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseDouble(const std::string& s) {
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw ValidationError("bad number '" + s + "'");
  }
  return x;
}

std::uint64_t ParseUint(const std::string& s) {
  std::uint64_t x = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw ValidationError("bad integer '" + s + "'");
  }
  return x;
}

std::string Percent(double mean, double sd) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f ± %.1f", 100.0 * mean, 100.0 * sd);
  return buf;
}

}  // namespace

std::string FormatDouble(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

ResultRow RowFromMetrics(const sim::FederationConfig& config, const sim::RoundMetrics& met,
                         double wall_ms) {
  ResultRow r;
  r.method = sim::MethodName(config.method);
  r.m = config.m;
  r.tau = config.tau;
  r.seed = config.seed;
  r.round = met.round;
  r.evaluated = met.evaluated;
  r.avg_test_acc = met.avg_test_acc;
  r.classification_term = met.classification_term;
  r.transport_dual_term = met.transport_dual_term;
  r.reg_term = met.reg_term;
  r.total = met.total;
  r.zero_sum_residual = met.zero_sum_residual;
  r.stationarity_proxy = met.stationarity_proxy;
  r.diverged = met.diverged;
  r.wall_ms = wall_ms;
  return r;
}

void WriteResultsCsv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultColumns << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << r.m << ',' << r.tau << ',' << r.seed << ',' << r.round;
    const double metrics[] = {r.avg_test_acc,     r.classification_term, r.transport_dual_term,
                              r.reg_term,         r.total,               r.zero_sum_residual,
                              r.stationarity_proxy};
    for (double v : metrics) {
      out << ',';
      if (r.evaluated) out << FormatDouble(v);
    }
    out << ',' << (r.diverged ? 1 : 0) << ',' << FormatDouble(r.wall_ms) << '\n';
  }
}

std::vector<ResultRow> ReadResultsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultColumns) {
    throw ValidationError("results: header does not match the expected column set");
  }
  std::vector<ResultRow> rows;
  for (int lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    const auto cells = SplitCsv(line);
    if (cells.size() != kNumColumns) {
      throw ValidationError("results line " + std::to_string(lineno) + ": expected " +
                            std::to_string(kNumColumns) + " fields");
    }
    try {
      ResultRow r;
      r.method = cells[0];
      r.m = ParseUint(cells[1]);
      r.tau = ParseUint(cells[2]);
      r.seed = ParseUint(cells[3]);
      r.round = ParseUint(cells[4]);
      r.evaluated = !cells[5].empty();
      if (r.evaluated) {
        r.avg_test_acc = ParseDouble(cells[5]);
        r.classification_term = ParseDouble(cells[6]);
        r.transport_dual_term = ParseDouble(cells[7]);
        r.reg_term = ParseDouble(cells[8]);
        r.total = ParseDouble(cells[9]);
        r.zero_sum_residual = ParseDouble(cells[10]);
        r.stationarity_proxy = ParseDouble(cells[11]);
      }
      r.diverged = cells[12] == "1";
      r.wall_ms = ParseDouble(cells[13]);
      rows.push_back(r);
    } catch (const ValidationError& e) {
      throw ValidationError("results line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<SummaryCell> Summarize(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, std::size_t, std::size_t>;
  struct Run {
    double acc = 0.0;
    bool has_acc = false;
    bool diverged = false;
  };
  std::vector<Key> order;
  std::map<Key, std::map<std::uint64_t, Run>> runs;
  for (const auto& r : rows) {
    const Key key{r.method, r.m, r.tau};
    if (!runs.count(key)) order.push_back(key);
    Run& run = runs[key][r.seed];
    if (r.evaluated) {
      run.acc = r.avg_test_acc;
      run.has_acc = true;
    }
    run.diverged = run.diverged || r.diverged;
  }
  std::vector<SummaryCell> out;
  for (const auto& key : order) {
    SummaryCell c;
    std::tie(c.method, c.m, c.tau) = key;
    std::vector<double> accs;
    for (const auto& [seed, run] : runs[key]) {
      if (run.diverged) ++c.num_diverged;
      if (run.has_acc) accs.push_back(run.acc);
    }
    c.num_seeds = runs[key].size();
    if (!accs.empty()) {
      double sum = 0.0;
      for (double a : accs) sum += a;
      c.mean_acc = sum / static_cast<double>(accs.size());
      if (accs.size() > 1) {
        double ss = 0.0;
        for (double a : accs) ss += (a - c.mean_acc) * (a - c.mean_acc);
        c.std_acc = std::sqrt(ss / static_cast<double>(accs.size() - 1));
      }
    }
    out.push_back(c);
  }
  return out;
}

void WriteSummaryTable(std::ostream& out, const std::vector<SummaryCell>& cells) {
  std::vector<std::string> methods;
  std::vector<std::pair<std::size_t, std::size_t>> columns;
  std::map<std::tuple<std::string, std::size_t, std::size_t>, const SummaryCell*> lookup;
  for (const auto& c : cells) {
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) {
      methods.push_back(c.method);
    }
    const std::pair<std::size_t, std::size_t> col{c.m, c.tau};
    if (std::find(columns.begin(), columns.end(), col) == columns.end()) columns.push_back(col);
    lookup[{c.method, c.m, c.tau}] = &c;
  }
  out << "| method |";
  for (const auto& [m, tau] : columns) out << " m=" << m << " tau=" << tau << " |";
  out << "\n|---|";
  for (std::size_t j = 0; j < columns.size(); ++j) out << "---|";
  out << '\n';
  for (const auto& method : methods) {
    out << "| " << method << " |";
    for (const auto& [m, tau] : columns) {
      const auto it = lookup.find({method, m, tau});
      if (it == lookup.end()) {
        out << " - |";
        continue;
      }
      out << ' ' << Percent(it->second->mean_acc, it->second->std_acc);
      if (it->second->num_diverged > 0) out << " (" << it->second->num_diverged << " diverged)";
      out << " |";
    }
    out << '\n';
  }
}

void WriteSummaryJson(std::ostream& out, const std::vector<SummaryCell>& cells) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    j.push_back({{"method", c.method},
                 {"m", c.m},
                 {"tau", c.tau},
                 {"seeds", c.num_seeds},
                 {"diverged", c.num_diverged},
                 {"mean_acc", c.mean_acc},
                 {"std_acc", c.std_acc}});
  }
  out << j.dump(2) << '\n';
}

}  // namespace fedotlab::exp
