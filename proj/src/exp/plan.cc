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

#include "fedotlab/exp/plan.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fedotlab/errors.h"

namespace fedotlab::exp {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitList(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double ToDouble(const std::string& v) {
  std::size_t used = 0;
  const double x = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return x;
}

std::uint64_t ToUint(const std::string& v) {
  if (v.empty() || v[0] == '-') throw std::invalid_argument(v);
  std::size_t used = 0;
  const auto x = std::stoull(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return x;
}

bool ToBool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument(v);
}

template <typename T, typename F>
std::vector<T> ToList(const std::string& v, F convert) {
  std::vector<T> out;
  for (const auto& item : SplitList(v)) out.push_back(static_cast<T>(convert(item)));
  return out;
}

using Setter = std::function<void(ExperimentPlan&, const std::string&)>;

std::map<std::string, Setter> Setters() {
  std::map<std::string, Setter> s;
  s["plan.output_dir"] = [](ExperimentPlan& p, const std::string& v) { p.output_dir = v; };
  s["plan.seeds"] = [](ExperimentPlan& p, const std::string& v) {
    p.seeds = ToList<std::uint64_t>(v, ToUint);
  };
  s["plan.methods"] = [](ExperimentPlan& p, const std::string& v) {
    p.methods = ToList<sim::Method>(v, sim::ParseMethod);
  };
  s["plan.m"] = [](ExperimentPlan& p, const std::string& v) { p.ms = ToList<std::size_t>(v, ToUint); };
  s["plan.tau"] = [](ExperimentPlan& p, const std::string& v) {
    p.taus = ToList<std::size_t>(v, ToUint);
  };
  s["plan.timing"] = [](ExperimentPlan& p, const std::string& v) { p.timing = ToBool(v); };

  s["task.shift"] = [](ExperimentPlan& p, const std::string& v) {
    if (v == "affine") p.task.shift = shift::ShiftKind::kAffine;
    else if (v == "color") p.task.shift = shift::ShiftKind::kColor;
    else throw std::invalid_argument(v);
  };
  s["task.n"] = [](ExperimentPlan& p, const std::string& v) { p.task.n = ToUint(v); };
  s["task.d"] = [](ExperimentPlan& p, const std::string& v) { p.task.d = ToUint(v); };
  s["task.classes"] = [](ExperimentPlan& p, const std::string& v) { p.task.num_classes = ToUint(v); };
  s["task.separation"] = [](ExperimentPlan& p, const std::string& v) { p.task.separation = ToDouble(v); };
  s["task.noise"] = [](ExperimentPlan& p, const std::string& v) { p.task.noise = ToDouble(v); };
  s["task.sigma"] = [](ExperimentPlan& p, const std::string& v) { p.task.sigma = ToDouble(v); };
  s["task.m_test"] = [](ExperimentPlan& p, const std::string& v) { p.task.m_test = ToUint(v); };

  s["federation.T"] = [](ExperimentPlan& p, const std::string& v) { p.base.T = ToUint(v); };
  s["federation.eta1"] = [](ExperimentPlan& p, const std::string& v) { p.base.eta1 = ToDouble(v); };
  s["federation.eta2"] = [](ExperimentPlan& p, const std::string& v) { p.base.eta2 = ToDouble(v); };
  s["federation.objective"] = [](ExperimentPlan& p, const std::string& v) {
    if (v == "OneFedOT") p.base.objective.kind = loss::ObjectiveKind::kOneFedOT;
    else if (v == "TwoFedOTReg") p.base.objective.kind = loss::ObjectiveKind::kTwoFedOTReg;
    else throw std::invalid_argument(v);
  };
  s["federation.lambda"] = [](ExperimentPlan& p, const std::string& v) {
    p.base.objective.lambda = ToDouble(v);
  };
  s["federation.gamma"] = [](ExperimentPlan& p, const std::string& v) {
    p.base.objective.gamma = ToDouble(v);
  };
  s["federation.keep_psi_norm_term"] = [](ExperimentPlan& p, const std::string& v) {
    p.base.objective.keep_psi_norm_term = ToBool(v);
  };
  s["federation.batch"] = [](ExperimentPlan& p, const std::string& v) { p.base.batch = ToUint(v); };
  s["federation.k"] = [](ExperimentPlan& p, const std::string& v) {
    p.base.max_steps_per_min_step = ToUint(v);
  };
  s["federation.avg_mode"] = [](ExperimentPlan& p, const std::string& v) {
    p.base.avg_mode = sim::ParseAvgMode(v);
  };
  s["federation.classifier"] = [](ExperimentPlan& p, const std::string& v) {
    if (v == "linear") p.base.classifier = model::ClassifierKind::kLinear;
    else if (v == "mlp") p.base.classifier = model::ClassifierKind::kMlp;
    else throw std::invalid_argument(v);
  };
  s["federation.transport"] = [](ExperimentPlan& p, const std::string& v) {
    if (v == "affine") p.base.transport = model::TransportKind::kAffine;
    else if (v == "relu") p.base.transport = model::TransportKind::kRelu;
    else throw std::invalid_argument(v);
  };
  s["federation.potential"] = [](ExperimentPlan& p, const std::string& v) {
    if (v == "quadratic") p.base.potential = model::PotentialKind::kQuadratic;
    else if (v == "relu") p.base.potential = model::PotentialKind::kRelu;
    else throw std::invalid_argument(v);
  };
  s["federation.hidden"] = [](ExperimentPlan& p, const std::string& v) { p.base.hidden = ToUint(v); };
  s["federation.freeze_transport"] = [](ExperimentPlan& p, const std::string& v) {
    p.base.freeze_transport = ToBool(v);
  };
  s["federation.finetune_steps"] = [](ExperimentPlan& p, const std::string& v) {
    p.base.finetune_steps = ToUint(v);
  };
  s["federation.proxy_burst"] = [](ExperimentPlan& p, const std::string& v) {
    p.base.proxy_burst = ToUint(v);
  };
  s["federation.proxy_eta"] = [](ExperimentPlan& p, const std::string& v) {
    p.base.proxy_eta = ToDouble(v);
  };
  s["federation.eval_every"] = [](ExperimentPlan& p, const std::string& v) {
    p.base.eval_every = ToUint(v);
  };
  s["federation.threads"] = [](ExperimentPlan& p, const std::string& v) { p.base.threads = ToUint(v); };
  return s;
}

}  // namespace

std::vector<PlanEntry> ExperimentPlan::Expand() const {
  std::vector<PlanEntry> out;
  for (sim::Method method : methods) {
    for (std::size_t m : ms) {
      for (std::size_t tau : taus) {
        for (std::uint64_t seed : seeds) {
          PlanEntry e{base, m};
          e.config.method = method;
          e.config.m = m;
          e.config.tau = tau;
          e.config.seed = seed;
          e.config.n = task.n;
          out.push_back(e);
        }
      }
    }
  }
  return out;
}

void ExperimentPlan::Validate() const {
  if (seeds.empty() || methods.empty() || ms.empty() || taus.empty()) {
    throw ValidationError("plan: empty grid (seeds, methods, m and tau all need values)");
  }
  if (output_dir.empty()) throw ValidationError("plan: output_dir is empty");
  if (task.n == 0 || task.d == 0 || task.m_test == 0) throw ValidationError("task: n, d, m_test > 0");
  if (task.num_classes < 2) throw ValidationError("task: classes must be >= 2");
  if (task.shift == shift::ShiftKind::kAffine && task.num_classes > task.d) {
    throw ValidationError("task: classes must not exceed d");
  }
  if (!(task.noise > 0.0)) throw ValidationError("task: noise must be > 0");
  for (const auto& e : Expand()) {
    try {
      e.config.Validate();
    } catch (const ValidationError& err) {
      throw ValidationError(std::string("federation (m=") + std::to_string(e.m) +
                            ", tau=" + std::to_string(e.config.tau) + "): " + err.what());
    }
  }
}

ExperimentPlan ParsePlan(std::istream& in) {
  static const auto setters = Setters();
  ExperimentPlan plan;
  std::string line, section;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const std::string where = "plan line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(where + "unterminated section header");
      section = Trim(line.substr(1, line.size() - 2));
      if (section != "plan" && section != "task" && section != "federation") {
        throw ValidationError(where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where + "expected key = value");
    if (section.empty()) throw ValidationError(where + "key outside any section");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    const auto it = setters.find(section + "." + key);
    if (it == setters.end()) {
      throw ValidationError(where + "unknown key '" + key + "' in [" + section + "]");
    }
    try {
      it->second(plan, value);
    } catch (const ValidationError& e) {
      throw ValidationError(where + "field '" + key + "': " + e.what());
    } catch (const std::exception&) {
      throw ValidationError(where + "field '" + key + "': bad value '" + value + "'");
    }
  }
  plan.Validate();
  return plan;
}

ExperimentPlan LoadPlan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open plan file '" + path + "'");
  return ParsePlan(in);
}

shift::FederatedTask BuildTask(const TaskSettings& task, std::size_t m, std::uint64_t seed) {
  const numkit::RngStream data = numkit::RngStream::Named(seed, "data");
  shift::BaseTaskSpec b;
  b.d = task.d;
  b.num_classes = task.num_classes;
  b.class_cov_scale = task.noise;
  b.n_train_per_client = m;
  b.n_test_per_client = task.m_test;
  if (task.shift == shift::ShiftKind::kAffine) {
    b.class_means = shift::SimplexMeans(task.num_classes, task.d, task.separation);
  } else {
    // Intensity means: a 0.2 floor plus `separation` on one pixel per class,
    // wrapping when there are more classes than pixels.
    b.class_means = numkit::Matrix(task.num_classes, task.d, 0.2);
    for (std::size_t k = 0; k < task.num_classes; ++k) {
      b.class_means(k, k % task.d) += task.separation * (1.0 + static_cast<double>(k / task.d));
    }
  }
  return shift::MakeFederatedTask(
      b, shift::GenClientShifts(task.n, task.shift, task.d, task.sigma, data), data);
}

}  // namespace fedotlab::exp
