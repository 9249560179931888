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

#include "fedotlab/model/model_zoo.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fedotlab/errors.h"

namespace fedotlab::model {
namespace {

void CheckFinite(std::span<const double> v, const char* layer) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericalError(std::string("non-finite value in ") + layer);
  }
}

// y = A x + b
std::vector<double> Affine(const Matrix& a, const Matrix& b, std::span<const double> x) {
  if (x.size() != a.cols()) throw ArgumentError("input dimension mismatch");
  std::vector<double> y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double s = b[r];
    const auto row = a.row(r);
    for (std::size_t c = 0; c < x.size(); ++c) s += row[c] * x[c];
    y[r] = s;
  }
  return y;
}

void Relu(std::vector<double>& v) {
  for (auto& x : v) x = x > 0.0 ? x : 0.0;
}

// Accumulates dA += dy x^T, db += dy and optionally dx = A^T dy.
void AffineBackward(const Matrix& a, std::span<const double> x, std::span<const double> dy,
                    Matrix* da, Matrix* db, std::vector<double>* dx) {
  if (da != nullptr) numkit::AddOuter(*da, 1.0, dy, x);
  if (db != nullptr) {
    for (std::size_t r = 0; r < dy.size(); ++r) (*db)[r] += dy[r];
  }
  if (dx != nullptr) *dx = numkit::MatTVec(a, dy);
}

}  // namespace

void ParamSet::Add(std::string name, Matrix value) {
  names.push_back(std::move(name));
  tensors.push_back(std::move(value));
}

std::size_t ParamSet::NumValues() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

ParamSet ParamSet::ZerosLike() const {
  ParamSet z;
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    z.Add(names[k], Matrix(tensors[k].rows(), tensors[k].cols()));
  }
  return z;
}

ParamSet& ParamSet::Axpy(double alpha, const ParamSet& other) {
  if (other.tensors.size() != tensors.size()) throw ArgumentError("ParamSet::Axpy: layout mismatch");
  for (std::size_t k = 0; k < tensors.size(); ++k) tensors[k].Axpy(alpha, other.tensors[k]);
  return *this;
}

ParamSet& ParamSet::Scale(double alpha) {
  for (auto& t : tensors) t.Scale(alpha);
  return *this;
}

double ParamSet::SquaredNorm() const {
  double s = 0.0;
  for (const auto& t : tensors) s += numkit::SquaredNorm(t.values());
  return s;
}

bool ParamSet::AllFinite() const {
  return std::all_of(tensors.begin(), tensors.end(), [](const Matrix& t) { return t.AllFinite(); });
}

std::vector<double> ParamSet::Flatten() const {
  std::vector<double> flat;
  flat.reserve(NumValues());
  for (const auto& t : tensors) flat.insert(flat.end(), t.values().begin(), t.values().end());
  return flat;
}

void ParamSet::Unflatten(std::span<const double> flat) {
  if (flat.size() != NumValues()) throw ArgumentError("ParamSet::Unflatten: size mismatch");
  std::size_t off = 0;
  for (auto& t : tensors) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(off), t.size(), t.values().begin());
    off += t.size();
  }
}

double MaxAbsDiff(const ParamSet& a, const ParamSet& b) {
  if (a.tensors.size() != b.tensors.size()) throw ArgumentError("MaxAbsDiff: layout mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.tensors.size(); ++k) {
    m = std::max(m, numkit::MaxAbsDiff(a.tensors[k], b.tensors[k]));
  }
  return m;
}

Classifier MakeClassifier(ClassifierKind kind, std::size_t num_classes, std::size_t d,
                          std::size_t hidden, numkit::RngStream& rng) {
  auto noise = [&](std::size_t r, std::size_t c) {
    Matrix m(r, c);
    for (auto& v : m.values()) v = rng.Uniform(-0.01, 0.01);
    return m;
  };
  Classifier c{kind, {}};
  if (kind == ClassifierKind::kLinear) {
    c.params.Add("W", noise(num_classes, d));
    c.params.Add("b", noise(num_classes, 1));
  } else {
    if (hidden == 0) hidden = 2 * d;
    c.params.Add("W1", noise(hidden, d));
    c.params.Add("b1", noise(hidden, 1));
    c.params.Add("W2", noise(num_classes, hidden));
    c.params.Add("b2", noise(num_classes, 1));
  }
  return c;
}

Transport MakeIdentityTransport(TransportKind kind, std::size_t d) {
  Transport t{kind, {}};
  if (kind == TransportKind::kAffine) {
    t.params.Add("Theta1", Matrix::Identity(d));
    t.params.Add("theta0", Matrix(d, 1));
  } else {
    // ReLU(x) + 0 is the identity only on the nonnegative orthant.
    t.params.Add("Theta2", Matrix::Identity(d));
    t.params.Add("theta1", Matrix(d, 1));
    t.params.Add("theta0", Matrix(d, 1));
  }
  return t;
}

Potential MakeZeroPotential(PotentialKind kind, std::size_t num_clients, std::size_t d,
                            std::size_t hidden) {
  Potential p{kind, {}, {}};
  ParamSet head;
  if (kind == PotentialKind::kQuadratic) {
    head.Add("V", Matrix(d, d));
    head.Add("v1", Matrix(d, 1));
  } else {
    if (hidden == 0) hidden = 2 * d;
    p.shared.Add("V1", Matrix(hidden, d));
    p.shared.Add("v0", Matrix(hidden, 1));
    head.Add("v2", Matrix(hidden, 1));
  }
  p.heads.assign(num_clients, head);
  return p;
}

ParamBundle MakeBundle(ClassifierKind ck, TransportKind tk, PotentialKind pk,
                       std::size_t num_clients, std::size_t d, std::size_t num_classes,
                       numkit::RngStream& rng, std::size_t hidden) {
  ParamBundle b;
  b.w = MakeClassifier(ck, num_classes, d, hidden, rng);
  b.theta.assign(num_clients, MakeIdentityTransport(tk, d));
  b.potential = MakeZeroPotential(pk, num_clients, d, hidden);
  return b;
}

std::vector<double> ClassifierForward(const Classifier& c, std::span<const double> x) {
  const auto& t = c.params.tensors;
  if (c.kind == ClassifierKind::kLinear) {
    auto y = Affine(t[0], t[1], x);
    CheckFinite(y, "classifier output layer");
    return y;
  }
  auto h = Affine(t[0], t[1], x);
  CheckFinite(h, "classifier hidden layer");
  Relu(h);
  auto y = Affine(t[2], t[3], h);
  CheckFinite(y, "classifier output layer");
  return y;
}

void ClassifierBackward(const Classifier& c, std::span<const double> x,
                        std::span<const double> dlogits, ParamSet* grad, std::vector<double>* dx) {
  const auto& t = c.params.tensors;
  auto g = [&](std::size_t k) { return grad ? &grad->tensors[k] : nullptr; };
  if (c.kind == ClassifierKind::kLinear) {
    AffineBackward(t[0], x, dlogits, g(0), g(1), dx);
    return;
  }
  auto pre = Affine(t[0], t[1], x);
  std::vector<double> h = pre;
  Relu(h);
  std::vector<double> dh;
  AffineBackward(t[2], h, dlogits, g(2), g(3), &dh);
  for (std::size_t k = 0; k < dh.size(); ++k) {
    if (!(pre[k] > 0.0)) dh[k] = 0.0;
  }
  AffineBackward(t[0], x, dh, g(0), g(1), dx);
}

std::vector<double> TransportForward(const Transport& tr, std::span<const double> x) {
  const auto& t = tr.params.tensors;
  if (tr.kind == TransportKind::kAffine) {
    auto y = Affine(t[0], t[1], x);
    CheckFinite(y, "transport map");
    return y;
  }
  auto y = Affine(t[0], t[1], x);
  Relu(y);
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += t[2][k];
  CheckFinite(y, "transport map");
  return y;
}

void TransportBackward(const Transport& tr, std::span<const double> x, std::span<const double> dy,
                       ParamSet* grad, std::vector<double>* dx) {
  const auto& t = tr.params.tensors;
  auto g = [&](std::size_t k) { return grad ? &grad->tensors[k] : nullptr; };
  if (tr.kind == TransportKind::kAffine) {
    AffineBackward(t[0], x, dy, g(0), g(1), dx);
    return;
  }
  if (grad != nullptr) {
    for (std::size_t k = 0; k < dy.size(); ++k) grad->tensors[2][k] += dy[k];
  }
  const auto pre = Affine(t[0], t[1], x);
  std::vector<double> da(dy.begin(), dy.end());
  for (std::size_t k = 0; k < da.size(); ++k) {
    if (!(pre[k] > 0.0)) da[k] = 0.0;
  }
  AffineBackward(t[0], x, da, g(0), g(1), dx);
}

double PotentialForward(PotentialKind kind, const ParamSet& shared, const ParamSet& head,
                        std::span<const double> x) {
  double v = 0.0;
  if (kind == PotentialKind::kQuadratic) {
    const Matrix& vm = head.tensors[0];
    if (x.size() != vm.cols()) throw ArgumentError("potential: input dimension mismatch");
    for (std::size_t r = 0; r < x.size(); ++r) {
      v += (0.5 * numkit::Dot(vm.row(r), x) + head.tensors[1][r]) * x[r];
    }
  } else {
    auto h = Affine(shared.tensors[0], shared.tensors[1], x);
    Relu(h);
    v = numkit::Dot(h, head.tensors[0].values());
  }
  if (!std::isfinite(v)) throw NumericalError("non-finite value in potential");
  return v;
}

double PotentialForward(const Potential& p, std::size_t i, std::span<const double> x) {
  if (i >= p.heads.size()) throw ArgumentError("potential: client index out of range");
  return PotentialForward(p.kind, p.shared, p.heads[i], x);
}

void PotentialBackward(PotentialKind kind, const ParamSet& shared, const ParamSet& head,
                       std::span<const double> x, double scale, ParamSet* grad_shared,
                       ParamSet* grad_head, std::vector<double>* dx) {
  if (kind == PotentialKind::kQuadratic) {
    const Matrix& vm = head.tensors[0];
    if (grad_head != nullptr) {
      numkit::AddOuter(grad_head->tensors[0], 0.5 * scale, x, x);
      for (std::size_t r = 0; r < x.size(); ++r) grad_head->tensors[1][r] += scale * x[r];
    }
    if (dx != nullptr) {
      // Only the symmetric part of V acts on x.
      const auto vx = numkit::MatVec(vm, x);
      const auto vtx = numkit::MatTVec(vm, x);
      dx->resize(x.size());
      for (std::size_t r = 0; r < x.size(); ++r) {
        (*dx)[r] = scale * (0.5 * (vx[r] + vtx[r]) + head.tensors[1][r]);
      }
    }
    return;
  }
  const auto pre = Affine(shared.tensors[0], shared.tensors[1], x);
  const Matrix& v2 = head.tensors[0];
  std::vector<double> da(pre.size());
  for (std::size_t k = 0; k < pre.size(); ++k) {
    const bool on = pre[k] > 0.0;
    if (grad_head != nullptr && on) grad_head->tensors[0][k] += scale * pre[k];
    da[k] = on ? scale * v2[k] : 0.0;
  }
  AffineBackward(shared.tensors[0], x, da, grad_shared ? &grad_shared->tensors[0] : nullptr,
                 grad_shared ? &grad_shared->tensors[1] : nullptr, dx);
}

double CrossEntropy(std::span<const double> logits, int label, std::vector<double>* dlogits) {
  if (label < 0 || static_cast<std::size_t>(label) >= logits.size()) {
    throw ArgumentError("CrossEntropy: label out of range");
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - top);
  const double log_z = top + std::log(z);
  if (dlogits != nullptr) {
    dlogits->resize(logits.size());
    for (std::size_t k = 0; k < logits.size(); ++k) (*dlogits)[k] = std::exp(logits[k] - log_z);
    (*dlogits)[static_cast<std::size_t>(label)] -= 1.0;
  }
  return log_z - logits[static_cast<std::size_t>(label)];
}

int ArgMax(std::span<const double> logits) {
  return static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}

double ZeroSumResidual(const Potential& p) {
  if (p.heads.empty()) return 0.0;
  ParamSet sum = p.heads[0].ZerosLike();
  for (const auto& h : p.heads) sum.Axpy(1.0, h);
  double worst = 0.0;
  for (const auto& t : sum.tensors) worst = std::max(worst, numkit::FrobeniusNorm(t));
  return worst;
}

}  // namespace fedotlab::model
