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

#ifndef FEDOTLAB_MODEL_MODEL_ZOO_H_
#define FEDOTLAB_MODEL_MODEL_ZOO_H_

// Classifier, transport-map and potential families with analytic gradients.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fedotlab/numkit/matrix.h"
#include "fedotlab/numkit/rng.h"

namespace fedotlab::model {

using numkit::Matrix;

// Ordered named tensors. Vectors are stored as k x 1 matrices.
struct ParamSet {
  std::vector<std::string> names;
  std::vector<Matrix> tensors;

  void Add(std::string name, Matrix value);
  std::size_t NumValues() const;
  ParamSet ZerosLike() const;
  ParamSet& Axpy(double alpha, const ParamSet& other);
  ParamSet& Scale(double alpha);
  double SquaredNorm() const;
  bool AllFinite() const;
  std::vector<double> Flatten() const;
  void Unflatten(std::span<const double> flat);

  friend bool operator==(const ParamSet&, const ParamSet&) = default;
};

double MaxAbsDiff(const ParamSet& a, const ParamSet& b);

enum class ClassifierKind { kLinear, kMlp };
enum class TransportKind { kAffine, kRelu };
enum class PotentialKind { kQuadratic, kRelu };

// Linear: {W (K x d), b}. MLP: {W1 (h x d), b1, W2 (K x h), b2}.
struct Classifier {
  ClassifierKind kind = ClassifierKind::kLinear;
  ParamSet params;
};

// Affine: psi(x) = Theta1 x + theta0, tensors {Theta1, theta0}.
// ReLU: psi(x) = ReLU(Theta2 x + theta1) + theta0, tensors {Theta2, theta1, theta0}.
struct Transport {
  TransportKind kind = TransportKind::kAffine;
  ParamSet params;
};

// Quadratic: phi_i(x) = 1/2 x^T V_i x + v1_i^T x. `shared` is empty and head i
// holds {V, v1}. ReLU: phi_i(x) = v2_i^T ReLU(V1 x + v0); `shared` holds
// {V1, v0} and head i holds {v2}. Heads sum to zero across clients.
struct Potential {
  PotentialKind kind = PotentialKind::kQuadratic;
  ParamSet shared;
  std::vector<ParamSet> heads;
};

struct ParamBundle {
  Classifier w;
  std::vector<Transport> theta;
  Potential potential;

  std::size_t num_clients() const { return theta.size(); }
};

// Entries ~ Unif[-0.01, 0.01].
Classifier MakeClassifier(ClassifierKind kind, std::size_t num_classes, std::size_t d,
                          std::size_t hidden, numkit::RngStream& rng);
Transport MakeIdentityTransport(TransportKind kind, std::size_t d);
Potential MakeZeroPotential(PotentialKind kind, std::size_t num_clients, std::size_t d,
                            std::size_t hidden);
// Hidden widths default to 2d when zero.
ParamBundle MakeBundle(ClassifierKind ck, TransportKind tk, PotentialKind pk,
                       std::size_t num_clients, std::size_t d, std::size_t num_classes,
                       numkit::RngStream& rng, std::size_t hidden = 0);

std::vector<double> ClassifierForward(const Classifier& c, std::span<const double> x);
// Accumulates dL/dparams into *grad (if set) and writes dL/dx into *dx (if set).
void ClassifierBackward(const Classifier& c, std::span<const double> x,
                        std::span<const double> dlogits, ParamSet* grad, std::vector<double>* dx);

std::vector<double> TransportForward(const Transport& t, std::span<const double> x);
void TransportBackward(const Transport& t, std::span<const double> x, std::span<const double> dy,
                       ParamSet* grad, std::vector<double>* dx);

double PotentialForward(PotentialKind kind, const ParamSet& shared, const ParamSet& head,
                        std::span<const double> x);
double PotentialForward(const Potential& p, std::size_t i, std::span<const double> x);
// Accumulates scale * d phi / d params; writes scale * d phi / dx into *dx.
void PotentialBackward(PotentialKind kind, const ParamSet& shared, const ParamSet& head,
                       std::span<const double> x, double scale, ParamSet* grad_shared,
                       ParamSet* grad_head, std::vector<double>* dx);

// -log softmax(logits)_y; writes softmax - onehot into *dlogits if set.
double CrossEntropy(std::span<const double> logits, int label, std::vector<double>* dlogits);
// Lowest index among ties.
int ArgMax(std::span<const double> logits);

// Largest norm of the across-client sum of any head tensor.
double ZeroSumResidual(const Potential& p);

}  // namespace fedotlab::model

#endif  // FEDOTLAB_MODEL_MODEL_ZOO_H_
