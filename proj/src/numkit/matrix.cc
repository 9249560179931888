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

#include "fedotlab/numkit/matrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedotlab/errors.h"

namespace fedotlab::numkit {
namespace {

void RequireSameShape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.SameShape(b)) {
    throw ArgumentError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) +
                        "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                        "x" + std::to_string(b.cols()));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw ArgumentError("Matrix: value count " + std::to_string(values_.size()) +
                        " does not match shape " + std::to_string(rows) + "x" +
                        std::to_string(cols));
  }
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::Column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::Column(std::initializer_list<double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values));
}

Matrix Matrix::FromRows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  values.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ArgumentError("Matrix::FromRows: ragged rows");
    values.insert(values.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(values));
}

bool Matrix::AllFinite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Matrix Matrix::Transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix& Matrix::Axpy(double alpha, const Matrix& other) {
  RequireSameShape(*this, other, "Axpy");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += alpha * other.values_[k];
  return *this;
}

Matrix& Matrix::Scale(double alpha) {
  for (double& v : values_) v *= alpha;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double alpha, Matrix a) { return a.Scale(alpha); }

Matrix MatMul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ArgumentError("MatMul: inner dimension mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

std::vector<double> MatVec(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw ArgumentError("MatVec: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = Dot(a.row(i), x);
  return y;
}

std::vector<double> MatTVec(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.rows()) throw ArgumentError("MatTVec: dimension mismatch");
  std::vector<double> y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += row[j] * x[i];
  }
  return y;
}

void AddOuter(Matrix& a, double alpha, std::span<const double> u, std::span<const double> v) {
  if (u.size() != a.rows() || v.size() != a.cols()) {
    throw ArgumentError("AddOuter: dimension mismatch");
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double s = alpha * u[i];
    if (s == 0.0) continue;
    auto row = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) row[j] += s * v[j];
  }
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("Dot: length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double SquaredNorm(std::span<const double> a) { return Dot(a, a); }
double Norm(std::span<const double> a) { return std::sqrt(SquaredNorm(a)); }
double FrobeniusNorm(const Matrix& a) { return Norm(a.values()); }

double MaxAbs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double MaxAbsDiff(const Matrix& a, const Matrix& b) {
  RequireSameShape(a, b, "MaxAbsDiff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace fedotlab::numkit
