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

#ifndef FEDOTLAB_NUMKIT_MATRIX_H_
#define FEDOTLAB_NUMKIT_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fedotlab::numkit {

// Dense row-major matrix of doubles. Column vectors are rows x 1.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix Identity(std::size_t n);
  static Matrix Column(std::span<const double> values);
  static Matrix Column(std::initializer_list<double> values);
  static Matrix FromRows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool SameShape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool AllFinite() const;

  Matrix Transposed() const;

  // this += alpha * other
  Matrix& Axpy(double alpha, const Matrix& other);
  Matrix& Scale(double alpha);
  Matrix& operator+=(const Matrix& other) { return Axpy(1.0, other); }
  Matrix& operator-=(const Matrix& other) { return Axpy(-1.0, other); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double alpha, Matrix a);

Matrix MatMul(const Matrix& a, const Matrix& b);
// y = A x for x of length A.cols().
std::vector<double> MatVec(const Matrix& a, std::span<const double> x);
// y = A^T x for x of length A.rows().
std::vector<double> MatTVec(const Matrix& a, std::span<const double> x);
// A += alpha * u v^T
void AddOuter(Matrix& a, double alpha, std::span<const double> u, std::span<const double> v);

double Dot(std::span<const double> a, std::span<const double> b);
double SquaredNorm(std::span<const double> a);
double Norm(std::span<const double> a);
double FrobeniusNorm(const Matrix& a);
double MaxAbs(const Matrix& a);
// Largest |a - b| entry. Shapes must match.
double MaxAbsDiff(const Matrix& a, const Matrix& b);

}  // namespace fedotlab::numkit

#endif  // FEDOTLAB_NUMKIT_MATRIX_H_
