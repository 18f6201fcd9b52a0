/*
 * Copyright 2026 The Sensbench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SENSBENCH_MATRIX_H_
#define SENSBENCH_MATRIX_H_

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace sensbench {

// Non-owning row-major view of a [rows][cols] block of doubles. Window inputs
// are views straight into the panel tensor, so no copy is made until a method
// needs to perturb them.
class MatrixView {
 public:
  MatrixView() = default;
  MatrixView(std::span<const double> data, std::size_t rows, std::size_t cols)
      : data_(data), rows_(rows), cols_(cols) {
    assert(data.size() == rows * cols);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> data() const { return data_; }
  std::span<const double> row(std::size_t r) const {
    return data_.subspan(r * cols_, cols_);
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

 private:
  std::span<const double> data_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  explicit Matrix(MatrixView view)
      : rows_(view.rows()),
        cols_(view.cols()),
        data_(view.data().begin(), view.data().end()) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  MatrixView view() const { return MatrixView(data_, rows_, cols_); }
  operator MatrixView() const { return view(); }  // NOLINT

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace sensbench

#endif  // SENSBENCH_MATRIX_H_
