// Copyright 2026 The sjelo Authors.
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

// Value types shared by every module: the rating vector (a point on the
// zero-sum hyperplane) and the pairwise result matrix.

#ifndef SJELO_TYPES_HPP_
#define SJELO_TYPES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sjelo {

// Per-component slack allowed on the zero-sum constraint. Scales with the
// magnitude of the vector, since the rounding error of a sum does too.
inline double SumTolerance(std::span<const double> values) {
  double magnitude = 1.0;
  for (double v : values) magnitude = std::max(magnitude, std::abs(v));
  return static_cast<double>(values.size()) * 1e-12 * magnitude;
}

inline double L1Norm(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += std::abs(v);
  return total;
}

inline double L1Distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("L1Distance: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total;
}

// Subtracts the arithmetic mean in place.
inline void Center(std::span<double> values) {
  if (values.empty()) return;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                      static_cast<double>(values.size());
  for (double& v : values) v -= mean;
}

// A rating of n >= 2 players on the internal scale. Components sum to zero
// up to SumTolerance.
class Rating {
 public:
  explicit Rating(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
      throw std::invalid_argument("Rating: need at least two players");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("Rating: non-finite component");
      }
    }
    const double sum = std::accumulate(values_.begin(), values_.end(), 0.0);
    if (std::abs(sum) > SumTolerance(values_)) {
      throw std::invalid_argument("Rating: components do not sum to zero (" +
                                  std::to_string(sum) + ")");
    }
  }

  static Rating Zero(std::size_t n) {
    return Rating(std::vector<double>(n, 0.0));
  }

  // Projects an arbitrary vector onto the zero-sum hyperplane.
  static Rating Centered(std::vector<double> values) {
    Center(values);
    return Rating(std::move(values));
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const Rating&, const Rating&) = default;

 private:
  std::vector<double> values_;
};

inline double L1Distance(const Rating& a, const Rating& b) {
  return L1Distance(a.values(), b.values());
}

// p(i, j) is the number of points player i gained against player j. Cells
// are finite and non-negative, the diagonal is zero.
class ResultMatrix {
 public:
  ResultMatrix() = default;
  explicit ResultMatrix(std::size_t n) : n_(n), cells_(n * n, 0.0) {}

  // Row-major cells.
  ResultMatrix(std::size_t n, std::vector<double> cells)
      : n_(n), cells_(std::move(cells)) {
    if (cells_.size() != n_ * n_) {
      throw std::invalid_argument("ResultMatrix: expected " +
                                  std::to_string(n_ * n_) + " cells");
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) CheckCell(i, j, (*this)(i, j));
    }
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return cells_[i * n_ + j];
  }
  std::span<const double> cells() const { return cells_; }

  void Set(std::size_t i, std::size_t j, double points) {
    CheckIndex(i, j);
    CheckCell(i, j, points);
    cells_[i * n_ + j] = points;
  }

  void Add(std::size_t i, std::size_t j, double points) {
    CheckIndex(i, j);
    CheckCell(i, j, points);
    Set(i, j, (*this)(i, j) + points);
  }

  // Sum of all cells.
  double L1Norm() const {
    return std::accumulate(cells_.begin(), cells_.end(), 0.0);
  }

  // max over pairs of p(i, j) + p(j, i).
  double MaxPairTotal() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        best = std::max(best, (*this)(i, j) + (*this)(j, i));
      }
    }
    return best;
  }

  // Points contested by player i: sum over j of p(i, j) + p(j, i).
  double PointsContested(std::size_t i) const {
    double total = 0.0;
    for (std::size_t j = 0; j < n_; ++j) total += (*this)(i, j) + (*this)(j, i);
    return total;
  }

  bool IsZero() const {
    return std::all_of(cells_.begin(), cells_.end(),
                       [](double v) { return v == 0.0; });
  }

  ResultMatrix Scaled(double factor) const {
    if (!(factor >= 0.0) || !std::isfinite(factor)) {
      throw std::invalid_argument("ResultMatrix::Scaled: bad factor");
    }
    ResultMatrix out = *this;
    for (double& v : out.cells_) v *= factor;
    return out;
  }

  ResultMatrix Transposed() const {
    ResultMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        out.cells_[j * n_ + i] = (*this)(i, j);
      }
    }
    return out;
  }

  // Relabels player i as perm[i].
  ResultMatrix Permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) {
      throw std::invalid_argument("ResultMatrix::Permuted: dimension mismatch");
    }
    ResultMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        out.cells_[perm[i] * n_ + perm[j]] = (*this)(i, j);
      }
    }
    return out;
  }

  ResultMatrix& operator+=(const ResultMatrix& other) {
    if (other.n_ != n_) {
      throw std::invalid_argument("ResultMatrix: dimension mismatch");
    }
    for (std::size_t c = 0; c < cells_.size(); ++c) cells_[c] += other.cells_[c];
    return *this;
  }

  friend ResultMatrix operator+(ResultMatrix a, const ResultMatrix& b) {
    a += b;
    return a;
  }

  friend bool operator==(const ResultMatrix&, const ResultMatrix&) = default;

 private:
  void CheckIndex(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) {
      throw std::out_of_range("ResultMatrix: index out of range");
    }
  }

  static void CheckCell(std::size_t i, std::size_t j, double points) {
    if (!std::isfinite(points) || points < 0.0) {
      throw std::invalid_argument(
          "ResultMatrix: points must be finite and non-negative");
    }
    if (i == j && points != 0.0) {
      throw std::invalid_argument("ResultMatrix: diagonal must be zero");
    }
  }

  std::size_t n_ = 0;
  std::vector<double> cells_;
};

}  // namespace sjelo

#endif  // SJELO_TYPES_HPP_
