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

// The classical Elo map and the damped map whose fixed points are the
// self-justifying ratings.
//
// For ratings x, results p and dynamising parameter k, the classical map is
//
//   elo(x, p)_i = k * sum_j (p_ij - (p_ij + p_ji) / (1 + exp(x_j - x_i)))
//
// i.e. points gained minus points expected under the logistic model. The
// damped map phi_xi(x) = xi * x + (1 - xi) * elo(x, p) has the same fixed
// points for every 0 <= xi < 1 and is an L1 contraction with factor xi once
// xi >= G / (G + 1), G = k (n - 1) / 4 * max_ij (p_ij + p_ji).

#ifndef SJELO_ELO_MAP_HPP_
#define SJELO_ELO_MAP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "sjelo/types.hpp"

namespace sjelo {

// Logistic expectation 1 / (1 + exp(-gap)) without overflow for any gap.
inline double Expectation(double gap) {
  const double z = std::exp(-std::abs(gap));
  return gap >= 0.0 ? 1.0 / (1.0 + z) : z / (1.0 + z);
}

namespace detail {

inline void CheckK(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("dynamising parameter k must be positive");
  }
}

inline void CheckDimensions(std::size_t rating_size, const ResultMatrix& p) {
  if (rating_size != p.size()) {
    throw std::invalid_argument("rating and result matrix differ in size");
  }
}

// Unchecked kernel: writes elo(x, p) into `out`. Each pair is visited once
// and its adjustment u_ij is applied with opposite signs to i and j.
inline void EloMapInto(std::span<const double> x, const ResultMatrix& p,
                       double k, std::span<double> out) {
  const std::size_t n = p.size();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double won = p(i, j);
      const double lost = p(j, i);
      if (won == 0.0 && lost == 0.0) continue;
      // z = exp(-|x_i - x_j|); the two expectations share it.
      const double gap = x[i] - x[j];
      const double z = std::exp(-std::abs(gap));
      const double favourite = 1.0 / (1.0 + z);
      const double underdog = z / (1.0 + z);
      const double expected_i = gap >= 0.0 ? favourite : underdog;
      const double expected_j = gap >= 0.0 ? underdog : favourite;
      // p_ij - (p_ij + p_ji) E_ij  ==  p_ij E_ji - p_ji E_ij
      const double u = k * (won * expected_j - lost * expected_i);
      out[i] += u;
      out[j] -= u;
    }
  }
}

}  // namespace detail

inline Rating ClassicalEloMap(const Rating& x, const ResultMatrix& p,
                              double k) {
  detail::CheckK(k);
  detail::CheckDimensions(x.size(), p);
  std::vector<double> out(x.size());
  detail::EloMapInto(x.values(), p, k, out);
  return Rating::Centered(std::move(out));
}

// ||x - elo(x, p)||_1. Bounds the L1 distance from x to the self-justifying
// rating for (p, k).
inline double Residual(const Rating& x, const ResultMatrix& p, double k) {
  return L1Distance(x, ClassicalEloMap(x, p, k));
}

struct ContractionBound {
  double g = 0.0;        // k (n - 1) / 4 * max_ij (p_ij + p_ji)
  double xi_star = 0.0;  // g / (g + 1), kept strictly below one
};

inline ContractionBound ComputeContractionBound(const ResultMatrix& p,
                                                double k) {
  detail::CheckK(k);
  ContractionBound bound;
  if (p.size() < 2) return bound;
  bound.g = k * static_cast<double>(p.size() - 1) / 4.0 * p.MaxPairTotal();
  // 1 / (1 + 1/g) rather than g / (g + 1) so that g = inf gives 1.
  bound.xi_star = std::min(1.0 / (1.0 + 1.0 / bound.g),
                           std::nextafter(1.0, 0.0));
  return bound;
}

// phi_xi(x) = xi * x + (1 - xi) * elo(x, p).
inline Rating PhiStep(const Rating& x, const ResultMatrix& p, double k,
                      double xi) {
  if (!(xi >= 0.0 && xi < 1.0)) {
    throw std::invalid_argument("PhiStep: xi must lie in [0, 1)");
  }
  const Rating image = ClassicalEloMap(x, p, k);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = xi * x[i] + (1.0 - xi) * image[i];
  }
  return Rating(std::move(out));
}

// Limit of elo_k(p) / k as k -> 0: half the net points of each player.
inline Rating SmallKSlope(const ResultMatrix& p) {
  const std::size_t n = p.size();
  std::vector<double> slope(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) slope[i] += (p(i, j) - p(j, i)) / 2.0;
  }
  return Rating(std::move(slope));
}

}  // namespace sjelo

#endif  // SJELO_ELO_MAP_HPP_
