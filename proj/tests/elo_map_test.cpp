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

#include "sjelo/elo_map.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace sjelo {
namespace {

using testing::Gen;
using testing::TwoPlayer;

TEST(ExpectationTest, StableAndSymmetric) {
  EXPECT_DOUBLE_EQ(Expectation(0.0), 0.5);
  EXPECT_DOUBLE_EQ(Expectation(1000.0), 1.0);
  EXPECT_EQ(Expectation(-1000.0), 0.0);
  EXPECT_GT(Expectation(-700.0), 0.0);
  for (double g : {0.1, 1.0, 3.7, 25.0}) {
    EXPECT_NEAR(Expectation(g) + Expectation(-g), 1.0, 1e-15);
    EXPECT_NEAR(Expectation(g), 1.0 / (1.0 + std::exp(-g)), 1e-15);
  }
}

TEST(EloMapTest, Examples) {
  const Rating zero = Rating::Zero(2);
  const Rating half = ClassicalEloMap(zero, TwoPlayer(1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(half[0], 0.5);
  EXPECT_DOUBLE_EQ(half[1], -0.5);

  const Rating over = ClassicalEloMap(zero, TwoPlayer(55.0, 45.0), 1.0);
  EXPECT_NEAR(over[0], 5.0, 1e-12);
  EXPECT_NEAR(over[1], -5.0, 1e-12);

  const Rating lost = ClassicalEloMap(Rating({0.5, -0.5}),
                                      TwoPlayer(0.0, 3.0), 1.0);
  EXPECT_NEAR(lost[0], testing::kMonotonicityMapValue, 1e-14);
  EXPECT_NEAR(lost[1], -testing::kMonotonicityMapValue, 1e-14);
}

TEST(EloMapTest, RejectsBadArguments) {
  const ResultMatrix p = TwoPlayer(1.0, 2.0);
  EXPECT_THROW(ClassicalEloMap(Rating::Zero(2), p, 0.0), std::invalid_argument);
  EXPECT_THROW(ClassicalEloMap(Rating::Zero(2), p, -1.0), std::invalid_argument);
  EXPECT_THROW(ClassicalEloMap(Rating::Zero(2), p, std::nan("")),
               std::invalid_argument);
  EXPECT_THROW(ClassicalEloMap(Rating::Zero(3), p, 1.0), std::invalid_argument);
}

TEST(EloMapTest, ExtremeGapsStayFinite) {
  const Rating x({800.0, -800.0});
  const Rating e = ClassicalEloMap(x, TwoPlayer(2.0, 3.0), 1.0);
  EXPECT_NEAR(e[0], -3.0, 1e-12);
  EXPECT_NEAR(e[1], 3.0, 1e-12);
}

TEST(EloMapTest, MatchesDefinitionInExtendedPrecision) {
  Gen gen(101);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = gen.Index(2, 10);
    const ResultMatrix p = gen.Matrix(n, 10.0, 0.7);
    const Rating x = gen.RandomRating(n, 5.0);
    const double k = gen.LogUniform(0.01, 10.0);
    std::vector<long double> xl(x.begin(), x.end());
    const auto ref = testing::BruteEloMap(xl, p, k);
    const Rating got = ClassicalEloMap(x, p, k);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(got[i], static_cast<double>(ref[i]),
                  1e-12 * (1.0 + k * p.L1Norm()));
    }
  }
}

TEST(EloMapTest, ZeroSumAndMagnitudeBound) {
  Gen gen(102);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = gen.Index(2, 12);
    const ResultMatrix p = gen.Matrix(n, 10.0, gen.Uniform(0.2, 1.0));
    const double k = gen.LogUniform(0.01, 5.0);
    const Rating x = gen.RandomRating(n, 20.0);
    std::vector<double> raw(n);
    detail::EloMapInto(x.values(), p, k, raw);
    double sum = 0.0;
    for (double v : raw) sum += v;
    EXPECT_LE(std::abs(sum), SumTolerance(raw));
    EXPECT_LE(L1Norm(raw), 2.0 * k * p.L1Norm() + SumTolerance(raw));
  }
}

TEST(ResidualTest, Examples) {
  EXPECT_NEAR(Residual(Rating::Zero(2), TwoPlayer(55.0, 45.0), 1.0), 10.0,
              1e-12);
  EXPECT_EQ(Residual(Rating::Zero(2), ResultMatrix(2), 1.0), 0.0);
  // Symmetric results: zero is the fixed point.
  EXPECT_EQ(Residual(Rating::Zero(2), TwoPlayer(4.0, 4.0), 3.0), 0.0);
  const double root = testing::kOvercompensationRoot;
  EXPECT_LT(Residual(Rating({root, -root}), TwoPlayer(55.0, 45.0), 1.0), 1e-12);
}

TEST(ContractionBoundTest, Examples) {
  const ContractionBound zero = ComputeContractionBound(ResultMatrix(3), 2.0);
  EXPECT_EQ(zero.g, 0.0);
  EXPECT_EQ(zero.xi_star, 0.0);
  const ContractionBound over =
      ComputeContractionBound(TwoPlayer(55.0, 45.0), 1.0);
  EXPECT_DOUBLE_EQ(over.g, 25.0);
  EXPECT_DOUBLE_EQ(over.xi_star, 25.0 / 26.0);
  const ContractionBound small = ComputeContractionBound(TwoPlayer(3.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(small.g, 1.25);
  EXPECT_DOUBLE_EQ(small.xi_star, 5.0 / 9.0);
  EXPECT_LT(ComputeContractionBound(TwoPlayer(1e300, 1e300), 1e10).xi_star, 1.0);
}

TEST(PhiStepTest, Examples) {
  const ResultMatrix p = TwoPlayer(55.0, 45.0);
  const Rating zero = Rating::Zero(2);
  EXPECT_EQ(PhiStep(zero, p, 1.0, 0.0), ClassicalEloMap(zero, p, 1.0));
  const Rating damped = PhiStep(zero, p, 1.0, 25.0 / 26.0);
  EXPECT_NEAR(damped[0], 5.0 / 26.0, 1e-12);
  EXPECT_NEAR(damped[1], -5.0 / 26.0, 1e-12);
  const double root = testing::kOvercompensationRoot;
  const Rating fixed({root, -root});
  EXPECT_NEAR(PhiStep(fixed, p, 1.0, 0.5)[0], root, 1e-12);
  EXPECT_THROW(PhiStep(zero, p, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(PhiStep(zero, p, 1.0, -0.1), std::invalid_argument);
}

TEST(PhiStepTest, ContractsWithFactorXiStar) {
  Gen gen(103);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = gen.Index(2, 10);
    const ResultMatrix p = gen.Matrix(n, 10.0, gen.Uniform(0.3, 1.0));
    const double k = gen.LogUniform(0.01, 2.0);
    const Rating y = gen.RandomRating(n, 10.0);
    const Rating z = gen.RandomRating(n, 10.0);
    const double xi = ComputeContractionBound(p, k).xi_star;
    const Rating fy = PhiStep(y, p, k, xi);
    const Rating fz = PhiStep(z, p, k, xi);
    EXPECT_LE(L1Distance(fz, fy), xi * L1Distance(z, y) + SumTolerance(fz.values()))
        << "trial " << trial;
  }
}

TEST(SmallKSlopeTest, Examples) {
  const Rating sym = SmallKSlope(TwoPlayer(4.0, 4.0));
  EXPECT_EQ(sym, Rating::Zero(2));
  const Rating slope = SmallKSlope(TwoPlayer(3.0, 2.0));
  EXPECT_DOUBLE_EQ(slope[0], 0.5);
  EXPECT_DOUBLE_EQ(slope[1], -0.5);
  ResultMatrix cycle(3);
  cycle.Set(0, 1, 4.0);
  cycle.Set(1, 2, 4.0);
  cycle.Set(2, 0, 4.0);
  EXPECT_EQ(SmallKSlope(cycle), Rating::Zero(3));
}

}  // namespace
}  // namespace sjelo
