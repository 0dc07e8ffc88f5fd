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

#include "sjelo/structure.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace sjelo {
namespace {

using testing::Gen;
using testing::TwoPlayer;
using Components = std::vector<std::vector<std::size_t>>;

// Reachability by repeated relaxation; the slow independent check for
// strong connectivity.
bool StronglyConnectedByClosure(const ResultMatrix& p,
                                const std::vector<std::size_t>& members) {
  const std::size_t n = p.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = 1;
    for (std::size_t j = 0; j < n; ++j) reach[i][j] |= p(i, j) > 0.0;
  }
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        reach[i][j] |= reach[i][m] && reach[m][j];
      }
    }
  }
  for (std::size_t a : members) {
    for (std::size_t b : members) {
      if (!reach[a][b]) return false;
    }
  }
  return true;
}

TEST(AnalyzeTest, Examples) {
  const ConnectivityReport mutual = Analyze(TwoPlayer(3.0, 2.0));
  EXPECT_EQ(mutual.components, (Components{{0, 1}}));
  EXPECT_EQ(mutual.strong_flags, std::vector<bool>{true});
  EXPECT_TRUE(mutual.bounded);

  const ConnectivityReport one_sided = Analyze(TwoPlayer(1.0, 0.0));
  EXPECT_EQ(one_sided.components, (Components{{0, 1}}));
  EXPECT_EQ(one_sided.strong_flags, std::vector<bool>{false});
  EXPECT_FALSE(one_sided.bounded);

  ResultMatrix isolated(3);
  isolated.Set(0, 1, 1.0);
  isolated.Set(1, 0, 1.0);
  const ConnectivityReport report = Analyze(isolated);
  EXPECT_EQ(report.components, (Components{{0, 1}, {2}}));
  EXPECT_EQ(report.strong_flags, (std::vector<bool>{true, true}));
  EXPECT_TRUE(report.bounded);
}

TEST(AnalyzeTest, ComponentsOrderedBySmallestMember) {
  ResultMatrix p(5);
  p.Set(4, 1, 1.0);
  p.Set(1, 4, 1.0);
  p.Set(3, 0, 1.0);
  const ConnectivityReport report = Analyze(p);
  EXPECT_EQ(report.components, (Components{{0, 3}, {1, 4}, {2}}));
  EXPECT_EQ(report.strong_flags, (std::vector<bool>{false, true, true}));
  EXPECT_FALSE(report.bounded);
}

TEST(AnalyzeTest, CycleIsStronglyConnected) {
  ResultMatrix p(4);
  p.Set(0, 1, 1.0);
  p.Set(1, 2, 1.0);
  p.Set(2, 3, 1.0);
  p.Set(3, 0, 1.0);
  EXPECT_TRUE(Analyze(p).bounded);
  p.Set(3, 0, 0.0);
  p.Set(0, 3, 1.0);
  EXPECT_FALSE(Analyze(p).bounded);
}

TEST(AnalyzeTest, AgreesWithClosureAndIgnoresScale) {
  Gen gen(301);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = gen.Index(1, 9);
    const ResultMatrix p = gen.Matrix(n, 3.0, gen.Uniform(0.05, 0.5));
    const ConnectivityReport report = Analyze(p);
    std::vector<int> seen(n, 0);
    for (std::size_t c = 0; c < report.components.size(); ++c) {
      for (std::size_t v : report.components[c]) ++seen[v];
      EXPECT_EQ(report.strong_flags[c],
                StronglyConnectedByClosure(p, report.components[c]));
    }
    for (int s : seen) EXPECT_EQ(s, 1);
    const ConnectivityReport scaled = Analyze(p.Scaled(gen.LogUniform(1e-3, 1e3)));
    EXPECT_EQ(scaled.components, report.components);
    EXPECT_EQ(scaled.strong_flags, report.strong_flags);
    EXPECT_EQ(scaled.bounded, report.bounded);
  }
}

TEST(AnalyzeTest, LongChainDoesNotRecurse) {
  const std::size_t n = 3000;
  ResultMatrix p(n);
  for (std::size_t i = 0; i + 1 < n; ++i) p.Set(i, i + 1, 1.0);
  EXPECT_FALSE(Analyze(p).bounded);
  p.Set(n - 1, 0, 1.0);
  EXPECT_TRUE(Analyze(p).bounded);
}

TEST(RestrictTest, Examples) {
  ResultMatrix p(3);
  p.Set(0, 1, 5.0);
  p.Set(2, 1, 7.0);
  const std::vector<std::size_t> all = {0, 1, 2};
  EXPECT_EQ(Restrict(p, all), p);
  const std::vector<std::size_t> two = {2};
  EXPECT_TRUE(Restrict(p, two).IsZero());
  const std::vector<std::size_t> pair = {0, 1};
  ResultMatrix expected(3);
  expected.Set(0, 1, 5.0);
  EXPECT_EQ(Restrict(p, pair), expected);

  EXPECT_THROW(Restrict(p, std::vector<std::size_t>{}), std::invalid_argument);
  EXPECT_THROW(Restrict(p, std::vector<std::size_t>{0, 3}), std::invalid_argument);
  EXPECT_THROW(Restrict(p, std::vector<std::size_t>{1, 1}), std::invalid_argument);
}

TEST(SolveByComponentsTest, SingleComponentIsBitwiseSolve) {
  const ResultMatrix p = TwoPlayer(3.0, 2.0);
  const SolveOutcome a = SolveByComponents(p, SolverConfig{});
  const SolveOutcome b = Solve(p, SolverConfig{});
  EXPECT_EQ(a.rating, b.rating);
  EXPECT_EQ(a.loops_used, b.loops_used);
  EXPECT_EQ(a.residual, b.residual);
}

TEST(SolveByComponentsTest, TwoBlocks) {
  ResultMatrix p(4);
  p.Set(0, 1, 55.0);
  p.Set(1, 0, 45.0);
  p.Set(2, 3, 3.0);
  p.Set(3, 2, 2.0);
  SolverConfig cfg;
  cfg.epsilon = 1e-9;
  const SolveOutcome out = SolveByComponents(p, cfg);
  EXPECT_NEAR(out.rating[0], testing::kOvercompensationRoot, 1e-9);
  EXPECT_NEAR(out.rating[1], -testing::kOvercompensationRoot, 1e-9);
  EXPECT_NEAR(out.rating[2], testing::kThreeTwoRoot, 1e-9);
  EXPECT_NEAR(out.rating[3], -testing::kThreeTwoRoot, 1e-9);
  EXPECT_LE(out.residual, 1e-9);
}

TEST(SolveByComponentsTest, AllZero) {
  const SolveOutcome out = SolveByComponents(ResultMatrix(5), SolverConfig{});
  EXPECT_EQ(out.rating, Rating::Zero(5));
  EXPECT_EQ(out.residual, 0.0);
}

TEST(SolveByComponentsTest, AgreesWithSolveOnBlockDiagonal) {
  Gen gen(302);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = gen.Index(3, 12);
    const ResultMatrix p = gen.BlockDiagonal(n, gen.Index(2, n), 10.0);
    const SolverConfig cfg = testing::WithK(gen.Uniform(0.01, 2.0));
    const SolveOutcome split = SolveByComponents(p, cfg);
    const SolveOutcome whole = Solve(p, cfg);
    EXPECT_LE(L1Distance(split.rating, whole.rating), 2.0 * whole.epsilon);
    EXPECT_LE(split.residual, split.epsilon);
  }
}

TEST(AsymptoticRatingTest, Examples) {
  const AsymptoticResult three_two = AsymptoticRating(TwoPlayer(3.0, 2.0), 1e-9);
  ASSERT_EQ(three_two.status, AsymptoticStatus::kConverged);
  EXPECT_NEAR((*three_two.rating)[0], testing::kThreeTwoLimit, 1e-8);
  EXPECT_LE(three_two.residual, 1e-9);

  const AsymptoticResult over = AsymptoticRating(TwoPlayer(55.0, 45.0), 1e-9);
  ASSERT_EQ(over.status, AsymptoticStatus::kConverged);
  EXPECT_NEAR((*over.rating)[0], testing::kOvercompensationPerfect, 1e-8);

  const AsymptoticResult one_sided = AsymptoticRating(TwoPlayer(1.0, 0.0), 1e-9);
  EXPECT_EQ(one_sided.status, AsymptoticStatus::kUnbounded);
  EXPECT_FALSE(one_sided.rating.has_value());

  EXPECT_THROW(AsymptoticRating(TwoPlayer(1.0, 1.0), 0.0), std::invalid_argument);
}

TEST(AsymptoticRatingTest, CeilingIsReported) {
  AsymptoticOptions options;
  options.max_steps = 2;
  const AsymptoticResult out =
      AsymptoticRating(TwoPlayer(3.0, 2.0), 1e-12, options);
  EXPECT_EQ(out.status, AsymptoticStatus::kCeilingReached);
  EXPECT_TRUE(out.rating.has_value());
  EXPECT_EQ(out.steps, 2);
}

TEST(AsymptoticRatingTest, ZeroOfUnitMapAndUniqueAcrossSchedules) {
  Gen gen(303);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = gen.Index(2, 7);
    const ResultMatrix p = gen.Matrix(n, 5.0, gen.Uniform(0.4, 1.0));
    const double tol = 1e-7 * std::max(1.0, p.L1Norm());
    const AsymptoticResult a = AsymptoticRating(p, tol);
    if (a.status == AsymptoticStatus::kUnbounded) {
      EXPECT_FALSE(Analyze(p).bounded);
      continue;
    }
    ASSERT_EQ(a.status, AsymptoticStatus::kConverged) << "trial " << trial;
    EXPECT_LE(L1Norm(ClassicalEloMap(*a.rating, p, 1.0).values()), tol);
    AsymptoticOptions other;
    other.k_start = 0.3;
    other.k_growth = 3.0;
    other.max_steps = 30;
    const AsymptoticResult b = AsymptoticRating(p, tol, other);
    ASSERT_EQ(b.status, AsymptoticStatus::kConverged);
    EXPECT_LE(L1Distance(*a.rating, *b.rating), 2.0 * tol);
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

// Bounded report <=> no growth trend in solve(p, 2^m) over m = 0..10.
TEST(BoundednessTest, GrowthTrendMatchesReport) {
  Gen gen(304);
  int bounded_seen = 0, unbounded_seen = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = gen.Index(2, 6);
    const ResultMatrix p = gen.Matrix(n, 5.0, gen.Uniform(0.3, 0.9));
    const bool bounded = Analyze(p).bounded;
    EXPECT_EQ(testing::GrowsWithK(p), !bounded) << "trial " << trial;
    (bounded ? bounded_seen : unbounded_seen)++;
  }
  EXPECT_GT(bounded_seen, 10);
  EXPECT_GT(unbounded_seen, 10);
}

}  // namespace
}  // namespace sjelo
