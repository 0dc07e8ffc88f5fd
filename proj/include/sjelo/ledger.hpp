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

// Results over time: a player registry, one result matrix per reporting
// period, and the two ways of turning them into ratings.
//
// The self-justifying rating at period l only looks at the accumulated
// results q^l (plain sum, or geometrically decayed with factor f). The
// classical rating instead walks the periods in order,
// x^{l+1} = x^l + elo(x^l, p^l), starting from zero.

#ifndef SJELO_LEDGER_HPP_
#define SJELO_LEDGER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sjelo/elo_map.hpp"
#include "sjelo/solver.hpp"
#include "sjelo/structure.hpp"
#include "sjelo/types.hpp"

namespace sjelo {

// Dense indices for opaque player identifiers, in first-seen order.
class PlayerRegistry {
 public:
  std::size_t Intern(std::string_view id) {
    auto it = index_.find(std::string(id));
    if (it != index_.end()) return it->second;
    const std::size_t next = names_.size();
    names_.emplace_back(id);
    index_.emplace(names_.back(), next);
    return next;
  }

  std::optional<std::size_t> Find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& Name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

  friend bool operator==(const PlayerRegistry& a, const PlayerRegistry& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

struct EqualWeighting {
  friend bool operator==(EqualWeighting, EqualWeighting) { return true; }
};

// Period i counts with weight f^(l - i) at period l.
struct GeometricWeighting {
  double f = 0.5;
  friend bool operator==(GeometricWeighting, GeometricWeighting) = default;
};

using Weighting = std::variant<EqualWeighting, GeometricWeighting>;

class PeriodLedger {
 public:
  PeriodLedger() = default;

  PeriodLedger(std::size_t players, std::vector<ResultMatrix> periods,
               Weighting weighting = EqualWeighting{})
      : players_(players),
        periods_(std::move(periods)),
        weighting_(weighting) {
    for (const ResultMatrix& p : periods_) {
      if (p.size() != players_) {
        throw std::invalid_argument("PeriodLedger: period size mismatch");
      }
    }
    if (const auto* g = std::get_if<GeometricWeighting>(&weighting_)) {
      if (!(g->f > 0.0 && g->f < 1.0)) {
        throw std::invalid_argument("PeriodLedger: decay factor not in (0, 1)");
      }
    }
  }

  std::size_t players() const { return players_; }
  std::size_t size() const { return periods_.size(); }
  bool empty() const { return periods_.empty(); }
  const ResultMatrix& period(std::size_t l) const { return periods_.at(l); }
  const std::vector<ResultMatrix>& periods() const { return periods_; }
  const Weighting& weighting() const { return weighting_; }

  PeriodLedger WithWeighting(Weighting weighting) const {
    return PeriodLedger(players_, periods_, weighting);
  }

  friend bool operator==(const PeriodLedger&, const PeriodLedger&) = default;

 private:
  std::size_t players_ = 0;
  std::vector<ResultMatrix> periods_;
  Weighting weighting_ = EqualWeighting{};
};

// q^l: sum of periods 0..l, decayed by f^(l - i) under geometric weighting.
inline ResultMatrix Accumulate(const PeriodLedger& ledger, std::size_t l) {
  if (l >= ledger.size()) {
    throw std::out_of_range("Accumulate: period index out of range");
  }
  ResultMatrix q = ledger.period(0);
  if (const auto* g = std::get_if<GeometricWeighting>(&ledger.weighting())) {
    for (std::size_t i = 1; i <= l; ++i) q = q.Scaled(g->f) + ledger.period(i);
  } else {
    for (std::size_t i = 1; i <= l; ++i) q += ledger.period(i);
  }
  return q;
}

inline SolveOutcome RatePeriod(const PeriodLedger& ledger, std::size_t l,
                               const SolverConfig& cfg) {
  return Solve(Accumulate(ledger, l), cfg);
}

struct ClassicalVerdict {
  enum class Kind { kConverged, kOscillating, kUndetermined };
  Kind kind = Kind::kUndetermined;
  // kConverged: the limit. kOscillating: the two attractors, the one visited
  // last first.
  std::vector<Rating> attractors;
  int period = 0;
};

struct ClassicalTrace {
  std::vector<Rating> ratings;  // x^0 = 0, ..., x^m
  ClassicalVerdict verdict;
};

// Number of trailing iterates the verdict looks at.
inline constexpr std::size_t kVerdictWindow = 20;

inline double ClassicalEpsilon(const PeriodLedger& ledger,
                               const SolverConfig& cfg) {
  if (cfg.epsilon) return *cfg.epsilon;
  double largest = 0.0;
  for (const ResultMatrix& p : ledger.periods()) {
    largest = std::max(largest, p.L1Norm());
  }
  return 1e-9 * std::max(1.0, 2.0 * cfg.k * largest);
}

namespace detail {

inline double MaxPairwiseDistance(std::span<const Rating> ratings,
                                  std::size_t first, std::size_t stride) {
  double widest = 0.0;
  for (std::size_t a = first; a < ratings.size(); a += stride) {
    for (std::size_t b = a + stride; b < ratings.size(); b += stride) {
      widest = std::max(widest, L1Distance(ratings[a], ratings[b]));
    }
  }
  return widest;
}

inline ClassicalVerdict Classify(std::span<const Rating> all, double eps) {
  const std::size_t take = std::min(all.size(), kVerdictWindow);
  const std::span<const Rating> window = all.last(take);
  ClassicalVerdict verdict;
  if (MaxPairwiseDistance(window, 0, 1) < eps) {
    verdict.kind = ClassicalVerdict::Kind::kConverged;
    verdict.attractors.push_back(window.back());
    verdict.period = 1;
    return verdict;
  }
  if (window.size() >= 4 && MaxPairwiseDistance(window, 0, 2) < eps &&
      MaxPairwiseDistance(window, 1, 2) < eps &&
      L1Distance(window[window.size() - 1], window[window.size() - 2]) >=
          10.0 * eps) {
    verdict.kind = ClassicalVerdict::Kind::kOscillating;
    verdict.attractors = {window[window.size() - 1], window[window.size() - 2]};
    verdict.period = 2;
  }
  return verdict;
}

}  // namespace detail

inline ClassicalTrace ClassicalSequence(const PeriodLedger& ledger,
                                        const SolverConfig& cfg) {
  cfg.Validate();
  if (ledger.empty()) {
    throw std::invalid_argument("ClassicalSequence: empty ledger");
  }
  ClassicalTrace trace;
  trace.ratings.push_back(Rating::Zero(ledger.players()));
  for (const ResultMatrix& p : ledger.periods()) {
    const Rating& x = trace.ratings.back();
    const Rating step = ClassicalEloMap(x, p, cfg.k);
    std::vector<double> next(x.size());
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = x[i] + step[i];
    trace.ratings.push_back(Rating::Centered(std::move(next)));
  }
  trace.verdict = detail::Classify(trace.ratings, ClassicalEpsilon(ledger, cfg));
  return trace;
}

// For a trace of the constant sequence p, p, p, ...: when the classical
// ratings converged, checks that the limit is the large-k limit of the
// self-justifying rating. nullopt when the trace did not converge.
inline std::optional<bool> CheckClassicalConvergence(
    const ClassicalTrace& trace, const ResultMatrix& p,
    const SolverConfig& cfg) {
  cfg.Validate();
  if (trace.ratings.empty() || trace.ratings.front().size() != p.size()) {
    throw std::invalid_argument("CheckClassicalConvergence: trace/p mismatch");
  }
  for (std::size_t l = 0; l + 1 < trace.ratings.size(); ++l) {
    const Rating& x = trace.ratings[l];
    const Rating step = ClassicalEloMap(x, p, cfg.k);
    double drift = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      drift += std::abs(x[i] + step[i] - trace.ratings[l + 1][i]);
    }
    if (drift > 1e-9 * std::max(1.0, L1Norm(step.values()))) {
      throw std::invalid_argument(
          "CheckClassicalConvergence: trace is not from a constant ledger");
    }
  }
  if (trace.verdict.kind != ClassicalVerdict::Kind::kConverged) {
    return std::nullopt;
  }
  const double tol = 1e-8 * std::max(1.0, p.L1Norm());
  const AsymptoticResult limit = AsymptoticRating(p, tol);
  if (limit.status != AsymptoticStatus::kConverged) return false;
  const double eps = cfg.epsilon ? *cfg.epsilon
                                 : 1e-9 * std::max(1.0, 2.0 * cfg.k * p.L1Norm());
  return L1Distance(trace.verdict.attractors.front(), *limit.rating) <=
         std::max(1e-6, 100.0 * eps);
}

struct PublishConfig {
  double mu = 1500.0;
  double sigma = 400.0 / std::numbers::ln10;
  // Minimum points contested, sum_j (q_ij + q_ji), to be rated.
  double min_games = 0.0;

  void Validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
      throw std::invalid_argument("PublishConfig: sigma must be positive");
    }
    if (!(min_games >= 0.0)) {
      throw std::invalid_argument("PublishConfig: min_games must be >= 0");
    }
  }
};

// mu + sigma * x_i per player.
inline std::vector<double> Publish(const Rating& x, const PublishConfig& pub) {
  pub.Validate();
  std::vector<double> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(pub.mu + pub.sigma * v);
  return out;
}

struct GateResult {
  std::vector<std::size_t> included;
  std::vector<std::size_t> excluded;
  ResultMatrix reduced;  // excluded rows and columns zeroed
};

inline GateResult GatePlayers(const PeriodLedger& ledger, std::size_t l,
                              const PublishConfig& pub) {
  pub.Validate();
  const ResultMatrix q = Accumulate(ledger, l);
  GateResult gate;
  for (std::size_t i = 0; i < q.size(); ++i) {
    (q.PointsContested(i) >= pub.min_games ? gate.included : gate.excluded)
        .push_back(i);
  }
  if (gate.excluded.empty()) {
    gate.reduced = q;
  } else if (gate.included.empty()) {
    gate.reduced = ResultMatrix(q.size());
  } else {
    gate.reduced = Restrict(q, gate.included);
  }
  return gate;
}

}  // namespace sjelo

#endif  // SJELO_LEDGER_HPP_
