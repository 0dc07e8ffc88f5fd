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

// Fixed-point solvers for the self-justifying rating elo_k(p), the unique
// x with x = elo(x, p).
//
// Solve() is the adaptive damped iteration: it starts from the provably safe
// damping xi* = G / (G + 1) and tries squaring xi to speed things up,
// backing off (xi := sqrt(xi)) whenever the residual fails to shrink by the
// expected factor. The next iterate is always built from the best iterate so
// far, so a failed attempt costs one loop. The residual ||x - elo(x, p)||_1
// is an upper bound on ||x - elo_k(p)||_1, which makes it both the stopping
// rule and the returned certificate.
//
// OracleSolve() is the plain iteration of phi_xi* and serves as the
// independent reference.

#ifndef SJELO_SOLVER_HPP_
#define SJELO_SOLVER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sjelo/elo_map.hpp"
#include "sjelo/types.hpp"

namespace sjelo {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  double k = 1.0;
  // L1 precision target. Unset means 1e-9 * max(1, 2 k ||p||_1).
  std::optional<double> epsilon;
  // Loops to hold xi after a failed reduction attempt.
  int continuity = 4;
  // Hard cap on loops. Unset means 10 * LoopBound().
  std::optional<std::int64_t> max_loops;

  void Validate() const {
    detail::CheckK(k);
    if (epsilon && !(*epsilon > 0.0 && std::isfinite(*epsilon))) {
      throw std::invalid_argument("SolverConfig: epsilon must be positive");
    }
    if (continuity < 0) {
      throw std::invalid_argument("SolverConfig: continuity must be >= 0");
    }
    if (max_loops && *max_loops < 1) {
      throw std::invalid_argument("SolverConfig: max_loops must be >= 1");
    }
  }
};

inline double DefaultEpsilon(const ResultMatrix& p, double k) {
  return 1e-9 * std::max(1.0, 2.0 * k * p.L1Norm());
}

inline double ResolveEpsilon(const ResultMatrix& p, const SolverConfig& cfg) {
  return cfg.epsilon ? *cfg.epsilon : DefaultEpsilon(p, cfg.k);
}

// A-priori bound on the number of loops Solve() needs:
//   1                                                  if 2k||p|| <= eps
//   ceil(ceil((G + 1) ln(2k||p|| / eps)) (c + 2) / (c + 1)) + 1   otherwise
inline std::int64_t LoopBound(const ResultMatrix& p, const SolverConfig& cfg) {
  cfg.Validate();
  const double eps = ResolveEpsilon(p, cfg);
  const double initial = 2.0 * cfg.k * p.L1Norm();
  if (initial <= eps) return 1;
  const double g = ComputeContractionBound(p, cfg.k).g;
  const double reducing = std::ceil((g + 1.0) * std::log(initial / eps));
  if (!(reducing < 1e18)) {
    throw SolverError("LoopBound: bound exceeds integer range");
  }
  const auto a = static_cast<std::int64_t>(reducing);
  const std::int64_t c = cfg.continuity;
  // ceil(a (c + 2) / (c + 1)) in integers.
  return (a * (c + 2) + c) / (c + 1) + 1;
}

struct SolveOutcome {
  Rating rating = Rating::Zero(2);
  double residual = 0.0;  // ||rating - elo(rating, p)||_1
  std::int64_t loops_used = 0;
  std::int64_t loop_bound = 0;
  double xi_final = 0.0;
  double epsilon = 0.0;
  // Set when round-off kept the residual above epsilon; `residual` is then
  // still a valid certificate, just a weaker one.
  bool stalled = false;
};

// Iteration state exposed to observers after each loop's xi/best-so-far
// update and before the next iterate is formed.
struct SolverState {
  std::vector<double> x;       // current iterate
  std::vector<double> e;       // elo(x, p)
  double xi = 0.0;
  double d = 0.0;              // ||x - e||_1
  double d_perm = std::numeric_limits<double>::infinity();
  std::vector<double> x_perm;  // best iterate so far and its image
  std::vector<double> e_perm;
  int w = 0;                   // continuity countdown
  std::int64_t loops = 0;
  bool increased = false;      // this loop took the xi := sqrt(xi) branch
};

struct NoObserver {
  void operator()(const SolverState&) const {}
};

// Without round-off, a loop that fails to improve the best residual must
// have raised xi, and fewer than 64 such loops can follow each other before
// xi is back at xi*, where the residual always shrinks. A longer run of
// non-improving loops therefore means the iteration is stuck at machine
// precision.
inline constexpr std::int64_t kStallWindow = 128;

namespace detail {

inline std::int64_t ResolveMaxLoops(const SolverConfig& cfg,
                                    std::int64_t loop_bound) {
  if (cfg.max_loops) return *cfg.max_loops;
  return loop_bound > std::numeric_limits<std::int64_t>::max() / 10
             ? std::numeric_limits<std::int64_t>::max()
             : 10 * loop_bound;
}

inline void CheckSolvable(const ResultMatrix& p) {
  if (p.size() < 2) {
    throw std::invalid_argument("solve: need at least two players");
  }
}

[[noreturn]] inline void ThrowLoopCap(std::int64_t cap, double best) {
  std::ostringstream msg;
  msg << "solve: no convergence within " << cap << " loops (best residual "
      << best << ")";
  throw SolverError(msg.str());
}

[[noreturn]] inline void ThrowStall(double best, double eps) {
  std::ostringstream msg;
  msg << "solve: round-off stall at residual " << best << " above epsilon "
      << eps;
  throw SolverError(msg.str());
}

}  // namespace detail

template <typename Observer>
SolveOutcome Solve(const ResultMatrix& p, const SolverConfig& cfg,
                   Observer&& observer) {
  cfg.Validate();
  detail::CheckSolvable(p);
  const std::size_t n = p.size();
  const double eps = ResolveEpsilon(p, cfg);
  const std::int64_t bound = LoopBound(p, cfg);
  const std::int64_t max_loops = detail::ResolveMaxLoops(cfg, bound);
  const double xi_star = ComputeContractionBound(p, cfg.k).xi_star;

  SolverState s;
  s.x.assign(n, 0.0);
  s.e.assign(n, 0.0);
  s.xi = xi_star;
  std::int64_t since_improvement = 0;

  auto finish = [&](std::vector<double> x, double residual, bool stalled) {
    SolveOutcome out;
    out.rating = Rating(std::move(x));
    out.residual = residual;
    out.loops_used = s.loops;
    out.loop_bound = bound;
    out.xi_final = s.xi;
    out.epsilon = eps;
    out.stalled = stalled;
    return out;
  };

  for (;;) {
    if (s.loops >= max_loops) detail::ThrowLoopCap(max_loops, s.d_perm);
    ++s.loops;
    detail::EloMapInto(s.x, p, cfg.k, s.e);
    s.d = L1Distance(s.x, s.e);
    if (s.d <= eps) return finish(s.x, s.d, false);

    s.increased = s.d > s.xi * s.d_perm;
    if (s.increased) {
      // xi never needs to exceed xi*: at xi* the residual always shrinks.
      s.xi = std::min(std::sqrt(s.xi), xi_star);
      s.w = cfg.continuity;
    } else if (s.w > 0) {
      --s.w;
    } else {
      // Floor at the smallest normal so a later sqrt can still recover.
      s.xi = std::max(s.xi * s.xi, std::numeric_limits<double>::min());
    }

    if (s.d < s.d_perm) {
      s.x_perm = s.x;
      s.e_perm = s.e;
      s.d_perm = s.d;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    observer(std::as_const(s));

    if (since_improvement >= kStallWindow) {
      if (s.d_perm <= 16.0 * eps) return finish(s.x_perm, s.d_perm, true);
      detail::ThrowStall(s.d_perm, eps);
    }

    for (std::size_t i = 0; i < n; ++i) {
      s.x[i] = s.xi * s.x_perm[i] + (1.0 - s.xi) * s.e_perm[i];
    }
    Center(s.x);
  }
}

inline SolveOutcome Solve(const ResultMatrix& p, const SolverConfig& cfg) {
  return Solve(p, cfg, NoObserver{});
}

// Plain iteration of phi_xi* from zero; linear convergence with rate xi*.
inline SolveOutcome OracleSolve(const ResultMatrix& p,
                                const SolverConfig& cfg) {
  cfg.Validate();
  detail::CheckSolvable(p);
  const std::size_t n = p.size();
  const double eps = ResolveEpsilon(p, cfg);
  const std::int64_t bound = LoopBound(p, cfg);
  const std::int64_t max_loops = detail::ResolveMaxLoops(cfg, bound);
  const double xi = ComputeContractionBound(p, cfg.k).xi_star;

  std::vector<double> x(n, 0.0);
  std::vector<double> e(n, 0.0);
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t loop = 1;; ++loop) {
    if (loop > max_loops) detail::ThrowLoopCap(max_loops, best);
    detail::EloMapInto(x, p, cfg.k, e);
    const double d = L1Distance(x, e);
    best = std::min(best, d);
    if (d <= eps) {
      SolveOutcome out;
      out.rating = Rating(std::move(x));
      out.residual = d;
      out.loops_used = loop;
      out.loop_bound = bound;
      out.xi_final = xi;
      out.epsilon = eps;
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = xi * x[i] + (1.0 - xi) * e[i];
    Center(x);
  }
}

}  // namespace sjelo

#endif  // SJELO_SOLVER_HPP_
