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

// Structure of the result graph (edge i -> j iff p_ij > 0) and what it says
// about the ratings:
//
//  * the self-justifying rating decomposes over weakly connected components,
//    so each component can be solved on its own;
//  * elo_k(p) stays bounded as k grows iff every weak component is strongly
//    connected, and the limit is then the unique zero of elo_1(., p) on each
//    component.

#ifndef SJELO_STRUCTURE_HPP_
#define SJELO_STRUCTURE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sjelo/elo_map.hpp"
#include "sjelo/solver.hpp"
#include "sjelo/types.hpp"

namespace sjelo {

// Labels the strongly connected components of a directed graph on
// {0, ..., n-1} with Tarjan's algorithm (iterative). `for_each_successor(v,
// f)` must call f(w) for every edge v -> w. Returns the component label of
// each vertex; labels are dense, in order of completion.
template <typename Successors>
std::vector<std::size_t> StronglyConnectedComponents(
    std::size_t n, Successors&& for_each_successor) {
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), label(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0;
  std::size_t next_label = 0;

  std::vector<std::vector<std::size_t>> successors(n);
  for (std::size_t v = 0; v < n; ++v) {
    for_each_successor(v, [&](std::size_t w) { successors[v].push_back(w); });
  }

  struct Frame {
    std::size_t v;
    std::size_t next_edge;
  };
  std::vector<Frame> call_stack;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call_stack.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      const std::size_t v = frame.v;
      if (frame.next_edge < successors[v].size()) {
        const std::size_t w = successors[v][frame.next_edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call_stack.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          label[w] = next_label;
        } while (w != v);
        ++next_label;
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        const std::size_t parent = call_stack.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return label;
}

struct ConnectivityReport {
  // Weakly connected components, each sorted, ordered by smallest member.
  std::vector<std::vector<std::size_t>> components;
  std::vector<bool> strong_flags;
  // All components strongly connected; equivalent to lim_{k->inf} elo_k(p)
  // existing.
  bool bounded = true;
};

inline ConnectivityReport Analyze(const ResultMatrix& p) {
  const std::size_t n = p.size();

  // Weak components: union-find over the undirected closure.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (p(i, j) > 0.0 || p(j, i) > 0.0) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  const std::vector<std::size_t> scc =
      StronglyConnectedComponents(n, [&](std::size_t v, auto&& visit) {
        for (std::size_t w = 0; w < n; ++w) {
          if (p(v, w) > 0.0) visit(w);
        }
      });

  ConnectivityReport report;
  std::vector<std::size_t> slot(n, std::numeric_limits<std::size_t>::max());
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t root = find(v);
    if (slot[root] == std::numeric_limits<std::size_t>::max()) {
      slot[root] = report.components.size();
      report.components.emplace_back();
    }
    report.components[slot[root]].push_back(v);
  }
  for (const auto& component : report.components) {
    const bool strong = std::all_of(
        component.begin(), component.end(),
        [&](std::size_t v) { return scc[v] == scc[component.front()]; });
    report.strong_flags.push_back(strong);
    report.bounded = report.bounded && strong;
  }
  return report;
}

// Keeps p_ij when both i and j belong to `players`, zero elsewhere.
inline ResultMatrix Restrict(const ResultMatrix& p,
                             std::span<const std::size_t> players) {
  const std::size_t n = p.size();
  if (players.empty()) {
    throw std::invalid_argument("Restrict: empty player subset");
  }
  std::vector<char> member(n, 0);
  for (std::size_t v : players) {
    if (v >= n) throw std::invalid_argument("Restrict: player out of range");
    if (member[v]) throw std::invalid_argument("Restrict: duplicate player");
    member[v] = 1;
  }
  ResultMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!member[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (member[j] && p(i, j) > 0.0) out.Set(i, j, p(i, j));
    }
  }
  return out;
}

namespace detail {

inline ResultMatrix Submatrix(const ResultMatrix& p,
                              std::span<const std::size_t> players) {
  ResultMatrix out(players.size());
  for (std::size_t a = 0; a < players.size(); ++a) {
    for (std::size_t b = 0; b < players.size(); ++b) {
      if (a != b) out.Set(a, b, p(players[a], players[b]));
    }
  }
  return out;
}

}  // namespace detail

// Solves each weak component separately (precision epsilon / m for m
// components) and assembles the full rating. With a single component this
// is exactly Solve(p, cfg).
inline SolveOutcome SolveByComponents(const ResultMatrix& p,
                                      const SolverConfig& cfg) {
  cfg.Validate();
  detail::CheckSolvable(p);
  const ConnectivityReport report = Analyze(p);
  if (report.components.size() == 1) return Solve(p, cfg);

  const double eps = ResolveEpsilon(p, cfg);
  SolverConfig part = cfg;
  part.epsilon = eps / static_cast<double>(report.components.size());

  std::vector<double> x(p.size(), 0.0);
  SolveOutcome out;
  out.epsilon = eps;
  out.loops_used = 0;
  out.loop_bound = 0;
  out.xi_final = 0.0;
  for (const auto& component : report.components) {
    if (component.size() < 2) continue;
    const ResultMatrix sub = detail::Submatrix(p, component);
    const SolveOutcome piece = Solve(sub, part);
    for (std::size_t a = 0; a < component.size(); ++a) {
      x[component[a]] = piece.rating[a];
    }
    out.loops_used += piece.loops_used;
    out.loop_bound += piece.loop_bound;
    out.xi_final = std::max(out.xi_final, piece.xi_final);
    out.stalled = out.stalled || piece.stalled;
  }
  out.rating = Rating(std::move(x));
  out.residual = Residual(out.rating, p, cfg.k);
  return out;
}

enum class AsymptoticStatus {
  kConverged,
  kUnbounded,
  // k ceiling hit before the tolerance was met; `rating` holds the last
  // iterate and `residual` what it achieved.
  kCeilingReached,
};

struct AsymptoticOptions {
  double k_start = 1.0;
  double k_growth = 2.0;
  int max_steps = 41;  // k = k_start * k_growth^m, m = 0..max_steps-1
};

struct AsymptoticResult {
  AsymptoticStatus status = AsymptoticStatus::kUnbounded;
  std::optional<Rating> rating;
  double residual = std::numeric_limits<double>::infinity();  // ||elo_1(x)||
  double k_final = 0.0;
  int steps = 0;
};

// lim_{k->inf} elo_k(p), via solves at geometrically growing k. Stops once
// two successive solutions are within `tol` in L1 and the last one satisfies
// ||elo_1(x, p)||_1 <= tol.
inline AsymptoticResult AsymptoticRating(const ResultMatrix& p, double tol,
                                         const AsymptoticOptions& options = {}) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::invalid_argument("AsymptoticRating: tol must be positive");
  }
  if (!(options.k_start > 0.0) || !(options.k_growth > 1.0) ||
      options.max_steps < 1) {
    throw std::invalid_argument("AsymptoticRating: bad k schedule");
  }
  detail::CheckSolvable(p);

  AsymptoticResult result;
  if (!Analyze(p).bounded) return result;

  const double norm = p.L1Norm();
  std::optional<Rating> previous;
  double k = options.k_start;
  for (int step = 0; step < options.max_steps; ++step, k *= options.k_growth) {
    SolverConfig cfg;
    cfg.k = k;
    // Below ~u k ||p|| the residual is rounding noise.
    cfg.epsilon = std::max(
        tol / 8.0, 32.0 * std::numeric_limits<double>::epsilon() * k * norm);
    SolveOutcome solved = SolveByComponents(p, cfg);
    result.steps = step + 1;
    result.k_final = k;
    result.residual = L1Norm(ClassicalEloMap(solved.rating, p, 1.0).values());
    const bool settled =
        previous && L1Distance(*previous, solved.rating) < tol;
    result.rating = solved.rating;
    if (settled && result.residual <= tol) {
      result.status = AsymptoticStatus::kConverged;
      return result;
    }
    previous = std::move(solved.rating);
  }
  result.status = AsymptoticStatus::kCeilingReached;
  return result;
}

}  // namespace sjelo

#endif  // SJELO_STRUCTURE_HPP_
