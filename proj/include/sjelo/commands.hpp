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

// The command-line subcommands as plain functions writing to streams, so the
// CLI binary is a thin flag parser and everything here is testable in
// process. Exit codes: 0 success, 1 bad input or flags, 2 solver failure
// (loop cap, round-off stall, asymptotic k ceiling).

#ifndef SJELO_COMMANDS_HPP_
#define SJELO_COMMANDS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sjelo/csv.hpp"
#include "sjelo/elo_map.hpp"
#include "sjelo/ledger.hpp"
#include "sjelo/solver.hpp"
#include "sjelo/structure.hpp"
#include "sjelo/types.hpp"

namespace sjelo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitSolverError = 2;

enum class OutputFormat { kTable, kCsv, kJson };

struct RunConfig {
  std::string input;
  double k = 1.0;
  std::optional<double> epsilon;
  int continuity = 4;
  double mu = 1500.0;
  double sigma = 400.0 / std::numbers::ln10;
  std::optional<double> decay;
  double min_games = 0.0;
  OutputFormat format = OutputFormat::kTable;
  bool by_components = false;
  bool trace = false;                 // classical only
  std::optional<std::size_t> period;  // analyze only; default last

  SolverConfig Solver() const {
    SolverConfig cfg;
    cfg.k = k;
    cfg.epsilon = epsilon;
    cfg.continuity = continuity;
    return cfg;
  }

  PublishConfig Publishing() const {
    PublishConfig pub;
    pub.mu = mu;
    pub.sigma = sigma;
    pub.min_games = min_games;
    return pub;
  }

  Weighting Weights() const {
    if (decay) return GeometricWeighting{*decay};
    return EqualWeighting{};
  }
};

namespace detail {

using Json = nlohmann::ordered_json;

// Fixed-point formatting that never prints "-0.00".
inline std::string Fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  std::string out = s.str();
  if (out.starts_with('-') &&
      out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

struct PlayerRow {
  std::size_t index = 0;
  std::optional<double> rating;  // nullopt: excluded by min_games
  std::optional<double> published;
  double games = 0.0;
};

// Rated players by published value (descending, registry order on ties),
// then unrated players in registry order.
inline void SortRows(std::vector<PlayerRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const PlayerRow& a, const PlayerRow& b) {
                     if (a.published.has_value() != b.published.has_value()) {
                       return a.published.has_value();
                     }
                     if (!a.published) return false;
                     return *a.published > *b.published;
                   });
}

inline void WriteTable(const std::vector<std::vector<std::string>>& cells,
                       std::ostream& out) {
  std::vector<std::size_t> width;
  for (const auto& row : cells) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      // First column left-aligned, numbers right-aligned.
      const std::string pad(width[c] - row[c].size(), ' ');
      line += c == 0 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

inline void WriteRows(const std::vector<PlayerRow>& rows,
                      const PlayerRegistry& players, OutputFormat format,
                      std::ostream& out) {
  if (format == OutputFormat::kCsv) {
    out << "player,rating,published,games\n";
    for (const PlayerRow& r : rows) {
      out << players.Name(r.index) << ','
          << (r.rating ? FormatNumber(*r.rating) : "") << ','
          << (r.published ? Fixed(*r.published, 2) : "unrated") << ','
          << FormatNumber(r.games) << '\n';
    }
    return;
  }
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"player", "rating", "published", "games"});
  for (const PlayerRow& r : rows) {
    cells.push_back({players.Name(r.index),
                     r.rating ? Fixed(*r.rating, 6) : "-",
                     r.published ? Fixed(*r.published, 2) : "unrated",
                     FormatNumber(r.games)});
  }
  WriteTable(cells, out);
}

inline Json RowsJson(const std::vector<PlayerRow>& rows,
                     const PlayerRegistry& players) {
  Json list = Json::array();
  for (const PlayerRow& r : rows) {
    Json row;
    row["id"] = players.Name(r.index);
    row["rating"] = r.rating ? Json(*r.rating) : Json(nullptr);
    row["published"] = r.published ? Json(*r.published) : Json("unrated");
    row["games"] = r.games;
    list.push_back(std::move(row));
  }
  return list;
}

inline Json RatingJson(const Rating& x, const PlayerRegistry& players) {
  Json obj = Json::object();
  for (std::size_t i = 0; i < x.size(); ++i) obj[players.Name(i)] = x[i];
  return obj;
}

inline std::string RatingText(const Rating& x, const PlayerRegistry& players) {
  std::string text;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) text += ' ';
    text += players.Name(i) + '=' + Fixed(x[i], 6);
  }
  return text;
}

inline std::vector<PlayerRow> RowsFor(const Rating& x, const ResultMatrix& q,
                                      const PublishConfig& pub,
                                      const std::vector<std::size_t>& rated) {
  const std::vector<double> published = Publish(x, pub);
  std::vector<char> is_rated(x.size(), 0);
  for (std::size_t i : rated) is_rated[i] = 1;
  std::vector<PlayerRow> rows;
  for (std::size_t i = 0; i < x.size(); ++i) {
    PlayerRow row;
    row.index = i;
    row.games = q.PointsContested(i);
    if (is_rated[i]) {
      row.rating = x[i];
      row.published = published[i];
    }
    rows.push_back(row);
  }
  SortRows(rows);
  return rows;
}

inline std::vector<std::size_t> Everyone(std::size_t n) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return all;
}

inline void Validate(const RunConfig& run) {
  run.Solver().Validate();
  run.Publishing().Validate();
  if (run.decay && !(*run.decay > 0.0 && *run.decay < 1.0)) {
    throw std::invalid_argument("--decay must lie in (0, 1)");
  }
}

inline SolveOutcome SolveWith(const ResultMatrix& q, const RunConfig& run) {
  return run.by_components ? SolveByComponents(q, run.Solver())
                           : Solve(q, run.Solver());
}

inline const char* VerdictName(ClassicalVerdict::Kind kind) {
  switch (kind) {
    case ClassicalVerdict::Kind::kConverged:
      return "converged";
    case ClassicalVerdict::Kind::kOscillating:
      return "oscillating";
    case ClassicalVerdict::Kind::kUndetermined:
      break;
  }
  return "undetermined";
}

// Runs `body`, mapping failures onto exit codes.
template <typename Body>
int Guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const IngestError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolverError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace detail

// Self-justifying ratings of the accumulated results at the last period.
inline int CmdSolve(const RunConfig& run, std::ostream& out,
                    std::ostream& err) {
  return detail::Guarded(err, [&] {
    detail::Validate(run);
    const IngestResult data = IngestFile(run.input, run.Weights());
    const PlayerRegistry& players = data.players;
    const PublishConfig pub = run.Publishing();

    if (data.ledger.empty() || players.size() < 2) {
      if (run.format == OutputFormat::kJson) {
        detail::Json doc;
        doc["command"] = "solve";
        doc["players"] = detail::Json::array();
        out << doc.dump(2) << '\n';
      } else {
        detail::WriteRows({}, players, run.format, out);
      }
      return kExitOk;
    }

    const std::size_t last = data.ledger.size() - 1;
    const GateResult gate = GatePlayers(data.ledger, last, pub);
    const ResultMatrix q = Accumulate(data.ledger, last);
    const SolveOutcome solved = detail::SolveWith(gate.reduced, run);
    const auto rows = detail::RowsFor(solved.rating, q, pub, gate.included);

    if (run.format == OutputFormat::kJson) {
      detail::Json doc;
      doc["command"] = "solve";
      doc["k"] = run.k;
      doc["epsilon"] = solved.epsilon;
      doc["residual"] = solved.residual;
      doc["loops_used"] = solved.loops_used;
      doc["loop_bound"] = solved.loop_bound;
      doc["xi_final"] = solved.xi_final;
      doc["stalled"] = solved.stalled;
      doc["mu"] = pub.mu;
      doc["sigma"] = pub.sigma;
      doc["players"] = detail::RowsJson(rows, players);
      out << doc.dump(2) << '\n';
    } else {
      detail::WriteRows(rows, players, run.format, out);
    }
    if (solved.stalled) {
      err << "error: solver stalled at residual " << solved.residual
          << " (epsilon " << solved.epsilon << ")\n";
      return kExitSolverError;
    }
    return kExitOk;
  });
}

// Classical sequential Elo over the periods, with a convergence verdict.
inline int CmdClassical(const RunConfig& run, std::ostream& out,
                        std::ostream& err) {
  return detail::Guarded(err, [&] {
    detail::Validate(run);
    const IngestResult data = IngestFile(run.input, run.Weights());
    const PlayerRegistry& players = data.players;
    const PublishConfig pub = run.Publishing();

    if (data.ledger.empty() || players.size() < 2) {
      if (run.format == OutputFormat::kJson) {
        detail::Json doc;
        doc["command"] = "classical";
        doc["players"] = detail::Json::array();
        out << doc.dump(2) << '\n';
      } else {
        detail::WriteRows({}, players, run.format, out);
      }
      return kExitOk;
    }

    const ClassicalTrace trace = ClassicalSequence(data.ledger, run.Solver());
    const Rating& final_rating = trace.ratings.back();
    const ResultMatrix q = Accumulate(data.ledger.WithWeighting(EqualWeighting{}),
                                      data.ledger.size() - 1);
    const auto rows = detail::RowsFor(final_rating, q, pub,
                                      detail::Everyone(players.size()));
    const ClassicalVerdict& verdict = trace.verdict;

    if (run.format == OutputFormat::kJson) {
      detail::Json doc;
      doc["command"] = "classical";
      doc["k"] = run.k;
      doc["epsilon"] = ClassicalEpsilon(data.ledger, run.Solver());
      detail::Json v;
      v["kind"] = detail::VerdictName(verdict.kind);
      v["period"] = verdict.period;
      v["attractors"] = detail::Json::array();
      for (const Rating& a : verdict.attractors) {
        v["attractors"].push_back(detail::RatingJson(a, players));
      }
      doc["verdict"] = std::move(v);
      doc["players"] = detail::RowsJson(rows, players);
      if (run.trace) {
        doc["trace"] = detail::Json::array();
        for (const Rating& x : trace.ratings) {
          doc["trace"].push_back(detail::RatingJson(x, players));
        }
      }
      out << doc.dump(2) << '\n';
      return kExitOk;
    }

    if (run.trace) {
      out << "period";
      for (const std::string& name : players.names()) out << ',' << name;
      out << '\n';
      for (std::size_t l = 0; l < trace.ratings.size(); ++l) {
        out << l;
        for (double v : trace.ratings[l]) out << ',' << detail::FormatNumber(v);
        out << '\n';
      }
      err << "verdict: " << detail::VerdictName(verdict.kind) << '\n';
      return kExitOk;
    }

    detail::WriteRows(rows, players, run.format, out);
    if (run.format == OutputFormat::kTable) {
      out << "\nverdict: " << detail::VerdictName(verdict.kind);
      if (verdict.kind == ClassicalVerdict::Kind::kOscillating) {
        out << " (period " << verdict.period << ")";
      }
      out << '\n';
      for (std::size_t a = 0; a < verdict.attractors.size(); ++a) {
        out << (verdict.kind == ClassicalVerdict::Kind::kConverged
                    ? "limit: "
                    : "attractor " + std::to_string(a + 1) + ": ")
            << detail::RatingText(verdict.attractors[a], players) << '\n';
      }
    }
    return kExitOk;
  });
}

// Connectivity of the accumulated result graph and, when bounded, the
// large-k limit of the self-justifying ratings.
inline int CmdAnalyze(const RunConfig& run, std::ostream& out,
                      std::ostream& err) {
  return detail::Guarded(err, [&] {
    detail::Validate(run);
    const IngestResult data = IngestFile(run.input, run.Weights());
    const PlayerRegistry& players = data.players;
    const PublishConfig pub = run.Publishing();

    if (data.ledger.empty() || players.size() < 2) {
      if (run.format == OutputFormat::kJson) {
        detail::Json doc;
        doc["command"] = "analyze";
        doc["components"] = detail::Json::array();
        doc["bounded"] = true;
        out << doc.dump(2) << '\n';
      } else {
        out << "components: 0\nbounded: yes\n";
      }
      return kExitOk;
    }

    const std::size_t l = run.period.value_or(data.ledger.size() - 1);
    const ResultMatrix q = Accumulate(data.ledger, l);
    const ConnectivityReport report = Analyze(q);
    std::optional<AsymptoticResult> limit;
    if (report.bounded) {
      limit = AsymptoticRating(q, 1e-8 * std::max(1.0, q.L1Norm()));
    }
    const bool reached =
        !limit || limit->status == AsymptoticStatus::kConverged;

    if (run.format == OutputFormat::kJson) {
      detail::Json doc;
      doc["command"] = "analyze";
      doc["period"] = l;
      doc["bounded"] = report.bounded;
      doc["components"] = detail::Json::array();
      for (std::size_t c = 0; c < report.components.size(); ++c) {
        detail::Json comp;
        comp["players"] = detail::Json::array();
        for (std::size_t i : report.components[c]) {
          comp["players"].push_back(players.Name(i));
        }
        comp["strongly_connected"] = static_cast<bool>(report.strong_flags[c]);
        doc["components"].push_back(std::move(comp));
      }
      if (limit) {
        detail::Json a;
        a["converged"] = reached;
        a["residual"] = limit->residual;
        a["k_final"] = limit->k_final;
        const auto rows = detail::RowsFor(*limit->rating, q, pub,
                                          detail::Everyone(players.size()));
        a["players"] = detail::RowsJson(rows, players);
        doc["asymptotic"] = std::move(a);
      }
      out << doc.dump(2) << '\n';
    } else {
      out << "components: " << report.components.size() << '\n';
      for (std::size_t c = 0; c < report.components.size(); ++c) {
        out << "component " << c + 1 << ":";
        for (std::size_t i : report.components[c]) {
          out << ' ' << players.Name(i);
        }
        out << (report.strong_flags[c] ? " [strongly connected]"
                                       : " [not strongly connected]")
            << '\n';
      }
      out << "bounded: " << (report.bounded ? "yes" : "no") << '\n';
      if (limit) {
        out << "\nasymptotic rating (k -> infinity):\n";
        const auto rows = detail::RowsFor(*limit->rating, q, pub,
                                          detail::Everyone(players.size()));
        detail::WriteRows(rows, players, run.format, out);
      }
    }
    if (!report.bounded) {
      err << "warning: some group of players never conceded points to the "
             "rest of its component; their ratings grow without bound as k "
             "increases\n";
    }
    if (!reached) {
      err << "error: asymptotic rating not settled (residual "
          << limit->residual << " at k=" << limit->k_final << ")\n";
      return kExitSolverError;
    }
    return kExitOk;
  });
}

// Classical and self-justifying ratings side by side.
inline int CmdCompare(const RunConfig& run, std::ostream& out,
                      std::ostream& err) {
  return detail::Guarded(err, [&] {
    detail::Validate(run);
    const IngestResult data = IngestFile(run.input, run.Weights());
    const PlayerRegistry& players = data.players;

    if (data.ledger.empty() || players.size() < 2) {
      if (run.format == OutputFormat::kJson) {
        detail::Json doc;
        doc["command"] = "compare";
        doc["players"] = detail::Json::array();
        out << doc.dump(2) << '\n';
      } else {
        out << "player  classical  self_justifying  difference\n";
      }
      return kExitOk;
    }

    const std::size_t last = data.ledger.size() - 1;
    const ResultMatrix q = Accumulate(data.ledger, last);
    const ClassicalTrace trace = ClassicalSequence(data.ledger, run.Solver());
    const Rating& classical = trace.ratings.back();
    const SolveOutcome solved = detail::SolveWith(q, run);
    const Rating& justified = solved.rating;
    const double distance = L1Distance(classical, justified);
    const double classical_residual = Residual(classical, q, run.k);

    if (run.format == OutputFormat::kJson) {
      detail::Json doc;
      doc["command"] = "compare";
      doc["k"] = run.k;
      doc["epsilon"] = solved.epsilon;
      doc["l1_difference"] = distance;
      doc["classical_residual"] = classical_residual;
      doc["self_justifying_residual"] = solved.residual;
      doc["players"] = detail::Json::array();
      for (std::size_t i = 0; i < players.size(); ++i) {
        detail::Json row;
        row["id"] = players.Name(i);
        row["classical"] = classical[i];
        row["self_justifying"] = justified[i];
        doc["players"].push_back(std::move(row));
      }
      out << doc.dump(2) << '\n';
    } else if (run.format == OutputFormat::kCsv) {
      out << "player,classical,self_justifying,difference\n";
      for (std::size_t i = 0; i < players.size(); ++i) {
        out << players.Name(i) << ',' << detail::FormatNumber(classical[i])
            << ',' << detail::FormatNumber(justified[i]) << ','
            << detail::FormatNumber(classical[i] - justified[i]) << '\n';
      }
    } else {
      std::vector<std::vector<std::string>> cells;
      cells.push_back({"player", "classical", "self_justifying", "difference"});
      for (std::size_t i = 0; i < players.size(); ++i) {
        cells.push_back({players.Name(i), detail::Fixed(classical[i], 6),
                         detail::Fixed(justified[i], 6),
                         detail::Fixed(classical[i] - justified[i], 6)});
      }
      detail::WriteTable(cells, out);
      std::ostringstream tail;
      tail << std::scientific << std::setprecision(3);
      tail << "\nl1 difference: " << detail::Fixed(distance, 6) << '\n'
           << "classical residual: " << classical_residual << '\n'
           << "self-justifying residual: " << solved.residual
           << " (epsilon " << solved.epsilon << ")\n";
      out << tail.str();
    }
    if (solved.stalled) {
      err << "error: solver stalled at residual " << solved.residual << '\n';
      return kExitSolverError;
    }
    return kExitOk;
  });
}

}  // namespace sjelo

#endif  // SJELO_COMMANDS_HPP_
