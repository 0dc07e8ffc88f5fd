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

// Result files:
//
//   period,player_a,player_b,points_a,points_b
//   0,alice,bob,1.5,0.5
//
// One record per line. Rows for the same pair and period are summed; a
// period index with no rows is an empty period. Identifiers are taken
// verbatim (surrounding blanks trimmed) and may not contain commas.

#ifndef SJELO_CSV_HPP_
#define SJELO_CSV_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sjelo/ledger.hpp"
#include "sjelo/types.hpp"

namespace sjelo {

inline constexpr std::string_view kCsvHeader =
    "period,player_a,player_b,points_a,points_b";

class IngestError : public std::runtime_error {
 public:
  IngestError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ResultRecord {
  std::size_t period = 0;
  std::string player_a;
  std::string player_b;
  double points_a = 0.0;
  double points_b = 0.0;
};

struct IngestResult {
  PlayerRegistry players;
  PeriodLedger ledger;
};

namespace detail {

inline std::string_view Trim(std::string_view s) {
  const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline double ParsePoints(std::string_view field, std::size_t line,
                          const char* name) {
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size() ||
      field.empty()) {
    throw IngestError(line, std::string("malformed ") + name + " '" +
                                std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    throw IngestError(line, std::string(name) + " is not finite");
  }
  if (value < 0.0) {
    throw IngestError(line, std::string(name) + " is negative");
  }
  return value;
}

inline ResultRecord ParseRecord(std::string_view text, std::size_t line) {
  const auto fields = SplitFields(text);
  if (fields.size() != 5) {
    throw IngestError(line, "expected 5 fields, got " +
                                std::to_string(fields.size()));
  }
  ResultRecord record;
  std::uint64_t period = 0;
  const auto [end, ec] = std::from_chars(
      fields[0].data(), fields[0].data() + fields[0].size(), period);
  if (ec != std::errc() || end != fields[0].data() + fields[0].size() ||
      fields[0].empty()) {
    throw IngestError(line, "malformed period '" + std::string(fields[0]) +
                                "'");
  }
  // Periods become dense matrix slots; keep the count sane.
  if (period > 10'000'000) throw IngestError(line, "period index too large");
  record.period = static_cast<std::size_t>(period);
  record.player_a = fields[1];
  record.player_b = fields[2];
  if (record.player_a.empty() || record.player_b.empty()) {
    throw IngestError(line, "empty player identifier");
  }
  if (record.player_a == record.player_b) {
    throw IngestError(line, "player '" + record.player_a + "' paired with itself");
  }
  record.points_a = ParsePoints(fields[3], line, "points_a");
  record.points_b = ParsePoints(fields[4], line, "points_b");
  return record;
}

inline std::string FormatNumber(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace detail

inline IngestResult Ingest(std::istream& in,
                           Weighting weighting = EqualWeighting{}) {
  std::string text;
  std::size_t line = 0;
  bool header_seen = false;
  std::vector<ResultRecord> records;
  IngestResult result;
  while (std::getline(in, text)) {
    ++line;
    std::string_view view = text;
    if (line == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    view = detail::Trim(view);
    if (view.empty()) continue;
    if (!header_seen) {
      if (view != kCsvHeader) {
        throw IngestError(line, "expected header '" + std::string(kCsvHeader) +
                                    "'");
      }
      header_seen = true;
      continue;
    }
    ResultRecord record = detail::ParseRecord(view, line);
    result.players.Intern(record.player_a);
    result.players.Intern(record.player_b);
    records.push_back(std::move(record));
  }
  if (in.bad()) throw IngestError(line, "read error");
  if (!header_seen) throw IngestError(line, "missing header");

  std::size_t periods = 0;
  for (const ResultRecord& r : records) periods = std::max(periods, r.period + 1);
  const std::size_t n = result.players.size();
  std::vector<ResultMatrix> matrices(periods, ResultMatrix(n));
  for (const ResultRecord& r : records) {
    const std::size_t a = *result.players.Find(r.player_a);
    const std::size_t b = *result.players.Find(r.player_b);
    matrices[r.period].Add(a, b, r.points_a);
    matrices[r.period].Add(b, a, r.points_b);
  }
  result.ledger = PeriodLedger(n, std::move(matrices), weighting);
  return result;
}

inline IngestResult IngestFile(const std::string& path,
                               Weighting weighting = EqualWeighting{}) {
  std::ifstream in(path);
  if (!in) throw IngestError(0, "cannot open '" + path + "'");
  return Ingest(in, weighting);
}

// Writes a file that Ingest() maps back to the same registry and ledger.
// Zero-point rows at the start fix the registry order (and keep players
// without results); one at the end keeps trailing empty periods.
inline void EmitCsv(const PlayerRegistry& players, const PeriodLedger& ledger,
                    std::ostream& out) {
  if (players.size() != ledger.players()) {
    throw std::invalid_argument("EmitCsv: registry and ledger disagree");
  }
  out << kCsvHeader << '\n';
  const std::size_t n = players.size();
  if (n == 0 || ledger.empty()) return;
  if (n == 1) throw std::invalid_argument("EmitCsv: a single player has no pairs");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out << 0 << ',' << players.Name(i) << ',' << players.Name(i + 1)
        << ",0,0\n";
  }
  for (std::size_t l = 0; l < ledger.size(); ++l) {
    const ResultMatrix& p = ledger.period(l);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (p(i, j) == 0.0 && p(j, i) == 0.0) continue;
        out << l << ',' << players.Name(i) << ',' << players.Name(j) << ','
            << detail::FormatNumber(p(i, j)) << ','
            << detail::FormatNumber(p(j, i)) << '\n';
      }
    }
  }
  out << ledger.size() - 1 << ',' << players.Name(0) << ',' << players.Name(1)
      << ",0,0\n";
}

}  // namespace sjelo

#endif  // SJELO_CSV_HPP_
