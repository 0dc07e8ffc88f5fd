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

// sjelo: self-justifying and classical Elo ratings from a results CSV.
//
//   sjelo solve      --input results.csv --k 1
//   sjelo classical  --input results.csv --k 1 --trace
//   sjelo analyze    --input results.csv
//   sjelo compare    --input results.csv --k 1 --format json

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "sjelo/commands.hpp"

namespace {

void AddCommonFlags(CLI::App* cmd, sjelo::RunConfig& run, bool needs_k) {
  static const std::map<std::string, sjelo::OutputFormat> kFormats = {
      {"table", sjelo::OutputFormat::kTable},
      {"csv", sjelo::OutputFormat::kCsv},
      {"json", sjelo::OutputFormat::kJson}};
  cmd->add_option("--input", run.input, "results CSV")
      ->required()
      ->check(CLI::ExistingFile);
  auto* k = cmd->add_option("--k", run.k, "dynamising parameter k > 0");
  if (needs_k) k->required();
  cmd->add_option("--epsilon", run.epsilon,
                  "L1 precision (default 1e-9 * max(1, 2k|p|))");
  cmd->add_option("--c", run.continuity, "continuity parameter")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--mu", run.mu, "published offset");
  cmd->add_option("--sigma", run.sigma, "published scale");
  cmd->add_option("--decay", run.decay, "geometric decay factor in (0, 1)");
  cmd->add_option("--min-games", run.min_games,
                  "minimum points contested to be rated");
  cmd->add_option_function<std::string>(
         "--format",
         [&run](const std::string& name) { run.format = kFormats.at(name); },
         "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd->add_flag("--by-components", run.by_components,
                "solve each connected component separately");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-justifying Elo ratings"};
  app.require_subcommand(1);
  sjelo::RunConfig run;

  auto* solve = app.add_subcommand("solve", "self-justifying ratings");
  AddCommonFlags(solve, run, true);

  auto* classical = app.add_subcommand("classical", "classical sequential Elo");
  AddCommonFlags(classical, run, true);
  classical->add_flag("--trace", run.trace, "emit the per-period trajectory");

  auto* analyze =
      app.add_subcommand("analyze", "connectivity and large-k behaviour");
  AddCommonFlags(analyze, run, false);
  analyze->add_option("--period", run.period, "period index (default last)");

  auto* compare = app.add_subcommand("compare", "classical vs self-justifying");
  AddCommonFlags(compare, run, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sjelo::kExitInputError;
  }

  if (*solve) return sjelo::CmdSolve(run, std::cout, std::cerr);
  if (*classical) return sjelo::CmdClassical(run, std::cout, std::cerr);
  if (*analyze) return sjelo::CmdAnalyze(run, std::cout, std::cerr);
  return sjelo::CmdCompare(run, std::cout, std::cerr);
}
