// Copyright 2026 The r3 Authors
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

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <json.hpp>

#include "cli.hpp"
#include "r3/io.hpp"

namespace {

using r3::cli::RunConfig;

struct Bound {
  CLI::App* app;
  std::vector<std::pair<std::string, CLI::Option*>> options;  // config key -> option
};

Bound add_command(CLI::App& root, const std::string& name, const std::string& help,
                  RunConfig& c, std::string& config_path) {
  Bound b{root.add_subcommand(name, help), {}};
  CLI::App* app = b.app;
  auto keep = [&](const char* key, CLI::Option* opt) { b.options.emplace_back(key, opt); };
  app->add_option("--config", config_path, "JSON file with any of the options below");
  keep("topology", app->add_option("-t,--topology", c.topology, "topology JSON"));
  keep("demand", app->add_option("--demand", c.demand, "demand CSV (default: PageRank model)"));
  keep("D", app->add_option("-D", c.D, "demand scale of the PageRank model"));
  keep("damping", app->add_option("--damping", c.damping, "PageRank damping factor"));
  keep("F", app->add_option("-F", c.F, "number of link failures to protect against"));
  keep("wireless", app->add_flag("--wireless", c.wireless, "add transmitter-group rows"));
  keep("mode", app->add_option("--mode", c.mode, "routing constraints: full or relaxed"));
  keep("excuse_unreachable",
       app->add_flag("--excuse-unreachable", c.excuse_unreachable,
                     "drop demand between disconnected vertices instead of failing"));
  keep("output_dir", app->add_option("-o,--output-dir", c.output_dir, "output directory"));
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App root{"Resilient routing: solve, reconfigure after failures, verify, sweep"};
  root.require_subcommand(1);
  RunConfig c;
  std::string config_path;

  std::vector<Bound> cmds;
  cmds.push_back(add_command(root, "solve", "solve for base and protection routings", c, config_path));
  cmds.push_back(add_command(root, "reconfigure", "apply a failure trace to a solution", c, config_path));
  cmds.push_back(add_command(root, "verify", "fail every link subset and check utilization", c, config_path));
  cmds.push_back(add_command(root, "sweep", "solve over a grid of D and F", c, config_path));
  cmds.push_back(add_command(root, "demand", "write the PageRank demand matrix", c, config_path));
  cmds.push_back(add_command(root, "maxload", "per-link worst rerouted load", c, config_path));
  for (auto& b : cmds) {
    const std::string name = b.app->get_name();
    if (name == "reconfigure" || name == "verify" || name == "maxload") {
      b.options.emplace_back("solution", b.app->add_option("-s,--solution", c.solution, "solution JSON"));
    }
    if (name == "reconfigure") {
      b.options.emplace_back("trace", b.app->add_option("--trace", c.trace, "one original link id per line"));
    }
    if (name == "verify") {
      b.options.emplace_back("exhaustive", b.app->add_option("--exhaustive", c.exhaustive,
                                                             "largest exhaustive subset (default: F)"));
      b.options.emplace_back("sampled", b.app->add_option("--sampled", c.sampled,
                                                          "random failure sequences beyond that"));
      b.options.emplace_back("seed", b.app->add_option("--seed", c.seed, "sampling seed"));
    }
    if (name == "sweep") {
      b.options.emplace_back("sweep_D", b.app->add_option("--sweep-D", c.sweep_D, "D values"));
      b.options.emplace_back("sweep_F", b.app->add_option("--sweep-F", c.sweep_F, "F values"));
      b.options.emplace_back("top_k", b.app->add_option("--top-k", c.top_k, "bars per point"));
    }
  }

  CLI11_PARSE(root, argc, argv);

  const Bound* active = nullptr;
  for (const auto& b : cmds) {
    if (b.app->parsed()) active = &b;
  }
  if (!config_path.empty()) {
    std::vector<std::string> given;
    for (const auto& [key, opt] : active->options) {
      if (opt->count() > 0) given.push_back(key);
    }
    try {
      r3::cli::apply_json_config(c, r3::read_text_file(config_path, "config"), given);
    } catch (const r3::InputError& e) {
      std::cerr << nlohmann::json{{"error", e.what()}, {"exit_code", 2}}.dump() << "\n";
      return r3::cli::kInputError;
    }
  }
  if (const char* dir = std::getenv("R3TOOL_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    c.output_dir = dir;
  }

  const std::string name = active->app->get_name();
  if (name == "solve") return r3::cli::cmd_solve(c, std::cout, std::cerr);
  if (name == "reconfigure") return r3::cli::cmd_reconfigure(c, std::cout, std::cerr);
  if (name == "verify") return r3::cli::cmd_verify(c, std::cout, std::cerr);
  if (name == "sweep") return r3::cli::cmd_sweep(c, std::cout, std::cerr);
  if (name == "demand") return r3::cli::cmd_demand(c, std::cout, std::cerr);
  return r3::cli::cmd_maxload(c, std::cout, std::cerr);
}
