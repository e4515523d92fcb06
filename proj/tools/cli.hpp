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

// Commands behind r3tool. Each returns the process exit code and writes its
// files into RunConfig::output_dir; errors are reported as one JSON object on
// the error stream.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace r3::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kInputError = 2,
  kInfeasible = 3,
  kVerificationFailed = 4,
};

struct RunConfig {
  std::string topology;
  std::string demand;  // CSV path; empty selects the PageRank model
  double D = 1e-2;
  double damping = 0.85;
  int F = 1;
  bool wireless = false;
  std::string mode = "full";  // "full" | "relaxed"
  bool excuse_unreachable = false;
  std::vector<double> sweep_D;
  std::vector<int> sweep_F;
  int top_k = 10;
  std::string output_dir = ".";
  std::uint64_t seed = 1;
  std::string solution;  // input solution JSON for reconfigure/verify/maxload
  std::string trace;
  int exhaustive = -1;  // verify: failure subsets up to this size; -1 means F
  int sampled = 0;
};

/// Checks the invariants that do not need file access. Throws InputError.
void validate(const RunConfig& config);

/// Fills every field present in the JSON object; keys match the long flag
/// names with dashes replaced by underscores. Throws InputError.
void apply_json_config(RunConfig& config, const std::string& json_text,
                       const std::vector<std::string>& skip = {});

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_reconfigure(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_demand(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_maxload(const RunConfig& config, std::ostream& out, std::ostream& err);

/// One row of sweep.csv.
struct SweepPoint {
  double D = 0.0;
  int F = 0;
  std::string status;  // "optimal" or the failure class
  double mu = 0.0;
  double effective_mu = 0.0;
  int argmax_link = -1;  // original link id, 0-based
  std::vector<std::pair<int, double>> top;  // (original link, utilization)
};

/// Parses the sweep.csv written by cmd_sweep.
std::vector<SweepPoint> read_sweep_csv(const std::string& text);

}  // namespace r3::cli
