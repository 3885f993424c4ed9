/*
 * Copyright 2026 The nsdp-stab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef NSDPSTAB_BENCH_HPP
#define NSDPSTAB_BENCH_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "nsdpstab/almethod.hpp"
#include "nsdpstab/problems.hpp"
#include "nsdpstab/sqsdp.hpp"

namespace nsdp {

enum class SolverKind { Sqsdp, Al };

const char* solver_kind_name(SolverKind s);            // "sqsdp" / "al"
SolverKind solver_kind_from_name(const std::string&);  // throws Error

struct SolverOptions {
  SqsdpConfig sqsdp;
  AlConfig al;
};

struct RunResult {
  InstanceSpec instance;
  SolverKind solver = SolverKind::Sqsdp;
  int iters = 0;
  double wall_time_s = 0.0;
  double final_r = 0.0;
  double final_multiplier_norm = 0.0;  // max{||y*||, ||Z*||_F}
  TerminationStatus status;
  std::array<long, 4> kind_counts{};  // V, O, M, F tallies (sqsdp only)
  SolveResult detail;
};

// Runs one solver on one instance from the zero starting triplet.
RunResult run_solver(const GeneratedInstance& inst, SolverKind solver,
                     const SolverOptions& opts);

struct BenchJob {
  InstanceSpec spec;
  SolverKind solver = SolverKind::Sqsdp;
};

// Executes the jobs (worker threads when jobs_count > 1) and returns the
// results in job order. on_done, when set, is called under a lock as runs
// finish and may write per-run artifacts.
std::vector<RunResult> run_jobs(const std::vector<BenchJob>& jobs, const SolverOptions& opts,
                                int jobs_count,
                                const std::function<void(std::size_t, const RunResult&)>& on_done =
                                    nullptr);

struct AggregateRow {
  Family family = Family::P1;
  int N = 0;
  int M = 0;
  SolverKind solver = SolverKind::Sqsdp;
  int count = 0;
  double ite_mean = 0.0;
  long ite_max = 0;
  long ite_min = 0;
  double time_mean_s = 0.0;
  double r_mean = 0.0, r_max = 0.0, r_min = 0.0;
  double mult_mean = 0.0, mult_max = 0.0, mult_min = 0.0;
  std::array<double, 4> kind_pct{};  // V, O, M, F; meaningful for sqsdp only
};

// Reduces runs sharing one (family, dims, solver) group. Throws on an
// empty or mixed group.
AggregateRow aggregate(const std::vector<RunResult>& runs);

// Groups by (family, N, M, solver) preserving first-appearance order.
std::vector<AggregateRow> aggregate_by_group(const std::vector<RunResult>& runs);

std::string aggregate_csv_header();
std::string aggregate_csv_row(const AggregateRow& row);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);

// Per-iteration log in CSV form.
std::string trace_csv(const std::vector<IterationRecord>& log);

// Scientific notation with six significant digits, '.' decimal separator.
std::string format_real(double v);

// Serialized run summary (instance, status, final metrics, per-kind
// tallies); `config` may carry an echo of the effective solver settings.
std::string run_result_to_json(const RunResult& run, const std::string& config_echo_json = "");

}  // namespace nsdp

#endif
