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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsdpstab/bench.hpp"
#include "nsdpstab/error.hpp"

using namespace nsdp;

namespace {

std::vector<BenchJob> small_p2_jobs(int count, SolverKind solver) {
  std::vector<BenchJob> jobs;
  for (int s = 0; s < count; ++s)
    jobs.push_back(BenchJob{InstanceSpec{Family::P2, 8, 3, 1e-3, std::uint64_t(s)}, solver});
  return jobs;
}

}  // namespace

TEST_CASE("solver kind names round-trip") {
  CHECK(std::string(solver_kind_name(SolverKind::Sqsdp)) == "sqsdp");
  CHECK(std::string(solver_kind_name(SolverKind::Al)) == "al");
  CHECK(solver_kind_from_name("sqsdp") == SolverKind::Sqsdp);
  CHECK(solver_kind_from_name("al") == SolverKind::Al);
  CHECK_THROWS_AS(solver_kind_from_name("newton"), Error);
}

TEST_CASE("format_real prints six significant digits in scientific notation") {
  CHECK(format_real(0.000123456789) == "1.23457e-04");
  CHECK(format_real(1.0) == "1.00000e+00");
  CHECK(format_real(-2.5e6) == "-2.50000e+06");
  CHECK(format_real(0.0) == "0.00000e+00");
}

TEST_CASE("csv headers are stable") {
  CHECK(aggregate_csv_header() ==
        "family,N,M,solver,count,ite_mean,ite_max,ite_min,time_mean_s,"
        "r_mean,r_max,r_min,mult_mean,mult_max,mult_min,V%,O%,M%,F%");
  CHECK(trace_csv({}).substr(0, trace_csv({}).find('\n')) ==
        "k,kind,r_v,r_o,r,sigma,gamma,phi,psi,step,inner_iters,inner_stalled,"
        "merit_f,y_norm,z_fnorm,wall_time_s");
}

TEST_CASE("a single run reports consistent fields") {
  const GeneratedInstance inst = generate(InstanceSpec{Family::P2, 8, 3, 1e-3, 2});
  const RunResult run = run_solver(inst, SolverKind::Sqsdp, SolverOptions{});

  CHECK(run.solver == SolverKind::Sqsdp);
  CHECK(run.iters == int(run.detail.log.size()));
  CHECK(run.final_r == run.detail.final_residuals.r);
  const double mult =
      std::max(norm2(run.detail.v.y), frob_norm(run.detail.v.z));
  CHECK(run.final_multiplier_norm == doctest::Approx(mult));
  const long tallied =
      std::accumulate(run.kind_counts.begin(), run.kind_counts.end(), 0L);
  CHECK(tallied == long(run.detail.log.size()));
  CHECK(run.wall_time_s >= 0.0);
  CHECK(run.status.code == TerminationCode::ResidualConverged);

  // The trace has one line per iteration plus the header.
  const std::string trace = trace_csv(run.detail.log);
  const long lines = std::count(trace.begin(), trace.end(), '\n');
  CHECK(lines == long(run.detail.log.size()) + 1);
}

TEST_CASE("job runner preserves order and is deterministic") {
  const std::vector<BenchJob> jobs = small_p2_jobs(4, SolverKind::Sqsdp);
  const SolverOptions opts;
  const std::vector<RunResult> serial = run_jobs(jobs, opts, 1);
  const std::vector<RunResult> threaded = run_jobs(jobs, opts, 3);
  REQUIRE(serial.size() == 4);
  REQUIRE(threaded.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(serial[i].instance.seed == jobs[i].spec.seed);
    CHECK(serial[i].final_r == threaded[i].final_r);
    CHECK(serial[i].iters == threaded[i].iters);
  }
}

TEST_CASE("aggregation recomputes the group statistics") {
  const std::vector<BenchJob> jobs = small_p2_jobs(5, SolverKind::Sqsdp);
  const std::vector<RunResult> runs = run_jobs(jobs, SolverOptions{}, 2);
  const AggregateRow row = aggregate(runs);

  CHECK(row.family == Family::P2);
  CHECK(row.N == 8);
  CHECK(row.M == 3);
  CHECK(row.count == 5);

  double ite_sum = 0.0, r_min = 1e300, r_max = -1e300;
  long ite_max = 0, ite_min = 1L << 40;
  for (const RunResult& run : runs) {
    ite_sum += run.iters;
    ite_max = std::max(ite_max, long(run.iters));
    ite_min = std::min(ite_min, long(run.iters));
    r_min = std::min(r_min, run.final_r);
    r_max = std::max(r_max, run.final_r);
  }
  CHECK(row.ite_mean == doctest::Approx(ite_sum / 5.0));
  CHECK(row.ite_max == ite_max);
  CHECK(row.ite_min == ite_min);
  CHECK(row.r_min == doctest::Approx(r_min));
  CHECK(row.r_max == doctest::Approx(r_max));

  // Kind percentages cover all steps.
  const double pct_sum = row.kind_pct[0] + row.kind_pct[1] + row.kind_pct[2] + row.kind_pct[3];
  CHECK(pct_sum == doctest::Approx(100.0).epsilon(1e-9));

  CHECK_THROWS_AS(aggregate({}), Error);
}

TEST_CASE("grouped aggregation splits by dims and solver") {
  std::vector<BenchJob> jobs = small_p2_jobs(2, SolverKind::Sqsdp);
  for (int s = 0; s < 2; ++s)
    jobs.push_back(BenchJob{InstanceSpec{Family::P4, 4, 0, 1e-3, std::uint64_t(s)},
                            SolverKind::Sqsdp});
  const std::vector<RunResult> runs = run_jobs(jobs, SolverOptions{}, 2);
  const std::vector<AggregateRow> rows = aggregate_by_group(runs);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].family == Family::P2);
  CHECK(rows[0].count == 2);
  CHECK(rows[1].family == Family::P4);
  CHECK(rows[1].count == 2);

  const std::string csv = aggregate_csv(rows);
  const long lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == 3);  // header + two rows
  CHECK(csv.rfind("family,N,M,solver,count", 0) == 0);
  CHECK(csv.find("p2,8,3,sqsdp,2,") != std::string::npos);
  CHECK(csv.find("p4,4,0,sqsdp,2,") != std::string::npos);
}

TEST_CASE("aggregate rows for the baseline leave the kind percentages blank") {
  const GeneratedInstance inst = generate(InstanceSpec{Family::P4, 4, 0, 1e-3, 5});
  SolverOptions opts;
  opts.al.k_max = 10;  // keep it short; statistics don't need convergence
  const RunResult run = run_solver(inst, SolverKind::Al, opts);
  const AggregateRow row = aggregate({run});
  CHECK(row.solver == SolverKind::Al);
  const std::string line = aggregate_csv_row(row);
  // The four trailing kind-percentage cells stay empty for the baseline.
  const std::string tail = line.substr(line.size() - 4);
  CHECK(tail == ",,,,");
}

TEST_CASE("run summaries serialize the key metrics") {
  const GeneratedInstance inst = generate(InstanceSpec{Family::P2, 6, 2, 1e-3, 9});
  const RunResult run = run_solver(inst, SolverKind::Sqsdp, SolverOptions{});
  const std::string js = run_result_to_json(run, "{\"r_tol\":1e-06}");
  CHECK(js.find("\"family\"") != std::string::npos);
  CHECK(js.find("\"solver\"") != std::string::npos);
  CHECK(js.find("\"final_r\"") != std::string::npos);
  CHECK(js.find("\"final_multiplier_norm\"") != std::string::npos);
  CHECK(js.find("\"status\"") != std::string::npos);
  CHECK(js.find("\"config\"") != std::string::npos);
}
