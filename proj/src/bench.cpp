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

#include "nsdpstab/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "nsdpstab/error.hpp"

namespace nsdp {

const char* solver_kind_name(SolverKind s) {
  return s == SolverKind::Sqsdp ? "sqsdp" : "al";
}

SolverKind solver_kind_from_name(const std::string& name) {
  if (name == "sqsdp") return SolverKind::Sqsdp;
  if (name == "al") return SolverKind::Al;
  throw Error("unknown solver: " + name + " (expected sqsdp or al)");
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

RunResult run_solver(const GeneratedInstance& inst, SolverKind solver,
                     const SolverOptions& opts) {
  RunResult run;
  run.instance = inst.spec;
  run.solver = solver;

  const NsdpProblem& p = *inst.problem;
  const Triplet v0 = make_zero_triplet(p);

  const auto t0 = std::chrono::steady_clock::now();
  run.detail = solver == SolverKind::Sqsdp ? solve(p, v0, opts.sqsdp)
                                           : al_solve(p, v0, opts.al);
  run.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  run.iters = int(run.detail.log.size());
  run.final_r = run.detail.final_residuals.r;
  run.final_multiplier_norm =
      std::max(norm2(run.detail.v.y), frob_norm(run.detail.v.z));
  run.status = run.detail.status;
  if (solver == SolverKind::Sqsdp)
    for (const IterationRecord& rec : run.detail.log)
      ++run.kind_counts[std::size_t(rec.kind)];
  return run;
}

std::vector<RunResult> run_jobs(const std::vector<BenchJob>& jobs, const SolverOptions& opts,
                                int jobs_count,
                                const std::function<void(std::size_t, const RunResult&)>& on_done) {
  std::vector<RunResult> results(jobs.size());
  if (jobs.empty()) return results;

  std::atomic<std::size_t> next{0};
  std::mutex done_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        const GeneratedInstance inst = generate(jobs[i].spec);
        results[i] = run_solver(inst, jobs[i].solver, opts);
      } catch (const std::exception& e) {
        // A failed run becomes a row with a failure status, not an abort.
        results[i] = RunResult{};
        results[i].instance = jobs[i].spec;
        results[i].solver = jobs[i].solver;
        results[i].final_r = std::numeric_limits<double>::infinity();
        results[i].status.code = TerminationCode::InnerSolverFailure;
        results[i].status.message = e.what();
      }
      if (on_done) {
        std::lock_guard<std::mutex> lock(done_mutex);
        on_done(i, results[i]);
      }
    }
  };

  const int workers = std::max(1, std::min<int>(jobs_count, int(jobs.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return results;
}

AggregateRow aggregate(const std::vector<RunResult>& runs) {
  require(!runs.empty(), "aggregate: empty group");
  AggregateRow row;
  row.family = runs.front().instance.family;
  row.N = runs.front().instance.N;
  row.M = runs.front().instance.M;
  row.solver = runs.front().solver;
  row.count = int(runs.size());

  row.ite_max = row.ite_min = runs.front().iters;
  row.r_max = row.r_min = runs.front().final_r;
  row.mult_max = row.mult_min = runs.front().final_multiplier_norm;

  double ite_sum = 0.0, time_sum = 0.0, r_sum = 0.0, mult_sum = 0.0;
  std::array<long, 4> kinds{};
  for (const RunResult& run : runs) {
    require(run.instance.family == row.family && run.instance.N == row.N &&
                run.instance.M == row.M && run.solver == row.solver,
            "aggregate: mixed group");
    ite_sum += run.iters;
    time_sum += run.wall_time_s;
    r_sum += run.final_r;
    mult_sum += run.final_multiplier_norm;
    row.ite_max = std::max(row.ite_max, long(run.iters));
    row.ite_min = std::min(row.ite_min, long(run.iters));
    row.r_max = std::max(row.r_max, run.final_r);
    row.r_min = std::min(row.r_min, run.final_r);
    row.mult_max = std::max(row.mult_max, run.final_multiplier_norm);
    row.mult_min = std::min(row.mult_min, run.final_multiplier_norm);
    for (std::size_t k = 0; k < 4; ++k) kinds[k] += run.kind_counts[k];
  }
  row.ite_mean = ite_sum / row.count;
  row.time_mean_s = time_sum / row.count;
  row.r_mean = r_sum / row.count;
  row.mult_mean = mult_sum / row.count;

  if (row.solver == SolverKind::Sqsdp) {
    const long total = kinds[0] + kinds[1] + kinds[2] + kinds[3];
    if (total > 0)
      for (std::size_t k = 0; k < 4; ++k)
        row.kind_pct[k] = 100.0 * double(kinds[k]) / double(total);
  }
  return row;
}

std::vector<AggregateRow> aggregate_by_group(const std::vector<RunResult>& runs) {
  struct Key {
    Family family;
    int n, m;
    SolverKind solver;
    bool operator==(const Key&) const = default;
  };
  std::vector<Key> order;
  std::vector<std::vector<RunResult>> groups;
  for (const RunResult& run : runs) {
    const Key key{run.instance.family, run.instance.N, run.instance.M, run.solver};
    const auto it = std::find(order.begin(), order.end(), key);
    if (it == order.end()) {
      order.push_back(key);
      groups.emplace_back();
      groups.back().push_back(run);
    } else {
      groups[std::size_t(it - order.begin())].push_back(run);
    }
  }
  std::vector<AggregateRow> rows;
  rows.reserve(groups.size());
  for (const auto& g : groups) rows.push_back(aggregate(g));
  return rows;
}

std::string aggregate_csv_header() {
  return "family,N,M,solver,count,ite_mean,ite_max,ite_min,time_mean_s,"
         "r_mean,r_max,r_min,mult_mean,mult_max,mult_min,V%,O%,M%,F%";
}

std::string aggregate_csv_row(const AggregateRow& row) {
  std::string s;
  s += family_name(row.family);
  s += ',' + std::to_string(row.N);
  s += ',' + std::to_string(row.M);
  s += ',';
  s += solver_kind_name(row.solver);
  s += ',' + std::to_string(row.count);
  s += ',' + format_real(row.ite_mean);
  s += ',' + std::to_string(row.ite_max);
  s += ',' + std::to_string(row.ite_min);
  s += ',' + format_real(row.time_mean_s);
  s += ',' + format_real(row.r_mean);
  s += ',' + format_real(row.r_max);
  s += ',' + format_real(row.r_min);
  s += ',' + format_real(row.mult_mean);
  s += ',' + format_real(row.mult_max);
  s += ',' + format_real(row.mult_min);
  for (std::size_t k = 0; k < 4; ++k) {
    s += ',';
    if (row.solver == SolverKind::Sqsdp) s += format_real(row.kind_pct[k]);
  }
  return s;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string s = aggregate_csv_header() + "\n";
  for (const AggregateRow& row : rows) s += aggregate_csv_row(row) + "\n";
  return s;
}

std::string trace_csv(const std::vector<IterationRecord>& log) {
  std::string s =
      "k,kind,r_v,r_o,r,sigma,gamma,phi,psi,step,inner_iters,inner_stalled,"
      "merit_f,y_norm,z_fnorm,wall_time_s\n";
  for (const IterationRecord& rec : log) {
    s += std::to_string(rec.k);
    s += ',';
    s += iterate_kind_char(rec.kind);
    s += ',' + format_real(rec.r_v);
    s += ',' + format_real(rec.r_o);
    s += ',' + format_real(rec.r);
    s += ',' + format_real(rec.sigma);
    s += ',' + format_real(rec.gamma);
    s += ',' + format_real(rec.phi);
    s += ',' + format_real(rec.psi);
    s += ',' + format_real(rec.step_size);
    s += ',' + std::to_string(rec.inner_iters);
    s += ',' + std::to_string(int(rec.inner_stalled));
    s += ',' + format_real(rec.merit_f);
    s += ',' + format_real(rec.y_norm);
    s += ',' + format_real(rec.z_fnorm);
    s += ',' + format_real(rec.wall_time);
    s += '\n';
  }
  return s;
}

std::string run_result_to_json(const RunResult& run, const std::string& config_echo_json) {
  nlohmann::ordered_json j;
  j["instance"] = {{"family", family_name(run.instance.family)},
                   {"N", run.instance.N},
                   {"M", run.instance.M},
                   {"eta", run.instance.eta},
                   {"seed", run.instance.seed}};
  j["solver"] = solver_kind_name(run.solver);
  j["iters"] = run.iters;
  j["wall_time_s"] = run.wall_time_s;
  j["final_r"] = run.final_r;
  j["final_multiplier_norm"] = run.final_multiplier_norm;

  nlohmann::ordered_json st;
  st["code"] = termination_code_name(run.status.code);
  st["grad_h_norm"] = run.status.grad_h_norm;
  st["h_stationary"] = run.status.h_stationary;
  st["al_eig_test"] = run.status.al_eig_test;
  st["takkt_consistent"] = run.status.diag.takkt_consistent;
  st["akkt_consistent"] = run.status.diag.akkt_consistent;
  if (!run.status.message.empty()) st["message"] = run.status.message;
  j["status"] = std::move(st);

  if (run.solver == SolverKind::Sqsdp)
    j["kind_counts"] = {{"V", run.kind_counts[0]},
                        {"O", run.kind_counts[1]},
                        {"M", run.kind_counts[2]},
                        {"F", run.kind_counts[3]}};
  if (!config_echo_json.empty()) {
    try {
      j["config"] = nlohmann::ordered_json::parse(config_echo_json);
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("config echo: ") + e.what());
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace nsdp
