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

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsdpstab/bench.hpp"
#include "nsdpstab/error.hpp"

namespace {

using nsdp::Family;
using nsdp::GeneratedInstance;
using nsdp::InstanceSpec;
using nsdp::SolverKind;
using nsdp::SolverOptions;
using nsdp::TerminationCode;

std::uint64_t env_seed_base() {
  const char* s = std::getenv("NSDP_STAB_SEED");
  if (s == nullptr || *s == '\0') return 0;
  return std::strtoull(s, nullptr, 10);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  nsdp::require(bool(out), "cannot open output file: " + path);
  out << text;
  nsdp::require(bool(out), "failed writing output file: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  nsdp::require(bool(in), "cannot open instance file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int status_exit_code(TerminationCode code) {
  switch (code) {
    case TerminationCode::ResidualConverged:
    case TerminationCode::GammaConverged: return 0;
    case TerminationCode::MaxIterations: return 2;
    default: return 3;
  }
}

nlohmann::ordered_json sqsdp_config_json(const nsdp::SqsdpConfig& c) {
  return nlohmann::ordered_json{
      {"solver", "sqsdp"},   {"r_tol", c.r_tol},
      {"gamma_tol", c.gamma_tol}, {"k_max", c.k_max},
      {"sigma0", c.sigma0},  {"gamma0", c.gamma0},
      {"phi0", c.phi0},      {"psi0", c.psi0},
      {"kappa", c.kappa},    {"tau", c.tau},
      {"omega", c.omega},    {"beta", c.beta},
      {"ls_cap", c.ls_cap},  {"ymax", c.ymax},
      {"zmax", c.zmax},      {"c1", c.trunc.c1},
      {"c2", c.trunc.c2},    {"inner_tol", c.trunc.inner_tol},
      {"inner_cap", c.trunc.inner_cap},
      {"hessian", c.hessian_mode == nsdp::HessianMode::Identity ? "identity" : "lagrangian"}};
}

nlohmann::ordered_json al_config_json(const nsdp::AlConfig& c) {
  return nlohmann::ordered_json{
      {"solver", "al"},        {"eps", c.eps},
      {"k_max", c.k_max},      {"rho0", c.rho0},
      {"tau_dec", c.tau_dec},  {"rho_growth", c.rho_growth},
      {"ymax", c.ymax},        {"zmax", c.zmax},
      {"inner_tol", c.inner_tol}, {"inner_cap", c.inner_cap}};
}

std::string config_echo(SolverKind solver, const SolverOptions& opts) {
  return (solver == SolverKind::Sqsdp ? sqsdp_config_json(opts.sqsdp)
                                      : al_config_json(opts.al))
      .dump();
}

struct SpecFlags {
  std::string family;
  int n = 0;
  int m = 0;
  double eta = 1e-3;
  std::uint64_t seed = 0;
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f, bool required) {
  auto* fam = cmd->add_option("--family", f.family, "problem family: p1, p2, p3 or p4");
  auto* n = cmd->add_option("--n", f.n, "matrix dimension N");
  if (required) {
    fam->required();
    n->required();
  }
  cmd->add_option("--m", f.m, "equality count M (p2 only)");
  cmd->add_option("--eta", f.eta, "diagonal shift (p4 only)")->capture_default_str();
  cmd->add_option("--seed", f.seed, "instance seed (default: NSDP_STAB_SEED or 0)");
}

InstanceSpec spec_from_flags(const SpecFlags& f, bool seed_given) {
  InstanceSpec spec;
  spec.family = nsdp::family_from_name(f.family);
  spec.N = f.n;
  spec.M = f.m;
  spec.eta = f.eta;
  spec.seed = seed_given ? f.seed : env_seed_base();
  if (spec.family == Family::P2)
    nsdp::require(f.m > 0, "--m is required for family p2 (0 < M <= N)");
  return spec;
}

void add_solver_flags(CLI::App* cmd, SolverOptions& o) {
  cmd->add_option("--r-tol", o.sqsdp.r_tol, "KKT residual tolerance")->capture_default_str();
  cmd->add_option("--gamma-tol", o.sqsdp.gamma_tol, "gamma stop tolerance")
      ->capture_default_str();
  cmd->add_option_function<int>(
         "--k-max", [&o](int v) { o.sqsdp.k_max = v; o.al.k_max = v; },
         "outer iteration cap (both solvers)")
      ->expected(1);
  cmd->add_option("--sigma0", o.sqsdp.sigma0, "initial penalty parameter")
      ->capture_default_str();
  cmd->add_option("--sigma-floor", o.sqsdp.sigma_floor, "smallest penalty parameter")
      ->capture_default_str();
  cmd->add_option("--gamma0", o.sqsdp.gamma0, "initial gamma threshold")->capture_default_str();
  cmd->add_option("--phi0", o.sqsdp.phi0, "initial V-iterate threshold")->capture_default_str();
  cmd->add_option("--psi0", o.sqsdp.psi0, "initial O-iterate threshold")->capture_default_str();
  cmd->add_option_function<double>(
         "--kappa", [&o](double v) { o.sqsdp.kappa = v; o.al.kappa = v; },
         "residual weighting constant (both solvers)")
      ->expected(1);
  cmd->add_option("--tau", o.sqsdp.tau, "line search sufficient decrease")
      ->capture_default_str();
  cmd->add_option("--omega", o.sqsdp.omega, "decrease predictor floor")->capture_default_str();
  cmd->add_option("--beta", o.sqsdp.beta, "backtracking factor")->capture_default_str();
  cmd->add_option("--ls-cap", o.sqsdp.ls_cap, "line search cap")->capture_default_str();
  cmd->add_option_function<double>(
         "--ymax", [&o](double v) { o.sqsdp.ymax = v; o.al.ymax = v; },
         "multiplier safeguard bound (both solvers)")
      ->expected(1);
  cmd->add_option_function<double>(
         "--zmax", [&o](double v) { o.sqsdp.zmax = v; o.al.zmax = v; },
         "matrix multiplier safeguard bound (both solvers)")
      ->expected(1);
  cmd->add_option("--c1", o.sqsdp.trunc.c1, "truncation decrease constant")
      ->capture_default_str();
  cmd->add_option("--c2", o.sqsdp.trunc.c2, "truncation residual constant")
      ->capture_default_str();
  cmd->add_option("--inner-tol", o.sqsdp.trunc.inner_tol, "subproblem gradient tolerance")
      ->capture_default_str();
  cmd->add_option("--inner-cap", o.sqsdp.trunc.inner_cap, "subproblem iteration cap")
      ->capture_default_str();
  cmd->add_option_function<std::string>(
         "--hessian",
         [&o](const std::string& v) {
           if (v == "identity") {
             o.sqsdp.hessian_mode = nsdp::HessianMode::Identity;
           } else if (v == "lagrangian") {
             o.sqsdp.hessian_mode = nsdp::HessianMode::Lagrangian;
           } else {
             throw CLI::ValidationError("--hessian", "expected identity or lagrangian");
           }
         },
         "curvature model: identity or lagrangian")
      ->expected(1);
  cmd->add_option("--eps", o.al.eps, "al: stopping tolerance")->capture_default_str();
  cmd->add_option("--rho0", o.al.rho0, "al: initial penalty parameter")->capture_default_str();
  cmd->add_option("--tau-dec", o.al.tau_dec, "al: required progress factor")
      ->capture_default_str();
  cmd->add_option("--rho-growth", o.al.rho_growth, "al: penalty growth factor")
      ->capture_default_str();
  cmd->add_option("--al-inner-tol", o.al.inner_tol, "al: subproblem gradient tolerance")
      ->capture_default_str();
  cmd->add_option("--al-inner-cap", o.al.inner_cap, "al: subproblem iteration cap")
      ->capture_default_str();
}

std::string run_file_stem(const InstanceSpec& spec, SolverKind solver) {
  std::string s = nsdp::family_name(spec.family);
  s += "_N" + std::to_string(spec.N);
  if (spec.family == Family::P2) s += "_M" + std::to_string(spec.M);
  s += std::string("_") + nsdp::solver_kind_name(solver);
  s += "_seed" + std::to_string(spec.seed);
  return s;
}

int cmd_gen(const SpecFlags& flags, bool seed_given, int alpha_zero,
            const std::string& output) {
  InstanceSpec spec = spec_from_flags(flags, seed_given);
  GeneratedInstance inst;
  if (spec.family == Family::P2) {
    inst = nsdp::gen_p2(spec.N, spec.M, spec.seed, alpha_zero);
  } else {
    inst = nsdp::generate(spec);
  }
  write_text(output, nsdp::instance_to_json(inst));
  std::ostream& dims = (output.empty() || output == "-") ? std::cerr : std::cout;
  dims << nsdp::family_name(spec.family) << ": n=" << inst.problem->num_vars()
       << " m=" << inst.problem->num_eq() << " d=" << inst.problem->cone_dim() << "\n";
  return 0;
}

int cmd_solve(const std::string& instance_path, const SpecFlags& flags, bool seed_given,
              const std::string& solver_name, const SolverOptions& opts,
              const std::string& output, const std::string& trace_path) {
  const SolverKind solver = nsdp::solver_kind_from_name(solver_name);
  GeneratedInstance inst;
  if (!instance_path.empty()) {
    inst = nsdp::instance_from_json(read_text(instance_path));
  } else {
    nsdp::require(!flags.family.empty() && flags.n > 0,
                  "solve needs --instance FILE or --family/--n");
    inst = nsdp::generate(spec_from_flags(flags, seed_given));
  }

  const nsdp::RunResult run = nsdp::run_solver(inst, solver, opts);
  write_text(output, nsdp::run_result_to_json(run, config_echo(solver, opts)));
  if (!trace_path.empty()) write_text(trace_path, nsdp::trace_csv(run.detail.log));
  return status_exit_code(run.status.code);
}

struct BenchFlags {
  std::string family;
  std::vector<int> dims;
  std::vector<int> ms;
  double eta = 1e-3;
  int runs = 10;
  std::uint64_t seed_base = 0;
  bool seed_base_given = false;
  std::vector<std::string> solvers;
  int jobs = 1;
  std::string output;
  std::string run_dir;
};

int cmd_bench(const BenchFlags& f, const SolverOptions& opts) {
  const Family family = nsdp::family_from_name(f.family);
  nsdp::require(!f.solvers.empty(), "bench needs at least one --solver");
  nsdp::require(f.runs > 0, "--runs must be positive");
  std::vector<SolverKind> solvers;
  for (const std::string& s : f.solvers) solvers.push_back(nsdp::solver_kind_from_name(s));

  if (family == Family::P2) {
    nsdp::require(f.ms.size() == f.dims.size(),
                  "family p2 needs one --m per --n (pairwise dims)");
  }
  const std::uint64_t base = f.seed_base_given ? f.seed_base : env_seed_base();

  std::vector<nsdp::BenchJob> jobs;
  for (std::size_t i = 0; i < f.dims.size(); ++i)
    for (const SolverKind solver : solvers)
      for (int s = 0; s < f.runs; ++s) {
        InstanceSpec spec;
        spec.family = family;
        spec.N = f.dims[i];
        spec.M = family == Family::P2 ? f.ms[i] : 0;
        spec.eta = f.eta;
        spec.seed = base + std::uint64_t(s);
        jobs.push_back(nsdp::BenchJob{spec, solver});
      }

  if (!f.run_dir.empty()) std::filesystem::create_directories(f.run_dir);

  const auto on_done = [&](std::size_t, const nsdp::RunResult& run) {
    if (f.run_dir.empty()) return;
    const std::string stem = f.run_dir + "/" + run_file_stem(run.instance, run.solver);
    write_text(stem + ".json", nsdp::run_result_to_json(run, config_echo(run.solver, opts)));
    write_text(stem + ".trace.csv", nsdp::trace_csv(run.detail.log));
  };

  const std::vector<nsdp::RunResult> results = nsdp::run_jobs(jobs, opts, f.jobs, on_done);
  write_text(f.output, nsdp::aggregate_csv(nsdp::aggregate_by_group(results)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlinear semidefinite programming test bench"};
  app.require_subcommand(1);

  SolverOptions opts;

  SpecFlags gen_flags;
  int alpha_zero = -1;
  std::string gen_output;
  CLI::App* gen = app.add_subcommand("gen", "generate a test instance as JSON");
  add_spec_flags(gen, gen_flags, true);
  gen->add_option("--alpha-zero-index", alpha_zero,
                  "p2: index of the alpha entry forced to zero (-1 = last)")
      ->capture_default_str();
  gen->add_option("-o,--output", gen_output, "output path (default: stdout)");

  SpecFlags solve_flags;
  std::string instance_path, solver_name = "sqsdp", solve_output, trace_path;
  CLI::App* solve = app.add_subcommand("solve", "run one solver on one instance");
  solve->add_option("--instance", instance_path, "instance JSON file");
  add_spec_flags(solve, solve_flags, false);
  solve->add_option("--solver", solver_name, "sqsdp or al")->capture_default_str();
  solve->add_option("-o,--output", solve_output, "run summary JSON (default: stdout)");
  solve->add_option("--trace", trace_path, "per-iteration CSV path");
  add_solver_flags(solve, opts);

  BenchFlags bench_flags;
  CLI::App* bench = app.add_subcommand("bench", "aggregate runs over seeds 0..runs-1");
  bench->add_option("--family", bench_flags.family, "problem family")->required();
  bench->add_option("--n", bench_flags.dims, "matrix dimensions (repeatable)")->required();
  bench->add_option("--m", bench_flags.ms, "equality counts, paired with --n (p2)");
  bench->add_option("--eta", bench_flags.eta, "diagonal shift (p4)")->capture_default_str();
  bench->add_option("--runs", bench_flags.runs, "instances per dimension")
      ->capture_default_str();
  bench->add_option("--seed-base", bench_flags.seed_base,
                    "first seed (default: NSDP_STAB_SEED or 0)");
  bench->add_option("--solver", bench_flags.solvers, "solver set: sqsdp and/or al (repeatable)")
      ->required();
  bench->add_option("--jobs", bench_flags.jobs, "worker threads")->capture_default_str();
  bench->add_option("-o,--output", bench_flags.output, "aggregate CSV (default: stdout)");
  bench->add_option("--run-dir", bench_flags.run_dir, "directory for per-run JSON/CSV logs");
  add_solver_flags(bench, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(gen_flags, gen->count("--seed") > 0, alpha_zero, gen_output);
    if (solve->parsed())
      return cmd_solve(instance_path, solve_flags, solve->count("--seed") > 0, solver_name,
                       opts, solve_output, trace_path);
    bench_flags.seed_base_given = bench->count("--seed-base") > 0;
    return cmd_bench(bench_flags, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
}
