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

#include "nsdpstab/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <json.hpp>

#include "nsdpstab/error.hpp"
#include "nsdpstab/rng.hpp"

namespace nsdp {

namespace {

// Linear objective, affine constraints, X(x) = smat(x) + shift. Covers the
// degenerate families: the variable is the symmetric vectorization of X,
// so A is the smat/svec pair and all derivatives are constant.
class LinearSdpProblem final : public NsdpProblem {
 public:
  LinearSdpProblem(int d, Vec grad, Matrix jac, Vec rhs, double diag_shift)
      : d_(d),
        n_(int(SymMatrix::packed_size(d))),
        grad_(std::move(grad)),
        jac_(std::move(jac)),
        rhs_(std::move(rhs)),
        diag_shift_(diag_shift) {
    require_dims(int(grad_.size()) == n_ && jac_.cols() == n_ &&
                     jac_.rows() == int(rhs_.size()),
                 "LinearSdpProblem: inconsistent dimensions");
  }

  int num_vars() const override { return n_; }
  int num_eq() const override { return jac_.rows(); }
  int cone_dim() const override { return d_; }

  double eval_f(std::span<const double> x) const override { return dot(grad_, x); }
  void grad_f(std::span<const double>, std::span<double> out) const override {
    std::copy(grad_.begin(), grad_.end(), out.begin());
  }

  void eval_g(std::span<const double> x, std::span<double> out) const override {
    matvec(jac_, x, out);
    for (std::size_t j = 0; j < rhs_.size(); ++j) out[j] -= rhs_[j];
  }
  void jac_g(std::span<const double>, Matrix& out) const override { out = jac_; }

  void eval_X(std::span<const double> x, SymMatrix& out) const override {
    smat_into(x, out);
    for (int i = 0; i < d_; ++i) out.at(i, i) += diag_shift_;
  }
  void apply_A(std::span<const double>, std::span<const double> u,
               SymMatrix& out) const override {
    smat_into(u, out);
  }
  void apply_A_adj(std::span<const double>, const SymMatrix& u,
                   std::span<double> out) const override {
    svec_into(u, out);
  }

  bool has_hess_lagrangian() const override { return true; }
  void hess_lagrangian(std::span<const double>, std::span<const double>,
                       const SymMatrix&, Matrix& out) const override {
    out.set_zero();
  }

 private:
  int d_;
  int n_;
  Vec grad_;
  Matrix jac_;
  Vec rhs_;
  double diag_shift_;
};

// Nearest correlation matrix: quadratic objective over svec coordinates,
// unit-diagonal constraints, X(x) = smat(x) - eta I.
class NearestCorrelationProblem final : public NsdpProblem {
 public:
  NearestCorrelationProblem(int d, Vec a_svec, double eta)
      : d_(d), n_(int(SymMatrix::packed_size(d))), a_svec_(std::move(a_svec)), eta_(eta) {
    require_dims(int(a_svec_.size()) == n_, "NearestCorrelationProblem: bad target");
  }

  int num_vars() const override { return n_; }
  int num_eq() const override { return d_; }
  int cone_dim() const override { return d_; }

  double eval_f(std::span<const double> x) const override {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
      const double r = x[i] - a_svec_[i];
      s += r * r;
    }
    return 0.5 * s;
  }
  void grad_f(std::span<const double> x, std::span<double> out) const override {
    for (int i = 0; i < n_; ++i) out[i] = x[i] - a_svec_[i];
  }

  void eval_g(std::span<const double> x, std::span<double> out) const override {
    for (int j = 0; j < d_; ++j) out[j] = x[SymMatrix::index(j, j)] - 1.0;
  }
  void jac_g(std::span<const double>, Matrix& out) const override {
    out.set_zero();
    for (int j = 0; j < d_; ++j) out(j, int(SymMatrix::index(j, j))) = 1.0;
  }

  void eval_X(std::span<const double> x, SymMatrix& out) const override {
    smat_into(x, out);
    for (int i = 0; i < d_; ++i) out.at(i, i) -= eta_;
  }
  void apply_A(std::span<const double>, std::span<const double> u,
               SymMatrix& out) const override {
    smat_into(u, out);
  }
  void apply_A_adj(std::span<const double>, const SymMatrix& u,
                   std::span<double> out) const override {
    svec_into(u, out);
  }

  bool has_hess_lagrangian() const override { return true; }
  void hess_lagrangian(std::span<const double>, std::span<const double>,
                       const SymMatrix&, Matrix& out) const override {
    out.set_zero();
    for (int i = 0; i < n_; ++i) out(i, i) = 1.0;
  }

 private:
  int d_;
  int n_;
  Vec a_svec_;
  double eta_;
};

// Gaussian channel capacity. Variables (x, t) in R^{2N}; the cone is one
// block-diagonal matrix of dimension 4N + 1:
//
//   rows 2j, 2j+1      [[1 - a_j t_j, sqrt(r_j)], [sqrt(r_j), a_j x_j + r_j]]
//   row 2N + j         x_j
//   row 3N + j         t_j
//   row 4N             1 - (1/N) sum_j x_j
class ChannelCapacityProblem final : public NsdpProblem {
 public:
  ChannelCapacityProblem(Vec a, Vec r) : nb_(int(a.size())), a_(std::move(a)), r_(std::move(r)) {
    require_dims(a_.size() == r_.size() && nb_ >= 1, "ChannelCapacityProblem: bad data");
    sqrt_r_.resize(r_.size());
    for (std::size_t j = 0; j < r_.size(); ++j) {
      require(r_[j] >= 0.0, "ChannelCapacityProblem: negative noise power");
      sqrt_r_[j] = std::sqrt(r_[j]);
    }
  }

  int num_vars() const override { return 2 * nb_; }
  int num_eq() const override { return 0; }
  int cone_dim() const override { return 4 * nb_ + 1; }

  double eval_f(std::span<const double> x) const override {
    double s = 0.0;
    for (int j = 0; j < nb_; ++j) s += std::log(1.0 + x[nb_ + j]);
    return -0.5 * s;
  }
  void grad_f(std::span<const double> x, std::span<double> out) const override {
    for (int j = 0; j < nb_; ++j) {
      out[j] = 0.0;
      out[nb_ + j] = -0.5 / (1.0 + x[nb_ + j]);
    }
  }

  void eval_g(std::span<const double>, std::span<double>) const override {}
  void jac_g(std::span<const double>, Matrix& out) const override { out.set_zero(); }

  void eval_X(std::span<const double> v, SymMatrix& out) const override {
    out.set_zero();
    double xsum = 0.0;
    for (int j = 0; j < nb_; ++j) {
      const double xj = v[j];
      const double tj = v[nb_ + j];
      out.at(2 * j, 2 * j) = 1.0 - a_[j] * tj;
      out.at(2 * j + 1, 2 * j) = sqrt_r_[j];
      out.at(2 * j + 1, 2 * j + 1) = a_[j] * xj + r_[j];
      out.at(2 * nb_ + j, 2 * nb_ + j) = xj;
      out.at(3 * nb_ + j, 3 * nb_ + j) = tj;
      xsum += xj;
    }
    out.at(4 * nb_, 4 * nb_) = 1.0 - xsum / nb_;
  }

  void apply_A(std::span<const double>, std::span<const double> u,
               SymMatrix& out) const override {
    out.set_zero();
    double usum = 0.0;
    for (int j = 0; j < nb_; ++j) {
      const double ux = u[j];
      const double ut = u[nb_ + j];
      out.at(2 * j, 2 * j) = -a_[j] * ut;
      out.at(2 * j + 1, 2 * j + 1) = a_[j] * ux;
      out.at(2 * nb_ + j, 2 * nb_ + j) = ux;
      out.at(3 * nb_ + j, 3 * nb_ + j) = ut;
      usum += ux;
    }
    out.at(4 * nb_, 4 * nb_) = -usum / nb_;
  }

  void apply_A_adj(std::span<const double>, const SymMatrix& u,
                   std::span<double> out) const override {
    const double tail = u(4 * nb_, 4 * nb_) / nb_;
    for (int j = 0; j < nb_; ++j) {
      out[j] = a_[j] * u(2 * j + 1, 2 * j + 1) + u(2 * nb_ + j, 2 * nb_ + j) - tail;
      out[nb_ + j] = -a_[j] * u(2 * j, 2 * j) + u(3 * nb_ + j, 3 * nb_ + j);
    }
  }

  bool has_hess_lagrangian() const override { return true; }
  void hess_lagrangian(std::span<const double> x, std::span<const double>,
                       const SymMatrix&, Matrix& out) const override {
    out.set_zero();
    for (int j = 0; j < nb_; ++j) {
      const double w = 1.0 + x[nb_ + j];
      out(nb_ + j, nb_ + j) = 0.5 / (w * w);
    }
  }

 private:
  int nb_;
  Vec a_;
  Vec r_;
  Vec sqrt_r_;
};

Vec symmetric_to_svec(const Vec& full, int d) {
  require_dims(full.size() == std::size_t(d) * d, "symmetric_to_svec: bad length");
  SymMatrix s(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) s.at(i, j) = full[std::size_t(i) * d + j];
  return svec(s);
}

Vec random_symmetric_full(int d, Rng& rng, double lo, double hi) {
  Vec full(std::size_t(d) * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = rng.uniform(lo, hi);
      full[std::size_t(i) * d + j] = v;
      full[std::size_t(j) * d + i] = v;
    }
  return full;
}

// Orthonormal columns via modified Gram-Schmidt on a Gaussian matrix,
// with the sign convention R_jj > 0.
Vec random_orthogonal_full(int d, Rng& rng) {
  Matrix q(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) q(i, j) = rng.normal();

  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < j; ++k) {
      double proj = 0.0;
      for (int i = 0; i < d; ++i) proj += q(i, k) * q(i, j);
      for (int i = 0; i < d; ++i) q(i, j) -= proj * q(i, k);
    }
    double nrm = 0.0;
    for (int i = 0; i < d; ++i) nrm += q(i, j) * q(i, j);
    nrm = std::sqrt(nrm);
    require(nrm > 1e-12, "random_orthogonal_full: rank-deficient draw");
    const double s = (q(j, j) < 0.0 ? -1.0 : 1.0) / nrm;
    for (int i = 0; i < d; ++i) q(i, j) *= s;
  }

  Vec full(std::size_t(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) full[std::size_t(i) * d + j] = q(i, j);
  return full;
}

const Vec& named(const std::map<std::string, Vec>& data, const char* key) {
  const auto it = data.find(key);
  require(it != data.end(), "instance data: missing array");
  return it->second;
}

std::shared_ptr<const NsdpProblem> build_p1(int N, const Vec& c_full) {
  require(N >= 2, "p1: N must be at least 2");
  const int n = int(SymMatrix::packed_size(N));
  Matrix jac(N + 1, n);
  for (int j = 0; j < N; ++j) jac(j, int(SymMatrix::index(j, j))) = 1.0;
  SymMatrix ones(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j <= i; ++j) ones.at(i, j) = 1.0;
  svec_into(ones, jac.row_span(N));

  Vec rhs(N + 1, 1.0);
  rhs[N] = 0.0;
  return std::make_shared<LinearSdpProblem>(N, symmetric_to_svec(c_full, N), std::move(jac),
                                            std::move(rhs), 0.0);
}

std::shared_ptr<const NsdpProblem> build_p2(int N, int M, const Vec& v_full, const Vec& alpha,
                                            const Vec& b) {
  require(N >= 1 && M >= 1 && M <= N, "p2: need 0 < M <= N");
  require_dims(v_full.size() == std::size_t(N) * N && int(alpha.size()) == N &&
                   int(b.size()) == M,
               "p2: inconsistent data arrays");
  const int n = int(SymMatrix::packed_size(N));

  std::vector<SymMatrix> basis;
  basis.reserve(N);
  for (int j = 0; j < N; ++j) {
    SymMatrix aj(N);
    for (int i = 0; i < N; ++i)
      for (int k = 0; k <= i; ++k)
        aj.at(i, k) = v_full[std::size_t(i) * N + j] * v_full[std::size_t(k) * N + j];
    basis.push_back(std::move(aj));
  }

  SymMatrix cost(N);
  for (int j = 0; j < N; ++j) cost.add_scaled(basis[j], alpha[j]);

  Matrix jac(M, n);
  for (int j = 0; j < M; ++j) svec_into(basis[j], jac.row_span(j));

  return std::make_shared<LinearSdpProblem>(N, svec(cost), std::move(jac), b, 0.0);
}

std::shared_ptr<const NsdpProblem> build_p3(const Vec& a, const Vec& r) {
  return std::make_shared<ChannelCapacityProblem>(a, r);
}

std::shared_ptr<const NsdpProblem> build_p4(int N, const Vec& a_full, double eta) {
  require(N >= 2 && eta > 0.0, "p4: need N >= 2 and eta > 0");
  return std::make_shared<NearestCorrelationProblem>(N, symmetric_to_svec(a_full, N), eta);
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::P1: return "p1";
    case Family::P2: return "p2";
    case Family::P3: return "p3";
    case Family::P4: return "p4";
  }
  throw Error("family_name: unknown family");
}

Family family_from_name(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  if (s == "p1") return Family::P1;
  if (s == "p2") return Family::P2;
  if (s == "p3") return Family::P3;
  if (s == "p4") return Family::P4;
  throw Error("unknown problem family: " + name);
}

GeneratedInstance gen_p1(int N, std::uint64_t seed) {
  require(N >= 2, "gen_p1: N must be at least 2");
  Rng rng = Rng::stream(seed, 1);
  GeneratedInstance inst;
  inst.spec = InstanceSpec{Family::P1, N, 0, 1e-3, seed};
  inst.data["C"] = random_symmetric_full(N, rng, -1.0, 1.0);
  inst.problem = build_p1(N, inst.data["C"]);
  return inst;
}

GeneratedInstance gen_p2(int N, int M, std::uint64_t seed, int alpha_zero_index) {
  require(N >= 1 && M >= 1 && M <= N, "gen_p2: need 0 < M <= N");
  if (alpha_zero_index < 0) alpha_zero_index = N - 1;
  require(alpha_zero_index < N, "gen_p2: alpha index out of range");
  Rng rng = Rng::stream(seed, 2);

  GeneratedInstance inst;
  inst.spec = InstanceSpec{Family::P2, N, M, 1e-3, seed};
  inst.data["V"] = random_orthogonal_full(N, rng);
  Vec alpha(N);
  for (int j = 0; j < N; ++j) alpha[j] = rng.uniform01();
  alpha[alpha_zero_index] = 0.0;
  inst.data["alpha"] = std::move(alpha);
  Vec b(M, 1.0);
  b[0] = 0.0;
  inst.data["b"] = std::move(b);
  inst.problem = build_p2(N, M, inst.data["V"], inst.data["alpha"], inst.data["b"]);
  return inst;
}

GeneratedInstance gen_p3(int N, std::uint64_t seed) {
  require(N >= 1, "gen_p3: N must be at least 1");
  Rng rng = Rng::stream(seed, 3);
  GeneratedInstance inst;
  inst.spec = InstanceSpec{Family::P3, N, 0, 1e-3, seed};
  Vec a(N), r(N);
  for (int j = 0; j < N; ++j) a[j] = rng.uniform01();
  for (int j = 0; j < N; ++j) r[j] = rng.uniform01();
  inst.data["a"] = std::move(a);
  inst.data["r"] = std::move(r);
  inst.problem = build_p3(inst.data["a"], inst.data["r"]);
  return inst;
}

GeneratedInstance gen_p4(int N, double eta, std::uint64_t seed) {
  require(N >= 2 && eta > 0.0, "gen_p4: need N >= 2 and eta > 0");
  Rng rng = Rng::stream(seed, 4);
  GeneratedInstance inst;
  inst.spec = InstanceSpec{Family::P4, N, 0, eta, seed};
  Vec full = random_symmetric_full(N, rng, -1.0, 1.0);
  for (int j = 0; j < N; ++j) full[std::size_t(j) * N + j] = 1.0;
  inst.data["A"] = std::move(full);
  inst.problem = build_p4(N, inst.data["A"], eta);
  return inst;
}

GeneratedInstance generate(const InstanceSpec& spec) {
  switch (spec.family) {
    case Family::P1: return gen_p1(spec.N, spec.seed);
    case Family::P2: return gen_p2(spec.N, spec.M, spec.seed);
    case Family::P3: return gen_p3(spec.N, spec.seed);
    case Family::P4: return gen_p4(spec.N, spec.eta, spec.seed);
  }
  throw Error("generate: unknown family");
}

std::shared_ptr<const NsdpProblem> build_problem(const InstanceSpec& spec,
                                                 const std::map<std::string, Vec>& data) {
  switch (spec.family) {
    case Family::P1: return build_p1(spec.N, named(data, "C"));
    case Family::P2:
      return build_p2(spec.N, spec.M, named(data, "V"), named(data, "alpha"), named(data, "b"));
    case Family::P3: return build_p3(named(data, "a"), named(data, "r"));
    case Family::P4: return build_p4(spec.N, named(data, "A"), spec.eta);
  }
  throw Error("build_problem: unknown family");
}

std::string instance_to_json(const GeneratedInstance& inst) {
  nlohmann::ordered_json j;
  j["family"] = family_name(inst.spec.family);
  j["N"] = inst.spec.N;
  if (inst.spec.family == Family::P2) j["M"] = inst.spec.M;
  if (inst.spec.family == Family::P4) j["eta"] = inst.spec.eta;
  j["seed"] = inst.spec.seed;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  for (const auto& [key, arr] : inst.data) data[key] = arr;
  j["data"] = std::move(data);
  return j.dump(2) + "\n";
}

GeneratedInstance instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("instance JSON: ") + e.what());
  }

  const auto field = [&](const char* key) -> const nlohmann::json& {
    const auto it = j.find(key);
    require(it != j.end(), std::string("instance JSON: missing field '") + key + "'");
    return *it;
  };

  GeneratedInstance inst;
  try {
    inst.spec.family = family_from_name(field("family").get<std::string>());
    inst.spec.N = field("N").get<int>();
    inst.spec.seed = field("seed").get<std::uint64_t>();
    if (inst.spec.family == Family::P2) inst.spec.M = field("M").get<int>();
    if (inst.spec.family == Family::P4)
      inst.spec.eta = j.contains("eta") ? j["eta"].get<double>() : 1e-3;
    for (const auto& [key, arr] : field("data").items())
      inst.data[key] = arr.get<Vec>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("instance JSON: ") + e.what());
  }
  inst.problem = build_problem(inst.spec, inst.data);
  return inst;
}

}  // namespace nsdp
