// Copyright 2026 The pce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "pce/dense_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "pce/error.hpp"
#include "pce/wht.hpp"

namespace pce::dense {

namespace {

constexpr double kKrausTolerance = 1e-10;
constexpr double kPovmTolerance = 1e-8;

int qubits_of(const Matrix& m) {
  const auto dim = static_cast<uint64_t>(m.rows());
  if (m.rows() != m.cols() || dim == 0 || !std::has_single_bit(dim)) {
    throw UsageError("operator dimension is not a power of two");
  }
  return std::countr_zero(dim);
}

// Tr(a b) without forming the product.
Complex trace_product(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b.transpose()).sum(); }

Matrix single_qubit_pauli(unsigned code) {
  Matrix p = Matrix::Zero(2, 2);
  switch (code) {
    case 0:
      p(0, 0) = 1;
      p(1, 1) = 1;
      break;
    case 1:
      p(0, 1) = 1;
      p(1, 0) = 1;
      break;
    case 2:
      p(0, 0) = 1;
      p(1, 1) = -1;
      break;
    default:
      p(0, 1) = Complex(0, -1);
      p(1, 0) = Complex(0, 1);
      break;
  }
  return p;
}

Matrix projector(const Vector& psi) { return psi * psi.adjoint(); }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double entropy(const std::vector<double>& p) {
  double h = 0;
  for (double x : p) {
    if (x > 0) {
      h -= x * std::log(x);
    }
  }
  return h;
}

Vector gaussian_vector(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); i++) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

}  // namespace

void check_register(int qubits, const char* what) {
  if (qubits < 0 || qubits > kMaxRegisterQubits) {
    throw CapabilityError(std::string(what) + ": dense register of " + std::to_string(qubits) +
                          " qubits exceeds the limit of " + std::to_string(kMaxRegisterQubits));
  }
}

Matrix pauli_matrix(const PauliLabel& a) {
  check_register(a.num_qubits(), "pauli_matrix");
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < a.num_qubits(); i++) {
    out = kron(out, single_qubit_pauli(a.qubit(i)));
  }
  return out;
}

Matrix identity(int qubits) {
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  return Matrix::Identity(dim, dim);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); i++) {
    for (Eigen::Index j = 0; j < a.cols(); j++) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix embed(const Matrix& op, int first, int total) {
  const int d = qubits_of(op);
  if (first < 0 || first + d > total) {
    throw UsageError("embed: operator does not fit the register");
  }
  check_register(total, "embed");
  return kron(kron(identity(first), op), identity(total - first - d));
}

Matrix partial_trace_second(const Matrix& m, int qubits_a, int qubits_b) {
  const Eigen::Index da = Eigen::Index{1} << qubits_a;
  const Eigen::Index db = Eigen::Index{1} << qubits_b;
  if (m.rows() != da * db || m.cols() != da * db) {
    throw UsageError("partial trace: dimension mismatch");
  }
  Matrix out = Matrix::Zero(da, da);
  for (Eigen::Index i = 0; i < da; i++) {
    for (Eigen::Index j = 0; j < da; j++) {
      out(i, j) = m.block(i * db, j * db, db, db).trace();
    }
  }
  return out;
}

Matrix partial_trace_first(const Matrix& m, int qubits_a, int qubits_b) {
  const Eigen::Index da = Eigen::Index{1} << qubits_a;
  const Eigen::Index db = Eigen::Index{1} << qubits_b;
  if (m.rows() != da * db || m.cols() != da * db) {
    throw UsageError("partial trace: dimension mismatch");
  }
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index i = 0; i < da; i++) {
    out += m.block(i * db, i * db, db, db);
  }
  return out;
}

DenseState DenseState::from_matrix(Matrix rho, double tolerance) {
  const int d = qubits_of(rho);
  check_register(d, "DenseState");
  if (!rho.allFinite()) {
    throw UsageError("density matrix has non-finite entries");
  }
  if (max_abs(rho - rho.adjoint()) > tolerance) {
    throw UsageError("density matrix is not Hermitian");
  }
  const Complex tr = rho.trace();
  if (std::abs(tr - Complex(1, 0)) > tolerance) {
    throw UsageError("density matrix trace " + std::to_string(tr.real()) + " is not 1");
  }
  Matrix herm = (rho + rho.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tolerance) {
    throw UsageError("density matrix is not positive semidefinite");
  }
  DenseState s;
  s.d_ = d;
  s.rho_ = std::move(rho);
  return s;
}

DenseState DenseState::pure(const Vector& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1) > kStateTolerance) {
    throw UsageError("state vector is not normalized");
  }
  return from_matrix(projector(psi));
}

DenseChannel::DenseChannel(int qubits, std::vector<Matrix> kraus) : d_(qubits), kraus_(std::move(kraus)) {
  check_register(qubits, "DenseChannel");
  if (kraus_.empty()) {
    throw UsageError("channel needs at least one Kraus operator");
  }
  Matrix sum = Matrix::Zero(Eigen::Index{1} << qubits, Eigen::Index{1} << qubits);
  for (const auto& k : kraus_) {
    if (k.rows() != sum.rows() || k.cols() != sum.cols()) {
      throw UsageError("Kraus operator has the wrong dimension");
    }
    sum += k.adjoint() * k;
  }
  if (max_abs(sum - dense::identity(qubits)) > kKrausTolerance) {
    throw UsageError("Kraus operators are not trace preserving");
  }
}

DenseChannel DenseChannel::identity(int qubits) { return DenseChannel(qubits, {dense::identity(qubits)}); }

DenseChannel DenseChannel::from_pauli(const PauliChannel& channel) {
  check_register(channel.num_qubits(), "DenseChannel::from_pauli");
  std::vector<Matrix> kraus;
  for (const auto& e : channel.nonzero_entries()) {
    kraus.push_back(std::sqrt(e.probability) * pauli_matrix(e.label));
  }
  return DenseChannel(channel.num_qubits(), std::move(kraus));
}

DenseChannel DenseChannel::amplitude_damping(double gamma) {
  if (!(gamma >= 0 && gamma <= 1)) {
    throw UsageError("amplitude damping needs gamma in [0, 1]");
  }
  Matrix k0 = Matrix::Zero(2, 2);
  Matrix k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1;
  k0(1, 1) = std::sqrt(1 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return DenseChannel(1, {k0, k1});
}

DenseChannel DenseChannel::tensor(const DenseChannel& first, const DenseChannel& second) {
  std::vector<Matrix> kraus;
  for (const auto& a : first.kraus_) {
    for (const auto& b : second.kraus_) {
      kraus.push_back(kron(a, b));
    }
  }
  return DenseChannel(first.d_ + second.d_, std::move(kraus));
}

Matrix DenseChannel::apply(const Matrix& rho) const {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus_) {
    out += k * rho * k.adjoint();
  }
  return out;
}

Matrix DenseChannel::apply_adjoint(const Matrix& x) const {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const auto& k : kraus_) {
    out += k.adjoint() * x * k;
  }
  return out;
}

Matrix DenseChannel::apply_on(const Matrix& rho, int first, int total) const {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus_) {
    Matrix e = embed(k, first, total);
    out += e * rho * e.adjoint();
  }
  return out;
}

Matrix DenseChannel::apply_adjoint_on(const Matrix& x, int first, int total) const {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const auto& k : kraus_) {
    Matrix e = embed(k, first, total);
    out += e.adjoint() * x * e;
  }
  return out;
}

double DenseChannel::twirl_eigenvalue(const PauliLabel& a) const {
  if (a.num_qubits() != d_) {
    throw UsageError("twirl_eigenvalue: label size does not match channel");
  }
  Matrix p = pauli_matrix(a);
  return trace_product(p, apply(p)).real() / static_cast<double>(uint64_t{1} << d_);
}

Vector bell_vector(const PauliLabel& v) {
  const int k = v.num_qubits();
  check_register(2 * k, "bell_vector");
  const Eigen::Index dim = Eigen::Index{1} << k;
  Vector psi = Vector::Zero(dim * dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index x = 0; x < dim; x++) {
    psi(x * dim + x) = amp;
  }
  return kron(identity(k), pauli_matrix(v)) * psi;
}

DenseState build_bell(const PauliLabel& v, int k) {
  if (v.num_qubits() != k) {
    throw UsageError("build_bell: label must act on k qubits");
  }
  return DenseState::pure(bell_vector(v));
}

DenseState build_stabilizer_state(const StabilizerGroup& group, const Syndrome& e) {
  const int m = group.num_qubits();
  check_register(m, "build_stabilizer_state");
  if (e.m != m) {
    throw UsageError("build_stabilizer_state: syndrome size does not match group");
  }
  Matrix pi = identity(m);
  const Matrix id = identity(m);
  for (std::size_t j = 0; j < group.generators().size(); j++) {
    const double sign = ((e.bits >> j) & 1U) ? -1.0 : 1.0;
    pi = pi * (id + sign * pauli_matrix(group.generators()[j])) / 2.0;
  }
  return DenseState::from_matrix(std::move(pi));
}

std::vector<double> alg1_distribution_dense(const PauliChannel& channel, int k, const StabilizerGroup& group) {
  const int n = channel.num_qubits();
  const int m = n - k;
  if (k < 0 || k > n || group.num_qubits() != m) {
    throw UsageError("alg1_distribution_dense: group must act on n-k qubits");
  }
  const int total = n + k;
  check_register(total, "alg1_distribution_dense");

  std::vector<Matrix> bell(std::size_t{1} << (2 * k));
  for (uint64_t v = 0; v < bell.size(); v++) {
    bell[v] = projector(bell_vector(PauliLabel(v, k)));
  }
  std::vector<Matrix> stab(std::size_t{1} << m);
  for (uint64_t e = 0; e < stab.size(); e++) {
    stab[e] = build_stabilizer_state(group, Syndrome{e, m}).matrix();
  }
  const Matrix input = kron(bell[0], stab[0]);
  Matrix output = Matrix::Zero(input.rows(), input.cols());
  for (const auto& entry : channel.nonzero_entries()) {
    Matrix p = embed(pauli_matrix(entry.label), k, total);
    output += entry.probability * (p * input * p.adjoint());
  }
  std::vector<double> dist(std::size_t{1} << (2 * k + m));
  for (uint64_t e = 0; e < stab.size(); e++) {
    for (uint64_t v = 0; v < bell.size(); v++) {
      dist[v | (e << (2 * k))] = trace_product(kron(bell[v], stab[e]), output).real();
    }
  }
  return dist;
}

std::vector<double> alg1_distribution_walsh(const PauliChannel& channel, int k, const StabilizerGroup& group) {
  const int n = channel.num_qubits();
  const int m = n - k;
  if (k < 0 || k > n || group.num_qubits() != m) {
    throw UsageError("alg1_distribution_walsh: group must act on n-k qubits");
  }
  if (n + k > 2 * kMaxRegisterQubits) {
    throw CapabilityError("alg1_distribution_walsh: n + k too large");
  }
  const std::size_t outcomes = std::size_t{1} << (2 * k + m);
  const std::size_t us = std::size_t{1} << (2 * k);
  std::vector<double> dist(outcomes, 0.0);
  const double scale = std::ldexp(1.0, -(n + k));
  for (uint64_t e = 0; e < (uint64_t{1} << m); e++) {
    for (uint64_t v = 0; v < us; v++) {
      double sum = 0;
      for (uint64_t alpha = 0; alpha < (uint64_t{1} << m); alpha++) {
        const uint64_t s = group.element_bits(alpha) << (2 * k);
        const int alpha_sign = std::popcount(alpha & e) & 1;
        for (uint64_t u = 0; u < us; u++) {
          const double lam = channel.eigenvalue(PauliLabel(u | s, n));
          sum += (symplectic_bits(u, v) ^ alpha_sign) ? -lam : lam;
        }
      }
      dist[v | (e << (2 * k))] = scale * sum;
    }
  }
  return dist;
}

Strategy random_strategy(int n, int k, std::size_t outcomes, Rng& rng) {
  if (n < 1 || n > 2 || k < 0 || k > n) {
    throw UsageError("random_strategy: need 1 <= n <= 2 and 0 <= k <= n");
  }
  const std::size_t dim = std::size_t{1} << (n + k);
  Strategy s;
  s.n = n;
  s.k = k;
  s.input = gaussian_vector(dim, rng);
  s.input.normalize();
  const auto d = static_cast<Eigen::Index>(dim);
  if (outcomes == 0) {
    Matrix g(d, d);
    for (Eigen::Index j = 0; j < d; j++) {
      g.col(j) = gaussian_vector(dim, rng);
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    for (Eigen::Index j = 0; j < d; j++) {
      s.povm.push_back(q.col(j));
      s.weights.push_back(1.0 / static_cast<double>(dim));
    }
    return s;
  }
  if (outcomes < dim) {
    throw UsageError("random_strategy: a rank-1 POVM needs at least 2^(n+k) outcomes");
  }
  const auto j_count = static_cast<Eigen::Index>(outcomes);
  Matrix g(d, j_count);
  for (Eigen::Index j = 0; j < j_count; j++) {
    g.col(j) = gaussian_vector(dim, rng);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g * g.adjoint());
  Eigen::VectorXd inv_sqrt = solver.eigenvalues().cwiseSqrt().cwiseInverse();
  Matrix f = solver.eigenvectors() * inv_sqrt.asDiagonal() * solver.eigenvectors().adjoint() * g;
  for (Eigen::Index j = 0; j < j_count; j++) {
    const double norm = f.col(j).norm();
    s.weights.push_back(norm * norm / static_cast<double>(dim));
    s.povm.push_back(f.col(j) / norm);
  }
  return s;
}

void validate_strategy(const Strategy& s) {
  if (s.n < 1 || s.n > 2 || s.k < 0 || s.k > s.n) {
    throw UsageError("strategy: need 1 <= n <= 2 and 0 <= k <= n");
  }
  const Eigen::Index dim = Eigen::Index{1} << (s.n + s.k);
  if (s.input.size() != dim || std::abs(s.input.norm() - 1) > kPovmTolerance) {
    throw UsageError("strategy: input must be a unit vector on n + k qubits");
  }
  if (s.weights.size() != s.povm.size() || s.povm.empty()) {
    throw UsageError("strategy: POVM weights and vectors differ in number");
  }
  double total = 0;
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t j = 0; j < s.povm.size(); j++) {
    if (s.povm[j].size() != dim || std::abs(s.povm[j].norm() - 1) > kPovmTolerance) {
      throw UsageError("strategy: POVM vectors must be unit vectors on n + k qubits");
    }
    if (s.weights[j] < 0) {
      throw UsageError("strategy: negative POVM weight");
    }
    total += s.weights[j];
    sum += s.weights[j] * static_cast<double>(dim) * projector(s.povm[j]);
  }
  if (std::abs(total - 1) > kPovmTolerance) {
    throw UsageError("strategy: POVM weights do not sum to 1");
  }
  if (max_abs(sum - Matrix::Identity(dim, dim)) > kPovmTolerance) {
    throw UsageError("strategy: POVM elements do not resolve the identity");
  }
}

Matrix codebook_channel_apply(const PauliLabel& a, int sign, const Matrix& x) {
  const int n = a.num_qubits();
  Matrix p = pauli_matrix(a);
  const double scale = std::ldexp(1.0, -n);
  return scale * (identity(n) * x.trace() + static_cast<double>(sign) * p * trace_product(p, x));
}

MutualInfoResult mutual_info_check(const Strategy& strategy) {
  validate_strategy(strategy);
  const int n = strategy.n;
  const int k = strategy.k;
  const double dim = std::ldexp(1.0, n + k);
  const std::size_t outcomes = strategy.povm.size();
  const std::size_t pairs = 2 * ((std::size_t{1} << (2 * n)) - 1);
  const Matrix rho = projector(strategy.input);
  const Matrix anc = partial_trace_first(rho, n, k);
  const Matrix id_main = identity(n);

  MutualInfoResult result;
  result.bound = std::ldexp(1.0, k) / (std::ldexp(1.0, n) - 1);
  result.conditional.resize(pairs * outcomes);
  std::vector<double> mean(outcomes, 0.0), second(outcomes, 0.0);
  double mean_entropy = 0;
  std::vector<double> row(outcomes);
  for (uint64_t a = 1; a < (uint64_t{1} << (2 * n)); a++) {
    const Matrix pa = pauli_matrix(PauliLabel(a, n));
    // (Lambda_(a,s) (x) 1)(rho) = 2^-n (I (x) Tr_1 rho + s P_a (x) Tr_1[(P_a (x) 1) rho]).
    const Matrix twisted = partial_trace_first(kron(pa, identity(k)) * rho, n, k);
    for (int sign : {1, -1}) {
      const Matrix out = std::ldexp(1.0, -n) * (kron(id_main, anc) + static_cast<double>(sign) * kron(pa, twisted));
      const std::size_t pair = 2 * (a - 1) + (sign < 0 ? 1 : 0);
      for (std::size_t j = 0; j < outcomes; j++) {
        const auto& b = strategy.povm[j];
        const double p = strategy.weights[j] * dim * (b.adjoint() * out * b)(0, 0).real();
        row[j] = std::max(p, 0.0);
        result.conditional[pair * outcomes + j] = p;
        mean[j] += row[j] / static_cast<double>(pairs);
        second[j] += row[j] * row[j] / static_cast<double>(pairs);
      }
      mean_entropy += entropy(row) / static_cast<double>(pairs);
    }
  }
  result.information = entropy(mean) - mean_entropy;
  for (std::size_t j = 0; j < outcomes; j++) {
    if (mean[j] > 0) {
      result.moment_bound += (second[j] - mean[j] * mean[j]) / mean[j];
    }
  }
  result.within_bound = result.information <= result.bound + 1e-9;
  return result;
}

DenseState choi_state(const DenseChannel& channel) {
  const int n = channel.num_qubits();
  check_register(2 * n, "choi_state");
  const Matrix psi = projector(bell_vector(PauliLabel::identity(n)));
  return DenseState::from_matrix(channel.apply_on(psi, n, 2 * n));
}

DenseState choi_state(const PauliChannel& channel) { return choi_state(DenseChannel::from_pauli(channel)); }

std::vector<TeleportBranch> teleport_branches(const DenseState& choi, const DenseState& rho) {
  const int n = rho.num_qubits();
  if (choi.num_qubits() != 2 * n) {
    throw UsageError("teleport: Choi state must have twice the input's qubits");
  }
  check_register(3 * n, "teleport");
  const Matrix joint = kron(rho.matrix(), choi.matrix());
  std::vector<TeleportBranch> branches;
  branches.reserve(std::size_t{1} << (2 * n));
  for (uint64_t b = 0; b < (uint64_t{1} << (2 * n)); b++) {
    const PauliLabel outcome(b, n);
    const Matrix meas = kron(projector(bell_vector(outcome)), identity(n));
    const Matrix post = partial_trace_first(meas * joint * meas, 2 * n, n);
    TeleportBranch branch;
    branch.outcome = outcome;
    branch.probability = post.trace().real();
    const Matrix fix = pauli_matrix(outcome);
    branch.state = branch.probability > 0 ? Matrix(fix * post * fix.adjoint() / branch.probability)
                                          : Matrix(Matrix::Zero(post.rows(), post.cols()));
    branches.push_back(std::move(branch));
  }
  return branches;
}

DenseState teleport_apply(const DenseState& choi, const DenseState& rho, Rng& rng) {
  auto branches = teleport_branches(choi, rho);
  double r = rng.uniform();
  for (auto& b : branches) {
    if (r < b.probability) {
      return DenseState::from_matrix(std::move(b.state), 1e-8);
    }
    r -= b.probability;
  }
  for (auto it = branches.rbegin(); it != branches.rend(); ++it) {
    if (it->probability > 0) {
      return DenseState::from_matrix(std::move(it->state), 1e-8);
    }
  }
  throw UsageError("teleport: all branches have zero probability");
}

DenseNoiseModel::DenseNoiseModel(DenseChannel gate, DenseState prep, std::vector<Matrix> povm)
    : gate_(std::move(gate)), prep_(std::move(prep)), povm_(std::move(povm)) {
  const int n = gate_.num_qubits();
  check_register(2 * n, "DenseNoiseModel");
  if (prep_.num_qubits() != 2 * n) {
    throw UsageError("noise model: prepared state must cover ancilla and main registers");
  }
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  if (povm_.size() != static_cast<std::size_t>(dim)) {
    throw UsageError("noise model: Bell POVM needs 4^n elements");
  }
  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& e : povm_) {
    if (e.rows() != dim || e.cols() != dim || max_abs(e - e.adjoint()) > kStateTolerance) {
      throw UsageError("noise model: POVM elements must be Hermitian on 2n qubits");
    }
    sum += e;
  }
  if (max_abs(sum - Matrix::Identity(dim, dim)) > kStateTolerance) {
    throw UsageError("noise model: POVM does not resolve the identity");
  }
}

DenseNoiseModel DenseNoiseModel::ideal(DenseChannel gate) {
  const int n = gate.num_qubits();
  return with_spam(std::move(gate), DenseChannel::identity(n), DenseChannel::identity(n));
}

DenseNoiseModel DenseNoiseModel::with_spam(DenseChannel gate, const DenseChannel& prep, const DenseChannel& meas) {
  const int n = gate.num_qubits();
  if (prep.num_qubits() != n || meas.num_qubits() != n) {
    throw UsageError("noise model: SPAM channels must act on the main register");
  }
  check_register(2 * n, "DenseNoiseModel");
  const Matrix psi = projector(bell_vector(PauliLabel::identity(n)));
  DenseState state = DenseState::from_matrix(prep.apply_on(psi, n, 2 * n));
  std::vector<Matrix> povm;
  for (uint64_t v = 0; v < (uint64_t{1} << (2 * n)); v++) {
    povm.push_back(meas.apply_adjoint_on(projector(bell_vector(PauliLabel(v, n))), n, 2 * n));
  }
  return DenseNoiseModel(std::move(gate), std::move(state), std::move(povm));
}

DenseNoiseModel DenseNoiseModel::from_pauli(const NoiseModel& model) {
  return with_spam(DenseChannel::from_pauli(model.gate()), DenseChannel::from_pauli(model.prep()),
                   DenseChannel::from_pauli(model.meas()));
}

std::vector<double> alg2_expectations_dense(const DenseNoiseModel& model, int m) {
  const int n = model.num_qubits();
  if (n > 2) {
    throw CapabilityError("alg2_expectations_dense supports n <= 2");
  }
  if (m < 0 || m > 8) {
    throw UsageError("alg2_expectations_dense supports 0 <= m <= 8");
  }
  const std::size_t labels = std::size_t{1} << (2 * n);
  std::vector<Matrix> gates(labels);
  for (uint64_t a = 0; a < labels; a++) {
    gates[a] = embed(pauli_matrix(PauliLabel(a, n)), n, 2 * n);
  }
  // sigma[c]: unnormalized state jointly with "cumulative gate label is c".
  const Eigen::Index dim = model.prep().matrix().rows();
  std::vector<Matrix> sigma(labels, Matrix::Zero(dim, dim));
  std::vector<bool> live(labels, false);
  sigma[0] = model.prep().matrix();
  live[0] = true;
  const double uniform = 1.0 / static_cast<double>(labels);
  for (int t = 0; t <= m; t++) {
    std::vector<Matrix> noisy(labels);
    for (std::size_t c = 0; c < labels; c++) {
      if (live[c]) {
        noisy[c] = model.gate().apply_on(sigma[c], n, 2 * n);
      }
    }
    std::vector<Matrix> next(labels, Matrix::Zero(dim, dim));
    std::vector<bool> next_live(labels, false);
    for (std::size_t c = 0; c < labels; c++) {
      if (!live[c]) {
        continue;
      }
      for (std::size_t a = 0; a < labels; a++) {
        next[c ^ a] += uniform * (gates[a] * noisy[c] * gates[a].adjoint());
        next_live[c ^ a] = true;
      }
    }
    sigma = std::move(next);
    live = std::move(next_live);
  }
  // Pr(z) with z = v xor c, then the symplectic transform gives E[F_a].
  std::vector<double> pz(labels, 0.0);
  for (std::size_t c = 0; c < labels; c++) {
    if (!live[c]) {
      continue;
    }
    for (std::size_t v = 0; v < labels; v++) {
      pz[v ^ c] += trace_product(model.povm()[v], sigma[c]).real();
    }
  }
  symplectic_transform_qubits<double>(std::span<double>(pz), 0, n);
  return pz;
}

double alg2_expectation_dense(const DenseNoiseModel& model, const PauliLabel& a, int m) {
  if (a.num_qubits() != model.num_qubits()) {
    throw UsageError("alg2_expectation_dense: label size does not match model");
  }
  return alg2_expectations_dense(model, m)[a.bits()];
}

double spam_constant_dense(const DenseNoiseModel& model, const PauliLabel& a) {
  const int n = model.num_qubits();
  if (a.num_qubits() != n) {
    throw UsageError("spam_constant_dense: label size does not match model");
  }
  const Matrix pa = pauli_matrix(a);
  const Matrix noisy = model.gate().apply_on(model.prep().matrix(), n, 2 * n);
  const Matrix reduced = partial_trace_second(kron(identity(n), pa) * noisy, n, n);
  const Matrix projected = std::ldexp(1.0, -n) * kron(reduced, pa);
  double sum = 0;
  for (uint64_t v = 0; v < (uint64_t{1} << (2 * n)); v++) {
    const double term = trace_product(model.povm()[v], projected).real();
    sum += symplectic_bits(a.bits(), v) ? -term : term;
  }
  return sum;
}

}  // namespace pce::dense
