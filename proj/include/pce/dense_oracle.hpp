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


#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "pce/channel.hpp"
#include "pce/pauli.hpp"
#include "pce/rng.hpp"
#include "pce/sampler.hpp"
#include "pce/stabilizer.hpp"

// Brute-force density-matrix reference for the label-algebra fast path.
//
// Register conventions: in a Kronecker product the first factor is the most
// significant, and within a register qubit 0 is the first factor. Bell pairs
// join qubit j of one register with qubit j of the other, and
// |Psi_v> = (1 (x) P_v)|Psi+>, which has the same projector as (P_v (x) 1)|Psi+>.

namespace pce::dense {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest register (qubits) any oracle routine builds: 64 x 64 matrices.
inline constexpr int kMaxRegisterQubits = 6;
inline constexpr double kStateTolerance = 1e-10;

void check_register(int qubits, const char* what);

Matrix pauli_matrix(const PauliLabel& a);
Matrix identity(int qubits);
Matrix kron(const Matrix& a, const Matrix& b);

/// I_(2^first) (x) op (x) I_(rest) on a `total`-qubit register.
Matrix embed(const Matrix& op, int first, int total);

/// Tr_B of a matrix on A (x) B with A of `qubits_a` and B of `qubits_b` qubits.
Matrix partial_trace_second(const Matrix& m, int qubits_a, int qubits_b);
/// Tr_A of the same layout.
Matrix partial_trace_first(const Matrix& m, int qubits_a, int qubits_b);

/// Positive semidefinite, unit-trace density matrix.
class DenseState {
 public:
  /// Throws UsageError unless rho is Hermitian, PSD and unit trace to `tolerance`.
  static DenseState from_matrix(Matrix rho, double tolerance = kStateTolerance);
  static DenseState pure(const Vector& psi);

  int num_qubits() const { return d_; }
  const Matrix& matrix() const { return rho_; }

 private:
  int d_ = 0;
  Matrix rho_;
};

class DenseChannel {
 public:
  /// Throws UsageError unless sum K^dagger K = I to 1e-10.
  DenseChannel(int qubits, std::vector<Matrix> kraus);

  static DenseChannel identity(int qubits);
  /// Kraus operators sqrt(p_a) P_a over the support.
  static DenseChannel from_pauli(const PauliChannel& channel);
  /// One-qubit amplitude damping with decay probability gamma.
  static DenseChannel amplitude_damping(double gamma);
  static DenseChannel tensor(const DenseChannel& first, const DenseChannel& second);

  int num_qubits() const { return d_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  Matrix apply(const Matrix& rho) const;
  Matrix apply_adjoint(const Matrix& x) const;
  /// Acts on qubits [first, first + num_qubits()) of a `total`-qubit register.
  Matrix apply_on(const Matrix& rho, int first, int total) const;
  Matrix apply_adjoint_on(const Matrix& x, int first, int total) const;

  /// Eigenvalue of the Pauli twirl: 2^-n Tr(P_a Lambda(P_a)).
  double twirl_eigenvalue(const PauliLabel& a) const;

 private:
  int d_;
  std::vector<Matrix> kraus_;
};

/// |Psi_v> on 2k qubits (register A then B).
Vector bell_vector(const PauliLabel& v);
DenseState build_bell(const PauliLabel& v, int k);

/// Projector prod_j (I + (-1)^(e_j) P_(g_j)) / 2 onto the joint eigenstate
/// of the group generators with signs fixed by e.
DenseState build_stabilizer_state(const StabilizerGroup& group, const Syndrome& e);

/// p(v, e) = Tr[(Psi_v (x) phi_e)(1 (x) Lambda)(Psi_0 (x) phi_0)] with
/// registers ancilla(k) | B(k) | C(n-k), indexed v | (e << 2k). n + k <= 6.
std::vector<double> alg1_distribution_dense(const PauliChannel& channel, int k, const StabilizerGroup& group);

/// The same distribution from eigenvalues:
/// 2^-(n+k) sum_(u, alpha) lambda_(u (+) s(alpha)) (-1)^(<u,v> + alpha.e).
std::vector<double> alg1_distribution_walsh(const PauliChannel& channel, int k, const StabilizerGroup& group);

/// Pure input |A> on main (x) ancilla and a rank-1 POVM
/// {w_j 2^(n+k) |B_j><B_j|}.
struct Strategy {
  int n = 0;
  int k = 0;
  Vector input;
  std::vector<double> weights;
  std::vector<Vector> povm;
};

/// Random Gaussian input; POVM from a random frame S^(-1/2) g_j with
/// `outcomes` elements (0 picks a random orthonormal basis).
Strategy random_strategy(int n, int k, std::size_t outcomes, Rng& rng);

/// Throws UsageError if the POVM does not resolve the identity to 1e-8.
void validate_strategy(const Strategy& strategy);

struct MutualInfoResult {
  double information = 0;  // nats
  double bound = 0;        // 2^k / (2^n - 1)
  double moment_bound = 0; // second-moment bound of the proof, before Cauchy-Schwarz
  bool within_bound = true;
  /// conditional[pair * J + j] = p(j | a, s), pair = 2 (a - 1) + (s < 0).
  std::vector<double> conditional;
};

/// Channels Lambda_(a,s)(X) = 2^-n (I Tr X + s P_a Tr(P_a X)) for every
/// nonidentity a and s = +-1, uniform prior; n <= 2.
MutualInfoResult mutual_info_check(const Strategy& strategy);

/// Lambda_(a,s) as a superoperator applied to X.
Matrix codebook_channel_apply(const PauliLabel& a, int sign, const Matrix& x);

/// (1 (x) Lambda)(|Psi+><Psi+|) on 2n qubits; for Pauli channels this is
/// 4^-n sum_a lambda_a P_a (x) P_a^T.
DenseState choi_state(const PauliChannel& channel);
DenseState choi_state(const DenseChannel& channel);

struct TeleportBranch {
  PauliLabel outcome;
  double probability = 0;
  Matrix state;
};

/// Bell measurement on (rho, first half of J), correction P_b on the second
/// half. Every branch, normalized. 3n <= 6.
std::vector<TeleportBranch> teleport_branches(const DenseState& choi, const DenseState& rho);
/// One sampled branch.
DenseState teleport_apply(const DenseState& choi, const DenseState& rho, Rng& rng);

/// General noise for the benchmarking circuit on ancilla(n) | main(n):
/// gate noise Lambda_G on main, a noisy Bell state and a noisy Bell POVM.
class DenseNoiseModel {
 public:
  DenseNoiseModel(DenseChannel gate, DenseState prep, std::vector<Matrix> povm);

  static DenseNoiseModel ideal(DenseChannel gate);
  /// prep = (1 (x) Lambda_p)(Psi+), E_v = (1 (x) Lambda_m)^dagger(Psi_v).
  static DenseNoiseModel with_spam(DenseChannel gate, const DenseChannel& prep, const DenseChannel& meas);
  static DenseNoiseModel from_pauli(const NoiseModel& model);

  int num_qubits() const { return gate_.num_qubits(); }
  const DenseChannel& gate() const { return gate_; }
  const DenseState& prep() const { return prep_; }
  const std::vector<Matrix>& povm() const { return povm_; }

 private:
  DenseChannel gate_;
  DenseState prep_;
  std::vector<Matrix> povm_;
};

/// E[F_a(m)] for every a by exact averaging over gate sequences, computed with
/// a recursion over the cumulative gate label. n <= 2, m <= 8.
std::vector<double> alg2_expectations_dense(const DenseNoiseModel& model, int m);
double alg2_expectation_dense(const DenseNoiseModel& model, const PauliLabel& a, int m);

/// A_a = sum_v (-1)^<a,v> Tr(E_v (1 (x) Pi_a Lambda_G)(rho_prep)),
/// Pi_a(X) = 2^-n P_a Tr(P_a X).
double spam_constant_dense(const DenseNoiseModel& model, const PauliLabel& a);

}  // namespace pce::dense
