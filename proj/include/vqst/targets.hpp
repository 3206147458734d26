#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "vqst/circuit.hpp"
#include "vqst/statevector.hpp"

namespace vqst {

/// (|0...0> + |1...1>)/sqrt(2). Throws config_error for n < 2.
Statevector ghz_state(int n_qubits);

/// Open XXZ Heisenberg chain,
///   H = sum_{l=1}^{L-1} [ J (X_l X_{l+1} + Y_l Y_{l+1}) + Delta Z_l Z_{l+1} ]
///       + h sum_{l=1}^{L} Z_l,
/// with Pauli matrices as the spin operators. Site l maps to qubit l-1.
struct XxzParams {
  int sites = 0;      // L
  double j = 1.0;     // XX + YY coupling
  double delta = 1.0; // ZZ anisotropy
  double h = 1.0;     // uniform Z field

  bool operator==(const XxzParams& other) const = default;
};

/// Dense 2^L x 2^L Hamiltonian in the project bit ordering.
/// Throws config_error for L outside [2, 12].
Eigen::MatrixXcd xxz_hamiltonian(const XxzParams& params);

struct GroundState {
  double energy = 0.0;
  Statevector state;
};

/// Minimal eigenvalue and a normalized eigenvector of a Hermitian matrix
/// whose dimension is a power of two. The eigenvector choice is made
/// deterministic by fixing its global phase: the largest-magnitude amplitude
/// (lowest index on ties) is rotated to be real positive.
/// Throws usage_error if the matrix asymmetry exceeds 1e-10.
GroundState ground_state(const Eigen::MatrixXcd& hamiltonian);

/// Layered random circuit: each layer partitions the qubits into randomly
/// chosen one- and two-qubit gate slots drawn from the pool; rotation angles
/// are uniform in [0, 2*pi). Fully determined by the seed.
struct RandomCircuitSpec {
  int n_qubits = 0;
  int n_layers = 0;
  std::uint64_t seed = 0;
  std::vector<GateKind> gate_pool;  // empty is invalid; see all_gate_kinds()

  bool operator==(const RandomCircuitSpec& other) const = default;
};

std::vector<GateKind> all_gate_kinds();

Circuit random_circuit(const RandomCircuitSpec& spec);

/// Convenience: run the random circuit on |0...0>.
Statevector random_circuit_state(const RandomCircuitSpec& spec);

}  // namespace vqst
