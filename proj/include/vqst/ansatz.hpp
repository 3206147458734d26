#pragma once

#include <span>
#include <vector>

#include "vqst/circuit.hpp"
#include "vqst/statevector.hpp"

namespace vqst {

/// Trainable circuit family: alternating single-qubit rotation layers with
/// CNOT entangling chains in between.
///
/// Layer l (1-based) is a full layer of Rx on every qubit when l is odd and
/// Ry when l is even. After every rotation layer except the last, a linear
/// nearest-neighbor chain CNOT(q, q+1) for q = 0..n-2 is inserted. These
/// topology choices (chain direction, no trailing chain) are isolated behind
/// build_ansatz() so they can be revised in one place.
struct AnsatzSpec {
  int n_qubits = 0;
  int n_layers = 0;

  int parameter_count() const { return n_qubits * n_layers; }
  bool operator==(const AnsatzSpec& other) const = default;
};

/// A circuit whose rotation angles are bound later. param_slot[i] is the
/// index into the parameter vector feeding ops[i], or -1 for fixed gates.
/// Slots are ordered layer-major then qubit-major: slot = (l-1)*n + q.
struct ParamCircuit {
  Circuit ops;
  std::vector<int> param_slot;
  int n_parameters = 0;
};

/// Build the parameterized circuit. Throws config_error for n_layers < 1 or
/// invalid qubit counts.
ParamCircuit build_ansatz(const AnsatzSpec& spec);

/// Apply the bound circuit to an existing |0...0> state in place.
/// Throws usage_error if params length does not match.
void apply_ansatz(const ParamCircuit& circuit, std::span<const double> params,
                  Statevector& state);

/// Evaluate the ansatz from scratch: build, bind params, apply to |0...0>.
Statevector evaluate_ansatz(const AnsatzSpec& spec,
                            std::span<const double> params);

}  // namespace vqst
