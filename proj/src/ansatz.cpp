#include "vqst/ansatz.hpp"

#include <string>

#include "vqst/errors.hpp"

namespace vqst {

ParamCircuit build_ansatz(const AnsatzSpec& spec) {
  if (spec.n_layers < 1)
    throw config_error("ansatz needs at least one rotation layer, got " +
                       std::to_string(spec.n_layers));
  if (spec.n_qubits < 1 || spec.n_qubits > Statevector::kMaxQubits)
    throw config_error("ansatz qubit count out of range: " +
                       std::to_string(spec.n_qubits));

  ParamCircuit pc;
  pc.n_parameters = spec.parameter_count();
  for (int layer = 1; layer <= spec.n_layers; ++layer) {
    const GateKind kind = (layer % 2 == 1) ? GateKind::Rx : GateKind::Ry;
    for (int q = 0; q < spec.n_qubits; ++q) {
      pc.ops.push_back({kind, q, -1, 0.0});
      pc.param_slot.push_back((layer - 1) * spec.n_qubits + q);
    }
    if (layer < spec.n_layers) {
      for (int q = 0; q + 1 < spec.n_qubits; ++q) {
        pc.ops.push_back(cnot(q, q + 1));
        pc.param_slot.push_back(-1);
      }
    }
  }
  return pc;
}

void apply_ansatz(const ParamCircuit& circuit, std::span<const double> params,
                  Statevector& state) {
  if (static_cast<int>(params.size()) != circuit.n_parameters)
    throw usage_error("parameter vector length " +
                      std::to_string(params.size()) +
                      " does not match ansatz parameter count " +
                      std::to_string(circuit.n_parameters));
  for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
    GateOp op = circuit.ops[i];
    const int slot = circuit.param_slot[i];
    if (slot >= 0) op.angle = params[slot];
    state.apply(op);
  }
}

Statevector evaluate_ansatz(const AnsatzSpec& spec,
                            std::span<const double> params) {
  const ParamCircuit circuit = build_ansatz(spec);
  Statevector state = Statevector::zero_state(spec.n_qubits);
  apply_ansatz(circuit, params, state);
  return state;
}

}  // namespace vqst
