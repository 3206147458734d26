#pragma once

#include <string>
#include <vector>

namespace vqst {

enum class GateKind {
  H,
  X,
  Y,
  Z,
  S,
  Sdg,
  T,
  Rx,
  Ry,
  Rz,
  Cnot,
  Cz,
  Swap,
};

bool is_rotation(GateKind kind);
bool is_two_qubit(GateKind kind);
std::string gate_name(GateKind kind);

/// One gate application. Rotation convention for Rx/Ry/Rz is
/// exp(-i * angle * P / 2) with P the matching Pauli operator.
struct GateOp {
  GateKind kind;
  int q0 = -1;       // target (single-qubit) or control (Cnot) / first qubit
  int q1 = -1;       // target of Cnot, second qubit of Cz/Swap
  double angle = 0.0;  // radians; meaningful only for rotation kinds
};

using Circuit = std::vector<GateOp>;

// Convenience constructors.
GateOp h(int q);
GateOp x(int q);
GateOp y(int q);
GateOp z(int q);
GateOp s(int q);
GateOp sdg(int q);
GateOp t(int q);
GateOp rx(int q, double angle);
GateOp ry(int q, double angle);
GateOp rz(int q, double angle);
GateOp cnot(int control, int target);
GateOp cz(int q0, int q1);
GateOp swap_gate(int q0, int q1);

}  // namespace vqst
