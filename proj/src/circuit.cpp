#include "vqst/circuit.hpp"

namespace vqst {

bool is_rotation(GateKind kind) {
  return kind == GateKind::Rx || kind == GateKind::Ry || kind == GateKind::Rz;
}

bool is_two_qubit(GateKind kind) {
  return kind == GateKind::Cnot || kind == GateKind::Cz ||
         kind == GateKind::Swap;
}

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::Cnot: return "cnot";
    case GateKind::Cz: return "cz";
    case GateKind::Swap: return "swap";
  }
  return "?";
}

GateOp h(int q) { return {GateKind::H, q}; }
GateOp x(int q) { return {GateKind::X, q}; }
GateOp y(int q) { return {GateKind::Y, q}; }
GateOp z(int q) { return {GateKind::Z, q}; }
GateOp s(int q) { return {GateKind::S, q}; }
GateOp sdg(int q) { return {GateKind::Sdg, q}; }
GateOp t(int q) { return {GateKind::T, q}; }
GateOp rx(int q, double angle) { return {GateKind::Rx, q, -1, angle}; }
GateOp ry(int q, double angle) { return {GateKind::Ry, q, -1, angle}; }
GateOp rz(int q, double angle) { return {GateKind::Rz, q, -1, angle}; }
GateOp cnot(int control, int target) {
  return {GateKind::Cnot, control, target};
}
GateOp cz(int q0, int q1) { return {GateKind::Cz, q0, q1}; }
GateOp swap_gate(int q0, int q1) { return {GateKind::Swap, q0, q1}; }

}  // namespace vqst
