#include "vqst/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vqst/errors.hpp"

namespace vqst {

namespace {
constexpr cplx kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}  // namespace

std::string bitstring_from_index(std::uint64_t index, int n_qubits) {
  std::string bits(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q) {
    if (index >> (n_qubits - 1 - q) & 1) bits[q] = '1';
  }
  return bits;
}

std::uint64_t index_from_bitstring(const std::string& bits) {
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw usage_error("bitstring contains a character other than 0/1: " +
                        bits);
    index = (index << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return index;
}

Statevector Statevector::zero_state(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw config_error("statevector size out of range: n_qubits = " +
                       std::to_string(n_qubits) + " (allowed 1.." +
                       std::to_string(kMaxQubits) + ")");
  std::vector<cplx> amps(std::uint64_t(1) << n_qubits, cplx{0.0, 0.0});
  amps[0] = cplx{1.0, 0.0};
  return Statevector(n_qubits, std::move(amps));
}

Statevector::Statevector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits_ < 1 || n_qubits_ > kMaxQubits)
    throw config_error("statevector size out of range: n_qubits = " +
                       std::to_string(n_qubits_));
  if (amps_.size() != (std::uint64_t(1) << n_qubits_))
    throw usage_error("amplitude vector length does not match 2^n_qubits");
}

void Statevector::check_qubit(int q) const {
  if (q < 0 || q >= n_qubits_)
    throw usage_error("qubit index " + std::to_string(q) +
                      " out of range for " + std::to_string(n_qubits_) +
                      " qubits");
}

void Statevector::apply_1q(int q, cplx m00, cplx m01, cplx m10, cplx m11) {
  const std::uint64_t stride = qubit_mask(q);
  const std::uint64_t d = dim();
  for (std::uint64_t base = 0; base < d; base += 2 * stride) {
    for (std::uint64_t off = 0; off < stride; ++off) {
      const std::uint64_t i0 = base + off;
      const std::uint64_t i1 = i0 + stride;
      const cplx a0 = amps_[i0];
      const cplx a1 = amps_[i1];
      amps_[i0] = m00 * a0 + m01 * a1;
      amps_[i1] = m10 * a0 + m11 * a1;
    }
  }
}

void Statevector::apply_1q_diag(int q, cplx d0, cplx d1) {
  const std::uint64_t mask = qubit_mask(q);
  const std::uint64_t d = dim();
  for (std::uint64_t i = 0; i < d; ++i) {
    amps_[i] *= (i & mask) ? d1 : d0;
  }
}

void Statevector::apply(const GateOp& gate) {
  check_qubit(gate.q0);
  if (is_two_qubit(gate.kind)) {
    check_qubit(gate.q1);
    if (gate.q0 == gate.q1)
      throw usage_error("two-qubit gate targets must be distinct");
  }
  switch (gate.kind) {
    case GateKind::H:
      apply_1q(gate.q0, kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2);
      break;
    case GateKind::X:
      apply_1q(gate.q0, 0.0, 1.0, 1.0, 0.0);
      break;
    case GateKind::Y:
      apply_1q(gate.q0, 0.0, -kI, kI, 0.0);
      break;
    case GateKind::Z:
      apply_1q_diag(gate.q0, 1.0, -1.0);
      break;
    case GateKind::S:
      apply_1q_diag(gate.q0, 1.0, kI);
      break;
    case GateKind::Sdg:
      apply_1q_diag(gate.q0, 1.0, -kI);
      break;
    case GateKind::T:
      apply_1q_diag(gate.q0, 1.0, std::polar(1.0, std::numbers::pi / 4.0));
      break;
    case GateKind::Rx: {
      const double c = std::cos(gate.angle / 2.0);
      const double s = std::sin(gate.angle / 2.0);
      apply_1q(gate.q0, c, -kI * s, -kI * s, c);
      break;
    }
    case GateKind::Ry: {
      const double c = std::cos(gate.angle / 2.0);
      const double s = std::sin(gate.angle / 2.0);
      apply_1q(gate.q0, c, -s, s, c);
      break;
    }
    case GateKind::Rz:
      apply_1q_diag(gate.q0, std::polar(1.0, -gate.angle / 2.0),
                    std::polar(1.0, gate.angle / 2.0));
      break;
    case GateKind::Cnot: {
      const std::uint64_t mc = qubit_mask(gate.q0);
      const std::uint64_t mt = qubit_mask(gate.q1);
      const std::uint64_t d = dim();
      for (std::uint64_t i = 0; i < d; ++i) {
        if ((i & mc) && !(i & mt)) std::swap(amps_[i], amps_[i | mt]);
      }
      break;
    }
    case GateKind::Cz: {
      const std::uint64_t m = qubit_mask(gate.q0) | qubit_mask(gate.q1);
      const std::uint64_t d = dim();
      for (std::uint64_t i = 0; i < d; ++i) {
        if ((i & m) == m) amps_[i] = -amps_[i];
      }
      break;
    }
    case GateKind::Swap: {
      const std::uint64_t m0 = qubit_mask(gate.q0);
      const std::uint64_t m1 = qubit_mask(gate.q1);
      const std::uint64_t d = dim();
      for (std::uint64_t i = 0; i < d; ++i) {
        if ((i & m0) && !(i & m1)) std::swap(amps_[i], amps_[i ^ m0 ^ m1]);
      }
      break;
    }
  }
}

void Statevector::apply(const Circuit& circuit) {
  for (const GateOp& gate : circuit) apply(gate);
}

double Statevector::norm() const {
  double sum = 0.0;
  for (const cplx& a : amps_) sum += std::norm(a);
  return std::sqrt(sum);
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

cplx inner_product(const Statevector& a, const Statevector& b) {
  if (a.n_qubits() != b.n_qubits())
    throw usage_error("inner_product: dimension mismatch (" +
                      std::to_string(a.n_qubits()) + " vs " +
                      std::to_string(b.n_qubits()) + " qubits)");
  cplx sum{0.0, 0.0};
  const auto& av = a.amplitudes();
  const auto& bv = b.amplitudes();
  for (std::size_t i = 0; i < av.size(); ++i) sum += std::conj(av[i]) * bv[i];
  return sum;
}

double fidelity(const Statevector& a, const Statevector& b) {
  const double f = std::norm(inner_product(a, b));
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace vqst
