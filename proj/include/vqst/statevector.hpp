#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "vqst/circuit.hpp"

namespace vqst {

using cplx = std::complex<double>;

/// Bit ordering used everywhere in this project: amplitude index i encodes
/// the bitstring whose leftmost character is qubit 0, and qubit 0 is the most
/// significant bit of i. So for n qubits, the bit of qubit q inside index i
/// is (i >> (n - 1 - q)) & 1.
std::string bitstring_from_index(std::uint64_t index, int n_qubits);
std::uint64_t index_from_bitstring(const std::string& bits);

/// Dense complex state vector for n <= 12 qubits with in-place gate
/// application (per-pair 2x2 updates, no full-matrix construction).
class Statevector {
 public:
  static constexpr int kMaxQubits = 12;

  /// |0...0>: amplitude 1 at index 0. Throws config_error for n outside
  /// [1, kMaxQubits].
  static Statevector zero_state(int n_qubits);

  /// Adopts an explicit amplitude vector (length must be a power of two
  /// matching n_qubits).
  Statevector(int n_qubits, std::vector<cplx> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::uint64_t dim() const { return std::uint64_t(1) << n_qubits_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx amplitude(std::uint64_t index) const { return amps_[index]; }

  /// Apply one gate in place. Throws usage_error for out-of-range or
  /// duplicate targets.
  void apply(const GateOp& gate);

  /// Apply a whole circuit in order.
  void apply(const Circuit& circuit);

  double norm() const;

  /// Z-basis outcome probabilities |amplitude|^2, index-aligned.
  std::vector<double> probabilities() const;

 private:
  int n_qubits_;
  std::vector<cplx> amps_;

  std::uint64_t qubit_mask(int q) const {
    return std::uint64_t(1) << (n_qubits_ - 1 - q);
  }
  void apply_1q(int q, cplx m00, cplx m01, cplx m10, cplx m11);
  void apply_1q_diag(int q, cplx d0, cplx d1);
  void check_qubit(int q) const;
};

/// <a|b>, conjugate-linear in the first argument. Throws usage_error on
/// dimension mismatch.
cplx inner_product(const Statevector& a, const Statevector& b);

/// |<a|b>|^2 clamped to [0, 1]; global-phase invariant by construction.
double fidelity(const Statevector& a, const Statevector& b);

}  // namespace vqst
