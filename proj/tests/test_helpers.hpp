#pragma once

#include <cmath>
#include <vector>

#include "vqst/ansatz.hpp"
#include "vqst/optimizers.hpp"
#include "vqst/rng.hpp"
#include "vqst/statevector.hpp"
#include "vqst/targets.hpp"

namespace testutil {

/// Haar-ish random state: normalized complex Gaussian amplitudes.
inline vqst::Statevector random_statevector(int n_qubits, std::uint64_t seed) {
  vqst::Rng rng(seed);
  std::vector<vqst::cplx> amps(std::uint64_t(1) << n_qubits);
  double norm = 0.0;
  for (auto& a : amps) {
    a = {rng.normal(), rng.normal()};
    norm += std::norm(a);
  }
  norm = std::sqrt(norm);
  for (auto& a : amps) a /= norm;
  return vqst::Statevector(n_qubits, std::move(amps));
}

/// <Z x Z x ... x Z> of a state: sum_i |a_i|^2 * parity(i).
inline double z_parity_expectation(const vqst::Statevector& state) {
  double sum = 0.0;
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    const int parity = __builtin_popcountll(i) % 2 ? -1 : 1;
    sum += parity * std::norm(state.amplitude(i));
  }
  return sum;
}

/// Parameters for the 3-qubit, 10-layer ansatz reproducing the GHZ state to
/// fidelity >= 0.999, found once by shift-rule gradient descent on the
/// infidelity (which is an expectation of the GHZ projector, so the shift
/// rule is exact). Cached across tests.
inline const std::vector<double>& ghz3_ansatz_params() {
  static const std::vector<double> params = [] {
    const vqst::AnsatzSpec spec{3, 10};
    const vqst::Statevector target = vqst::ghz_state(3);
    vqst::Objective infidelity = [&](std::span<const double> theta) {
      return 1.0 - vqst::fidelity(vqst::evaluate_ansatz(spec, theta), target);
    };
    std::vector<double> best;
    double best_value = 1.0;
    for (std::uint64_t restart = 0; restart < 5 && best_value > 1e-3;
         ++restart) {
      vqst::Rng rng(restart + 100);
      std::vector<double> theta(spec.parameter_count());
      for (double& t : theta) t = rng.uniform(-3.14159, 3.14159);
      vqst::AdamState adam;
      const vqst::AdamConfig adam_config{0.1, 0.9, 0.999, 1e-8};
      for (int it = 0; it < 1200; ++it) {
        const auto gradient = vqst::parameter_shift_gradient(infidelity, theta);
        vqst::adam_step(adam, theta, gradient, adam_config);
      }
      const double value = infidelity(theta);
      if (value < best_value) {
        best_value = value;
        best = theta;
      }
    }
    return best;
  }();
  return params;
}

}  // namespace testutil
