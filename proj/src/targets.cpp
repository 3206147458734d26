#include "vqst/targets.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vqst/errors.hpp"
#include "vqst/rng.hpp"

namespace vqst {

Statevector ghz_state(int n_qubits) {
  if (n_qubits < 2)
    throw config_error("GHZ state needs at least 2 qubits, got " +
                       std::to_string(n_qubits));
  std::vector<cplx> amps(std::uint64_t(1) << n_qubits, cplx{0.0, 0.0});
  const double w = 1.0 / std::numbers::sqrt2;
  amps.front() = w;
  amps.back() = w;
  return Statevector(n_qubits, std::move(amps));
}

Eigen::MatrixXcd xxz_hamiltonian(const XxzParams& params) {
  if (params.sites < 2 || params.sites > Statevector::kMaxQubits)
    throw config_error("XXZ chain length out of range: L = " +
                       std::to_string(params.sites));
  const int n = params.sites;
  const Eigen::Index dim = Eigen::Index(1) << n;
  Eigen::MatrixXcd ham = Eigen::MatrixXcd::Zero(dim, dim);

  auto z_of = [n](std::uint64_t state, int qubit) {
    return (state >> (n - 1 - qubit) & 1) ? -1.0 : 1.0;
  };

  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(dim); ++s) {
    double diag = 0.0;
    for (int l = 0; l + 1 < n; ++l)
      diag += params.delta * z_of(s, l) * z_of(s, l + 1);
    for (int l = 0; l < n; ++l) diag += params.h * z_of(s, l);
    ham(s, s) += diag;

    // XX + YY flips anti-aligned neighbor pairs with amplitude 2J.
    for (int l = 0; l + 1 < n; ++l) {
      const std::uint64_t m0 = std::uint64_t(1) << (n - 1 - l);
      const std::uint64_t m1 = std::uint64_t(1) << (n - 2 - l);
      const bool b0 = s & m0;
      const bool b1 = s & m1;
      if (b0 != b1) ham(s ^ m0 ^ m1, s) += 2.0 * params.j;
    }
  }
  return ham;
}

GroundState ground_state(const Eigen::MatrixXcd& hamiltonian) {
  const Eigen::Index dim = hamiltonian.rows();
  if (dim != hamiltonian.cols() || dim < 2 || (dim & (dim - 1)) != 0)
    throw usage_error("ground_state needs a square matrix of power-of-two "
                      "dimension");
  const double asymmetry =
      (hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-10)
    throw usage_error("matrix is not Hermitian (asymmetry " +
                      std::to_string(asymmetry) + ")");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed to converge");

  const double energy = solver.eigenvalues()(0);
  Eigen::VectorXcd vec = solver.eigenvectors().col(0);
  vec.normalize();

  // Canonical global phase: largest |amplitude| (lowest index on ties)
  // rotated to the positive real axis.
  Eigen::Index pivot = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double mag = std::abs(vec(i));
    if (mag > best + 1e-12) {
      best = mag;
      pivot = i;
    }
  }
  vec *= std::polar(1.0, -std::arg(vec(pivot)));

  const double residual = (hamiltonian * vec - energy * vec).norm();
  if (residual > 1e-8)
    throw std::runtime_error("eigenpair residual too large: " +
                             std::to_string(residual));

  int n_qubits = 0;
  while ((Eigen::Index(1) << n_qubits) < dim) ++n_qubits;
  std::vector<cplx> amps(vec.data(), vec.data() + dim);
  return {energy, Statevector(n_qubits, std::move(amps))};
}

std::vector<GateKind> all_gate_kinds() {
  return {GateKind::H,  GateKind::X,   GateKind::Y,  GateKind::Z,
          GateKind::S,  GateKind::Sdg, GateKind::T,  GateKind::Rx,
          GateKind::Ry, GateKind::Rz,  GateKind::Cnot, GateKind::Cz,
          GateKind::Swap};
}

Circuit random_circuit(const RandomCircuitSpec& spec) {
  if (spec.n_qubits < 1 || spec.n_qubits > Statevector::kMaxQubits)
    throw config_error("random circuit qubit count out of range");
  if (spec.n_layers < 1)
    throw config_error("random circuit needs at least one layer");
  std::vector<GateKind> pool_1q, pool_2q;
  for (GateKind kind : spec.gate_pool) {
    (is_two_qubit(kind) ? pool_2q : pool_1q).push_back(kind);
  }
  if (pool_1q.empty())
    throw config_error("random circuit gate pool needs at least one "
                       "single-qubit kind");

  Rng rng(derive_seed(spec.seed, SeedPurpose::CircuitBuild, 0));
  Circuit circuit;
  for (int layer = 0; layer < spec.n_layers; ++layer) {
    const auto order =
        rng.sample_without_replacement(spec.n_qubits, spec.n_qubits);
    std::size_t i = 0;
    while (i < order.size()) {
      const bool pair_possible = (i + 1 < order.size()) && !pool_2q.empty();
      if (pair_possible && rng.uniform() < 0.5) {
        const GateKind kind = pool_2q[rng.uniform_below(pool_2q.size())];
        circuit.push_back({kind, static_cast<int>(order[i]),
                           static_cast<int>(order[i + 1])});
        i += 2;
      } else {
        const GateKind kind = pool_1q[rng.uniform_below(pool_1q.size())];
        GateOp op{kind, static_cast<int>(order[i])};
        if (is_rotation(kind)) op.angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        circuit.push_back(op);
        i += 1;
      }
    }
  }
  return circuit;
}

Statevector random_circuit_state(const RandomCircuitSpec& spec) {
  Statevector state = Statevector::zero_state(spec.n_qubits);
  state.apply(random_circuit(spec));
  return state;
}

}  // namespace vqst
