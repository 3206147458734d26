#include "vqst/losses.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "vqst/errors.hpp"

namespace vqst {

namespace {

void check_same_width(const OutcomeDistribution& a,
                      const OutcomeDistribution& b) {
  if (a.n_qubits != b.n_qubits ||
      a.probabilities.size() != b.probabilities.size())
    throw usage_error("distributions have different qubit counts");
}

}  // namespace

double kl_divergence(const OutcomeDistribution& p1,
                     const OutcomeDistribution& p2, double epsilon) {
  if (epsilon <= 0.0)
    throw config_error("KL epsilon must be positive, got " +
                       std::to_string(epsilon));
  check_same_width(p1, p2);
  double sum = 0.0;
  for (std::size_t s = 0; s < p1.probabilities.size(); ++s) {
    const double a = p1.probabilities[s];
    if (a <= 0.0) continue;  // 0 * ln(0/x) = 0
    sum += a * std::log(a / (p2.probabilities[s] + epsilon));
  }
  return sum;
}

double symmetric_kl(const OutcomeDistribution& p1,
                    const OutcomeDistribution& p2, double epsilon) {
  return kl_divergence(p1, p2, epsilon) + kl_divergence(p2, p1, epsilon);
}

double mmd(const OutcomeDistribution& p, const OutcomeDistribution& q,
           double sigma) {
  if (sigma <= 0.0)
    throw config_error("MMD bandwidth must be positive, got " +
                       std::to_string(sigma));
  check_same_width(p, q);
  // For 0/1 embeddings ||x - y||^2 is the Hamming distance, so the kernel
  // only depends on popcount(x ^ y); MMD reduces to w^T K w with w = p - q.
  const int n = p.n_qubits;
  std::vector<double> kernel_by_distance(n + 1);
  for (int d = 0; d <= n; ++d)
    kernel_by_distance[d] = std::exp(-static_cast<double>(d) / (2.0 * sigma));

  const std::size_t dim = p.probabilities.size();
  std::vector<double> w(dim);
  for (std::size_t s = 0; s < dim; ++s)
    w[s] = p.probabilities[s] - q.probabilities[s];

  double sum = 0.0;
  for (std::size_t a = 0; a < dim; ++a) {
    if (w[a] == 0.0) continue;
    double row = 0.0;
    for (std::size_t b = 0; b < dim; ++b) {
      if (w[b] == 0.0) continue;
      row += kernel_by_distance[std::popcount(a ^ b)] * w[b];
    }
    sum += w[a] * row;
  }
  return sum;
}

double per_basis_loss(const OutcomeDistribution& target,
                      const OutcomeDistribution& ansatz,
                      const LossConfig& config) {
  switch (config.kind) {
    case LossKind::SymmetricKl:
      return symmetric_kl(target, ansatz, config.epsilon);
    case LossKind::Mmd:
      return mmd(target, ansatz, config.sigma);
  }
  throw config_error("unknown loss kind");
}

double total_loss(
    const MeasurementDataset& target,
    const std::map<std::string, OutcomeDistribution>& ansatz_dists,
    const LossConfig& config) {
  if (ansatz_dists.size() != target.records.size())
    throw usage_error("ansatz distributions do not cover exactly the dataset "
                      "bases (count mismatch)");
  double sum = 0.0;
  for (const auto& record : target.records) {
    const auto it = ansatz_dists.find(record.basis.axes);
    if (it == ansatz_dists.end())
      throw usage_error("missing ansatz distribution for basis " +
                        record.basis.axes);
    const OutcomeDistribution empirical =
        empirical_distribution(record.histogram, target.n_qubits);
    sum += per_basis_loss(empirical, it->second, config);
  }
  return sum / static_cast<double>(target.records.size());
}

}  // namespace vqst
