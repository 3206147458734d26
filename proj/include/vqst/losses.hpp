#pragma once

#include <map>
#include <string>

#include "vqst/measurement.hpp"

namespace vqst {

enum class LossKind { SymmetricKl, Mmd };

struct LossConfig {
  LossKind kind = LossKind::SymmetricKl;
  double epsilon = 1e-3;  // KL denominator guard; must be > 0
  double sigma = 0.1;     // Gaussian kernel bandwidth; must be > 0 for MMD

  bool operator==(const LossConfig& other) const = default;
};

/// sum_s P1(s) * ln(P1(s) / (P2(s) + epsilon)) over all 2^n bitstrings, with
/// the convention 0 * ln(0/x) = 0. Natural log. Throws config_error for
/// epsilon <= 0 and usage_error on dimension mismatch.
double kl_divergence(const OutcomeDistribution& p1,
                     const OutcomeDistribution& p2, double epsilon);

/// kl_divergence(p1, p2) + kl_divergence(p2, p1); exactly symmetric under
/// argument swap.
double symmetric_kl(const OutcomeDistribution& p1,
                    const OutcomeDistribution& p2, double epsilon);

/// Squared maximum mean discrepancy with Gaussian kernel
/// K(x, y) = exp(-||x - y||^2 / (2 * sigma)), bitstrings embedded as 0/1
/// vectors and both expectations taken exactly over the distributions.
double mmd(const OutcomeDistribution& p, const OutcomeDistribution& q,
           double sigma);

/// Per-basis loss between a target empirical distribution and an ansatz
/// distribution under the configured loss kind.
double per_basis_loss(const OutcomeDistribution& target,
                      const OutcomeDistribution& ansatz,
                      const LossConfig& config);

/// Mean over the dataset's bases of the per-basis loss, with target
/// histograms normalized to empirical distributions. ansatz_dists must cover
/// exactly the bases in the dataset (usage_error otherwise).
double total_loss(const MeasurementDataset& target,
                  const std::map<std::string, OutcomeDistribution>& ansatz_dists,
                  const LossConfig& config);

}  // namespace vqst
