#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace vqst {

using Objective = std::function<double(std::span<const double>)>;

/// Gain sequences c_k = c / k^gamma and a_k = a / (A + k)^alpha, k = 1-based.
struct SpsaConfig {
  double a = 0.2;
  double A = 0.0;  // stability constant in the a_k denominator
  double alpha = 0.602;
  double c = 0.1;
  double gamma = 0.101;
  int max_iterations = 1000;
  std::uint64_t seed = 0;

  bool operator==(const SpsaConfig& other) const = default;
};

/// The 3-qubit gain set used for the small-system experiments.
SpsaConfig spsa_gains_3q();
/// The documented project defaults (canonical decay exponents).
SpsaConfig spsa_gains_default();

/// Estimate the step scale `a` so that the first SPSA update moves each
/// component by about target_magnitude: sample `pairs` +-c perturbations at
/// the start point, average |L(+) - L(-)| / (2c), and divide. Spends
/// 2 * pairs objective calls.
double calibrate_spsa_step_scale(const Objective& objective,
                                 std::span<const double> initial, double c,
                                 std::uint64_t seed, int pairs = 25,
                                 double target_magnitude = 0.6283185307179586);

double spsa_ak(const SpsaConfig& config, int k);
double spsa_ck(const SpsaConfig& config, int k);

struct TracePoint {
  int iteration = 0;            // 1-based; 0 only for pre-training records
  double loss = 0.0;
  std::uint64_t function_calls = 0;  // cumulative count after this iteration
};

struct OptimizerTrace {
  std::vector<TracePoint> points;
  std::vector<double> final_params;
  std::uint64_t function_calls = 0;
  bool aborted = false;
  std::string abort_reason;
};

/// One SPSA gradient estimate:
///   g_i = [L(theta + ck * delta) - L(theta - ck * delta)] / (2 * ck) / delta_i
/// with delta_signs the +-1 perturbation. Exactly two objective calls.
std::vector<double> spsa_gradient_estimate(const Objective& objective,
                                           std::span<const double> params,
                                           double ck,
                                           std::span<const int> delta_signs);

/// SPSA minimization with Rademacher +-1 perturbations. Exactly two objective
/// calls per iteration; the recorded loss is the mean of the two perturbed
/// evaluations. A non-finite objective value aborts with the partial trace
/// preserved and aborted = true.
OptimizerTrace spsa_minimize(const Objective& objective,
                             std::span<const double> initial,
                             const SpsaConfig& config);

/// Central differences, component i = [L(theta + d e_i) - L(theta - d e_i)]
/// / (2 d). Exactly 2 * dim objective calls. Throws config_error for d <= 0.
std::vector<double> finite_difference_gradient(const Objective& objective,
                                               std::span<const double> params,
                                               double delta);

/// Shift rule for objectives that are expectations of circuits built from
/// exp(-i * theta * P / 2) gates:
///   df/dtheta_i = [f(theta + (pi/2) e_i) - f(theta - (pi/2) e_i)] / 2.
/// Exact for such objectives; 2 * dim objective calls.
std::vector<double> parameter_shift_gradient(const Objective& objective,
                                             std::span<const double> params);

struct AdamConfig {
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  bool operator==(const AdamConfig& other) const = default;
};

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  long step = 0;
};

/// Standard bias-corrected Adam update, in place on params.
void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> gradient, const AdamConfig& config);

struct NelderMeadConfig {
  std::uint64_t max_function_calls = 2000;
  double initial_step = 0.25;  // per-coordinate offset of the start simplex
  double tolerance = 0.0;      // stop when f-spread falls below; 0 = budget only

  bool operator==(const NelderMeadConfig& other) const = default;
};

/// Standard simplex method with reflection/expansion/contraction/shrink
/// coefficients 1, 2, 0.5, 0.5. Stops when the call budget is exhausted.
/// Throws config_error if the budget cannot cover the initial simplex
/// (dim + 1 evaluations).
OptimizerTrace nelder_mead_minimize(const Objective& objective,
                                    std::span<const double> initial,
                                    const NelderMeadConfig& config);

}  // namespace vqst
