#include "vqst/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "vqst/errors.hpp"
#include "vqst/rng.hpp"

namespace vqst {

SpsaConfig spsa_gains_3q() {
  SpsaConfig config;
  config.a = 0.4739;
  config.A = 0.3186;
  config.alpha = 0.6374;
  config.c = 0.1258;
  config.gamma = 0.06059;
  return config;
}

SpsaConfig spsa_gains_default() { return SpsaConfig{}; }

double calibrate_spsa_step_scale(const Objective& objective,
                                 std::span<const double> initial, double c,
                                 std::uint64_t seed, int pairs,
                                 double target_magnitude) {
  if (c <= 0.0) throw config_error("calibration perturbation must be positive");
  if (pairs < 1) throw config_error("calibration needs at least one pair");
  const std::size_t dim = initial.size();
  Rng rng(seed);
  std::vector<double> point(dim);
  double magnitude_sum = 0.0;
  for (int p = 0; p < pairs; ++p) {
    std::vector<int> signs(dim);
    for (std::size_t i = 0; i < dim; ++i) signs[i] = rng.rademacher();
    for (std::size_t i = 0; i < dim; ++i) point[i] = initial[i] + c * signs[i];
    const double f_plus = objective(point);
    for (std::size_t i = 0; i < dim; ++i) point[i] = initial[i] - c * signs[i];
    const double f_minus = objective(point);
    magnitude_sum += std::abs((f_plus - f_minus) / (2.0 * c));
  }
  const double avg_magnitude = magnitude_sum / pairs;
  if (avg_magnitude < 1e-10) return target_magnitude;  // flat start region
  return target_magnitude / avg_magnitude;
}

double spsa_ak(const SpsaConfig& config, int k) {
  return config.a / std::pow(config.A + k, config.alpha);
}

double spsa_ck(const SpsaConfig& config, int k) {
  return config.c / std::pow(static_cast<double>(k), config.gamma);
}

std::vector<double> spsa_gradient_estimate(const Objective& objective,
                                           std::span<const double> params,
                                           double ck,
                                           std::span<const int> delta_signs) {
  if (delta_signs.size() != params.size())
    throw usage_error("perturbation sign vector length mismatch");
  const std::size_t dim = params.size();
  std::vector<double> plus(params.begin(), params.end());
  std::vector<double> minus(params.begin(), params.end());
  for (std::size_t i = 0; i < dim; ++i) {
    plus[i] += ck * delta_signs[i];
    minus[i] -= ck * delta_signs[i];
  }
  const double f_plus = objective(plus);
  const double f_minus = objective(minus);
  const double scale = (f_plus - f_minus) / (2.0 * ck);
  std::vector<double> gradient(dim);
  for (std::size_t i = 0; i < dim; ++i)
    gradient[i] = scale / delta_signs[i];
  return gradient;
}

OptimizerTrace spsa_minimize(const Objective& objective,
                             std::span<const double> initial,
                             const SpsaConfig& config) {
  if (config.c <= 0.0 || config.a <= 0.0)
    throw config_error("SPSA gains a and c must be positive");
  if (config.max_iterations < 0)
    throw config_error("SPSA iteration count must be nonnegative");
  if (config.alpha <= 0.0 || config.alpha > 1.0 || config.gamma <= 0.0 ||
      config.gamma > 1.0)
    throw config_error("SPSA exponents must lie in (0, 1]");

  const std::size_t dim = initial.size();
  Rng rng(config.seed);
  OptimizerTrace trace;
  trace.final_params.assign(initial.begin(), initial.end());
  std::vector<double>& theta = trace.final_params;
  std::vector<int> signs(dim);
  std::vector<double> shifted(dim);

  for (int k = 1; k <= config.max_iterations; ++k) {
    for (std::size_t i = 0; i < dim; ++i) signs[i] = rng.rademacher();
    const double ck = spsa_ck(config, k);

    for (std::size_t i = 0; i < dim; ++i)
      shifted[i] = theta[i] + ck * signs[i];
    const double f_plus = objective(shifted);
    for (std::size_t i = 0; i < dim; ++i)
      shifted[i] = theta[i] - ck * signs[i];
    const double f_minus = objective(shifted);
    trace.function_calls += 2;

    if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
      trace.aborted = true;
      trace.abort_reason = "non-finite objective value at iteration " +
                           std::to_string(k);
      return trace;
    }

    const double scale = (f_plus - f_minus) / (2.0 * ck);
    const double ak = spsa_ak(config, k);
    for (std::size_t i = 0; i < dim; ++i)
      theta[i] -= ak * scale / signs[i];

    trace.points.push_back({k, 0.5 * (f_plus + f_minus),
                            trace.function_calls});
  }
  return trace;
}

std::vector<double> finite_difference_gradient(const Objective& objective,
                                               std::span<const double> params,
                                               double delta) {
  if (delta <= 0.0)
    throw config_error("finite-difference step must be positive");
  const std::size_t dim = params.size();
  std::vector<double> point(params.begin(), params.end());
  std::vector<double> gradient(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double saved = point[i];
    point[i] = saved + delta;
    const double f_plus = objective(point);
    point[i] = saved - delta;
    const double f_minus = objective(point);
    point[i] = saved;
    gradient[i] = (f_plus - f_minus) / (2.0 * delta);
  }
  return gradient;
}

std::vector<double> parameter_shift_gradient(const Objective& objective,
                                             std::span<const double> params) {
  const double shift = std::numbers::pi / 2.0;
  const std::size_t dim = params.size();
  std::vector<double> point(params.begin(), params.end());
  std::vector<double> gradient(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double saved = point[i];
    point[i] = saved + shift;
    const double f_plus = objective(point);
    point[i] = saved - shift;
    const double f_minus = objective(point);
    point[i] = saved;
    gradient[i] = 0.5 * (f_plus - f_minus);
  }
  return gradient;
}

void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> gradient, const AdamConfig& config) {
  if (config.learning_rate <= 0.0)
    throw config_error("Adam learning rate must be positive");
  const std::size_t dim = params.size();
  if (gradient.size() != dim)
    throw usage_error("Adam gradient dimension mismatch");
  if (state.first_moment.empty()) {
    state.first_moment.assign(dim, 0.0);
    state.second_moment.assign(dim, 0.0);
  }
  if (state.first_moment.size() != dim)
    throw usage_error("Adam state dimension mismatch");

  ++state.step;
  const double b1 = config.beta1;
  const double b2 = config.beta2;
  const double bias1 = 1.0 - std::pow(b1, state.step);
  const double bias2 = 1.0 - std::pow(b2, state.step);
  for (std::size_t i = 0; i < dim; ++i) {
    state.first_moment[i] = b1 * state.first_moment[i] + (1.0 - b1) * gradient[i];
    state.second_moment[i] =
        b2 * state.second_moment[i] + (1.0 - b2) * gradient[i] * gradient[i];
    const double m_hat = state.first_moment[i] / bias1;
    const double v_hat = state.second_moment[i] / bias2;
    params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.eps);
  }
}

OptimizerTrace nelder_mead_minimize(const Objective& objective,
                                    std::span<const double> initial,
                                    const NelderMeadConfig& config) {
  const std::size_t dim = initial.size();
  if (config.max_function_calls < dim + 1)
    throw config_error("Nelder-Mead budget must cover the initial simplex (" +
                       std::to_string(dim + 1) + " calls)");

  OptimizerTrace trace;
  auto call = [&](const std::vector<double>& x) {
    ++trace.function_calls;
    return objective(x);
  };
  auto budget_left = [&] {
    return trace.function_calls < config.max_function_calls;
  };

  // Start simplex: the initial point plus one vertex per coordinate offset.
  std::vector<std::vector<double>> simplex(dim + 1,
                                           std::vector<double>(initial.begin(),
                                                               initial.end()));
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += config.initial_step;
  std::vector<double> values(dim + 1);
  for (std::size_t v = 0; v <= dim; ++v) values[v] = call(simplex[v]);

  std::vector<std::size_t> order(dim + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return values[a] < values[b];
                     });
  };

  std::vector<double> centroid(dim), reflected(dim), trial(dim);
  int iteration = 0;
  while (budget_left()) {
    sort_simplex();
    const std::size_t best = order[0];
    const std::size_t second_worst = order[dim - 1];
    const std::size_t worst = order[dim];
    ++iteration;
    trace.points.push_back({iteration, values[best], trace.function_calls});
    if (config.tolerance > 0.0 &&
        std::abs(values[worst] - values[best]) <= config.tolerance)
      break;

    centroid.assign(dim, 0.0);
    for (std::size_t v = 0; v <= dim; ++v) {
      if (v == worst) continue;
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v][i];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    for (std::size_t i = 0; i < dim; ++i)
      reflected[i] = centroid[i] + (centroid[i] - simplex[worst][i]);
    const double f_reflected = call(reflected);

    if (f_reflected < values[best] && budget_left()) {
      for (std::size_t i = 0; i < dim; ++i)
        trial[i] = centroid[i] + 2.0 * (reflected[i] - centroid[i]);
      const double f_expanded = call(trial);
      if (f_expanded < f_reflected) {
        simplex[worst] = trial;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
    } else if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
    } else if (budget_left()) {
      const bool outside = f_reflected < values[worst];
      const std::vector<double>& toward = outside ? reflected : simplex[worst];
      for (std::size_t i = 0; i < dim; ++i)
        trial[i] = centroid[i] + 0.5 * (toward[i] - centroid[i]);
      const double f_contracted = call(trial);
      if (f_contracted < (outside ? f_reflected : values[worst])) {
        simplex[worst] = trial;
        values[worst] = f_contracted;
      } else {
        // Shrink every vertex toward the best one.
        for (std::size_t v = 0; v <= dim && budget_left(); ++v) {
          if (v == best) continue;
          for (std::size_t i = 0; i < dim; ++i)
            simplex[v][i] =
                simplex[best][i] + 0.5 * (simplex[v][i] - simplex[best][i]);
          values[v] = call(simplex[v]);
        }
      }
    }
  }

  sort_simplex();
  trace.final_params = simplex[order[0]];
  return trace;
}

}  // namespace vqst
