#include "vqst/tomography.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numbers>

#include "vqst/errors.hpp"

namespace vqst {

std::string optimizer_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::Spsa: return "spsa";
    case OptimizerKind::NelderMead: return "nelder-mead";
    case OptimizerKind::FiniteDifferenceAdam: return "finite-difference-adam";
    case OptimizerKind::ParameterShiftAdam: return "parameter-shift-adam";
  }
  return "?";
}

std::optional<OptimizerKind> optimizer_from_name(const std::string& name) {
  if (name == "spsa") return OptimizerKind::Spsa;
  if (name == "nelder-mead") return OptimizerKind::NelderMead;
  if (name == "finite-difference-adam")
    return OptimizerKind::FiniteDifferenceAdam;
  if (name == "parameter-shift-adam") return OptimizerKind::ParameterShiftAdam;
  return std::nullopt;
}

MeasurementDataset acquire_dataset(const Statevector& target,
                                   const std::vector<MeasurementBasis>& bases,
                                   std::uint64_t shots, std::uint64_t data_seed,
                                   std::string provenance) {
  if (bases.empty()) throw config_error("dataset needs at least one basis");
  MeasurementDataset dataset;
  dataset.n_qubits = target.n_qubits();
  dataset.shots_per_basis = shots;
  dataset.seed = data_seed;
  dataset.provenance = std::move(provenance);
  dataset.records.reserve(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i) {
    Rng rng(derive_seed(data_seed, SeedPurpose::DataSampling, i));
    const OutcomeDistribution dist = exact_distribution(target, bases[i]);
    dataset.records.push_back({bases[i], sample(dist, shots, rng)});
  }
  dataset.validate();
  return dataset;
}

TomographyObjective::TomographyObjective(const MeasurementDataset& dataset,
                                         const AnsatzSpec& spec,
                                         const LossConfig& loss,
                                         const SamplingMode& mode,
                                         std::uint64_t sampling_seed)
    : dataset_(&dataset),
      circuit_(build_ansatz(spec)),
      loss_(loss),
      mode_(mode),
      rng_(sampling_seed),
      state_(Statevector::zero_state(spec.n_qubits)),
      rotated_(Statevector::zero_state(spec.n_qubits)) {
  if (spec.n_qubits != dataset.n_qubits)
    throw usage_error("ansatz qubit count does not match dataset");
  if (!mode_.exact && mode_.shots < 1)
    throw config_error("sampled-mode objective needs shots >= 1");
  rotations_.reserve(dataset.records.size());
  target_empirical_.reserve(dataset.records.size());
  for (const auto& record : dataset.records) {
    rotations_.push_back(basis_rotation(record.basis));
    target_empirical_.push_back(
        empirical_distribution(record.histogram, dataset.n_qubits));
  }
  dist_.n_qubits = spec.n_qubits;
  dist_.probabilities.assign(state_.dim(), 0.0);
  cumulative_.assign(state_.dim(), 0.0);
}

double TomographyObjective::operator()(std::span<const double> params) {
  state_ = Statevector::zero_state(dataset_->n_qubits);
  apply_ansatz(circuit_, params, state_);

  const std::size_t dim = state_.dim();
  double sum = 0.0;
  for (std::size_t r = 0; r < dataset_->records.size(); ++r) {
    rotated_ = state_;
    rotated_.apply(rotations_[r]);
    const auto& amps = rotated_.amplitudes();

    if (mode_.exact) {
      for (std::size_t s = 0; s < dim; ++s)
        dist_.probabilities[s] = std::norm(amps[s]);
    } else {
      // Finite-shot measurement of the ansatz: inverse-CDF draws into the
      // dense scratch distribution.
      double acc = 0.0;
      for (std::size_t s = 0; s < dim; ++s) {
        acc += std::norm(amps[s]);
        cumulative_[s] = acc;
      }
      std::fill(dist_.probabilities.begin(), dist_.probabilities.end(), 0.0);
      const double weight = 1.0 / static_cast<double>(mode_.shots);
      for (std::uint64_t shot = 0; shot < mode_.shots; ++shot) {
        const double u = rng_.uniform() * acc;
        const auto it =
            std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        const std::size_t outcome = std::min<std::size_t>(
            static_cast<std::size_t>(it - cumulative_.begin()), dim - 1);
        dist_.probabilities[outcome] += weight;
      }
    }
    sum += per_basis_loss(target_empirical_[r], dist_, loss_);
  }
  return sum / static_cast<double>(dataset_->records.size());
}

void TomographyObjective::exact_basis_probabilities(
    std::span<const double> params, std::vector<std::vector<double>>& out) {
  state_ = Statevector::zero_state(dataset_->n_qubits);
  apply_ansatz(circuit_, params, state_);
  out.resize(dataset_->records.size());
  for (std::size_t r = 0; r < dataset_->records.size(); ++r) {
    rotated_ = state_;
    rotated_.apply(rotations_[r]);
    out[r] = rotated_.probabilities();
  }
}

std::vector<double> tomography_parameter_shift_gradient(
    TomographyObjective& objective, std::span<const double> params,
    std::uint64_t* function_calls, double* loss_at_params) {
  const MeasurementDataset& dataset = objective.dataset();
  const LossConfig& loss = objective.loss_config();
  const std::size_t n_records = dataset.records.size();
  const std::size_t dim = params.size();
  const std::size_t n_outcomes = std::size_t(1) << dataset.n_qubits;

  std::vector<std::vector<double>> base;
  objective.exact_basis_probabilities(params, base);
  if (function_calls) *function_calls += 1;

  // dL_b/dp(s) at the unshifted point, and optionally the loss itself.
  std::vector<std::vector<double>> weights(n_records,
                                           std::vector<double>(n_outcomes));
  std::vector<double> kernel_by_distance;
  if (loss.kind == LossKind::Mmd) {
    kernel_by_distance.resize(dataset.n_qubits + 1);
    for (int d = 0; d <= dataset.n_qubits; ++d)
      kernel_by_distance[d] =
          std::exp(-static_cast<double>(d) / (2.0 * loss.sigma));
  }
  double loss_sum = 0.0;
  for (std::size_t r = 0; r < n_records; ++r) {
    const OutcomeDistribution target_emp =
        empirical_distribution(dataset.records[r].histogram, dataset.n_qubits);
    const auto& q = target_emp.probabilities;
    const auto& p = base[r];
    if (loss.kind == LossKind::SymmetricKl) {
      const double eps = loss.epsilon;
      for (std::size_t s = 0; s < n_outcomes; ++s) {
        // d/dp [ q ln(q/(p+eps)) + p ln(p/(q+eps)) ]
        //   = -q/(p+eps) + ln(p/(q+eps)) + 1.
        // p -> 0 makes the log diverge while dp/dtheta vanishes there; the
        // floor keeps the product finite without biasing nonzero p.
        const double p_floored = std::max(p[s], 1e-12);
        weights[r][s] =
            -q[s] / (p[s] + eps) + std::log(p_floored / (q[s] + eps)) + 1.0;
        if (loss_at_params) {
          if (q[s] > 0.0) loss_sum += q[s] * std::log(q[s] / (p[s] + eps));
          if (p[s] > 0.0) loss_sum += p[s] * std::log(p[s] / (q[s] + eps));
        }
      }
    } else {
      // d/dp (p-q)^T K (p-q) = 2 K (p-q).
      for (std::size_t s = 0; s < n_outcomes; ++s) {
        double row = 0.0;
        for (std::size_t t = 0; t < n_outcomes; ++t) {
          const double w = p[t] - q[t];
          if (w != 0.0) row += kernel_by_distance[std::popcount(s ^ t)] * w;
        }
        weights[r][s] = 2.0 * row;
        if (loss_at_params) loss_sum += (p[s] - q[s]) * row;
      }
    }
  }
  if (loss_at_params)
    *loss_at_params = loss_sum / static_cast<double>(n_records);

  const double shift = std::numbers::pi / 2.0;
  std::vector<double> point(params.begin(), params.end());
  std::vector<std::vector<double>> plus, minus;
  std::vector<double> gradient(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const double saved = point[i];
    point[i] = saved + shift;
    objective.exact_basis_probabilities(point, plus);
    point[i] = saved - shift;
    objective.exact_basis_probabilities(point, minus);
    point[i] = saved;
    if (function_calls) *function_calls += 2;

    double g = 0.0;
    for (std::size_t r = 0; r < n_records; ++r) {
      const auto& w = weights[r];
      const auto& pp = plus[r];
      const auto& pm = minus[r];
      double dot = 0.0;
      for (std::size_t s = 0; s < n_outcomes; ++s)
        dot += w[s] * (pp[s] - pm[s]);
      g += 0.5 * dot;
    }
    gradient[i] = g / static_cast<double>(n_records);
  }
  return gradient;
}

SeedBundle make_seed_bundle(std::uint64_t master_seed, std::uint64_t trial,
                            bool per_trial_data) {
  SeedBundle seeds;
  seeds.master = master_seed;
  seeds.trial = trial;
  const std::uint64_t data_index = per_trial_data ? trial : 0;
  seeds.data = derive_seed(master_seed, SeedPurpose::DataSampling, data_index);
  seeds.basis_select =
      derive_seed(master_seed, SeedPurpose::BasisSelection, data_index);
  seeds.init = derive_seed(master_seed, SeedPurpose::ParamInit, trial);
  seeds.optimizer = derive_seed(master_seed, SeedPurpose::Optimizer, trial);
  seeds.sampling = derive_seed(master_seed, SeedPurpose::TrainSampling, trial);
  return seeds;
}

std::vector<double> initial_parameters(const AnsatzSpec& spec,
                                       std::uint64_t init_seed) {
  Rng rng(init_seed);
  std::vector<double> params(spec.parameter_count());
  for (double& value : params)
    value = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return params;
}

TrainReport train(const MeasurementDataset& dataset, const TrainConfig& config,
                  const Statevector* reference, const ProgressFn& progress) {
  dataset.validate();
  if (config.ansatz.n_qubits != dataset.n_qubits)
    throw usage_error("train: ansatz qubit count does not match dataset");
  if (config.iterations < 0)
    throw config_error("train: iteration budget must be nonnegative");
  if (config.optimizer == OptimizerKind::ParameterShiftAdam &&
      !config.sampling.exact)
    throw config_error(
        "parameter-shift training requires exact-distribution evaluation");
  if (reference && reference->n_qubits() != dataset.n_qubits)
    throw usage_error("train: reference state does not match dataset");

  const auto t_start = std::chrono::steady_clock::now();

  TrainReport report;
  report.config = config;
  report.dataset_provenance = dataset.provenance;

  auto context = std::make_shared<TomographyObjective>(
      dataset, config.ansatz, config.loss, config.sampling,
      config.seeds.sampling);
  auto calls = std::make_shared<std::uint64_t>(0);
  // Heartbeat for optimizers without their own iteration hook: every 200
  // objective calls, surface the latest loss (iteration -1 marks these).
  Objective objective = [context, calls, &progress,
                         &config](std::span<const double> p) {
    const double value = (*context)(p);
    ++*calls;
    if (progress && config.optimizer != OptimizerKind::FiniteDifferenceAdam &&
        config.optimizer != OptimizerKind::ParameterShiftAdam &&
        *calls % 200 == 0)
      progress({-1, value, *calls});
    return value;
  };

  const std::vector<double> theta0 =
      initial_parameters(config.ansatz, config.seeds.init);

  OptimizerTrace trace;
  switch (config.optimizer) {
    case OptimizerKind::Spsa: {
      SpsaConfig spsa = config.spsa;
      spsa.max_iterations = config.iterations;
      spsa.seed = config.seeds.optimizer;
      if (config.calibrate_spsa) {
        spsa.a = calibrate_spsa_step_scale(
            objective, theta0, spsa.c,
            derive_seed(config.seeds.optimizer, SeedPurpose::Optimizer, 1));
      }
      trace = spsa_minimize(objective, theta0, spsa);
      break;
    }
    case OptimizerKind::NelderMead: {
      trace = nelder_mead_minimize(objective, theta0, config.nelder_mead);
      break;
    }
    case OptimizerKind::FiniteDifferenceAdam:
    case OptimizerKind::ParameterShiftAdam: {
      trace.final_params = theta0;
      AdamState adam;
      for (int k = 1; k <= config.iterations; ++k) {
        std::vector<double> gradient;
        double loss_value = 0.0;
        if (config.optimizer == OptimizerKind::FiniteDifferenceAdam) {
          loss_value = objective(trace.final_params);
          gradient = finite_difference_gradient(objective, trace.final_params,
                                                config.fd_delta);
        } else {
          gradient = tomography_parameter_shift_gradient(
              *context, trace.final_params, calls.get(), &loss_value);
        }
        if (!std::isfinite(loss_value)) {
          trace.aborted = true;
          trace.abort_reason =
              "non-finite objective value at iteration " + std::to_string(k);
          break;
        }
        adam_step(adam, trace.final_params, gradient, config.adam);
        trace.points.push_back({k, loss_value, *calls});
        if (progress) progress(trace.points.back());
      }
      break;
    }
  }
  trace.function_calls = *calls;

  if (trace.points.empty() && !trace.aborted) {
    // Degenerate zero-iteration budget: record the initial loss so the
    // report trace is never empty.
    const double loss0 = objective(trace.final_params);
    trace.points.push_back({0, loss0, *calls});
    trace.function_calls = *calls;
  }
  report.loss_trace.reserve(trace.points.size());
  for (const TracePoint& point : trace.points)
    report.loss_trace.emplace_back(point.iteration, point.loss);
  report.final_params = trace.final_params;
  report.function_calls = trace.function_calls;
  report.aborted = trace.aborted;
  report.abort_reason = trace.abort_reason;
  if (reference) {
    const Statevector reconstructed =
        evaluate_ansatz(config.ansatz, report.final_params);
    report.fidelity = fidelity(reconstructed, *reference);
  }

  const auto t_end = std::chrono::steady_clock::now();
  report.wall_clock_s =
      std::chrono::duration<double>(t_end - t_start).count();
  return report;
}

}  // namespace vqst
