#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vqst/ansatz.hpp"
#include "vqst/losses.hpp"
#include "vqst/measurement.hpp"
#include "vqst/optimizers.hpp"
#include "vqst/rng.hpp"
#include "vqst/statevector.hpp"

namespace vqst {

/// How the ansatz is measured inside the training objective: finite shots
/// (resampled fresh on every objective call) or exact distributions.
struct SamplingMode {
  bool exact = false;
  std::uint64_t shots = 100;

  bool operator==(const SamplingMode& other) const = default;
};

enum class OptimizerKind {
  Spsa,
  NelderMead,
  FiniteDifferenceAdam,
  ParameterShiftAdam,
};

std::string optimizer_name(OptimizerKind kind);
std::optional<OptimizerKind> optimizer_from_name(const std::string& name);

/// Measure the target in each basis: exact distribution, then finite-shot
/// sampling. Basis i draws from an independent stream derived from
/// (data_seed, DataSampling, i), so acquisition order never matters.
MeasurementDataset acquire_dataset(const Statevector& target,
                                   const std::vector<MeasurementBasis>& bases,
                                   std::uint64_t shots, std::uint64_t data_seed,
                                   std::string provenance);

/// The training objective of the reconstruction loop: evaluate the ansatz at
/// the given parameters, measure it per basis (sampled or exact), and return
/// the mean per-basis loss against the dataset. Holds reusable scratch, so
/// one instance serves one training run (not thread-safe across calls).
class TomographyObjective {
 public:
  TomographyObjective(const MeasurementDataset& dataset, const AnsatzSpec& spec,
                      const LossConfig& loss, const SamplingMode& mode,
                      std::uint64_t sampling_seed);

  double operator()(std::span<const double> params);

  /// Exact per-record outcome probabilities of the ansatz state, aligned
  /// with the dataset record order. Used by the chain-rule gradient.
  void exact_basis_probabilities(std::span<const double> params,
                                 std::vector<std::vector<double>>& out);

  const MeasurementDataset& dataset() const { return *dataset_; }
  const LossConfig& loss_config() const { return loss_; }
  int parameter_count() const { return circuit_.n_parameters; }

 private:
  const MeasurementDataset* dataset_;
  ParamCircuit circuit_;
  std::vector<Circuit> rotations_;
  std::vector<OutcomeDistribution> target_empirical_;
  LossConfig loss_;
  SamplingMode mode_;
  Rng rng_;
  // scratch
  Statevector state_;
  Statevector rotated_;
  OutcomeDistribution dist_;
  std::vector<double> cumulative_;
};

/// Gradient of the tomography loss assembled by the chain rule over exact
/// per-basis probabilities, each of which obeys the parameter-shift rule.
/// Requires exact-distribution evaluation. Spends 1 + 2*dim circuit
/// evaluations, which are added to *function_calls.
std::vector<double> tomography_parameter_shift_gradient(
    TomographyObjective& objective, std::span<const double> params,
    std::uint64_t* function_calls, double* loss_at_params = nullptr);

/// Fully resolved per-trial seeds (all derived from the master seed; see
/// derive_seed).
struct SeedBundle {
  std::uint64_t master = 0;
  std::uint64_t trial = 0;
  std::uint64_t data = 0;
  std::uint64_t basis_select = 0;
  std::uint64_t init = 0;
  std::uint64_t optimizer = 0;
  std::uint64_t sampling = 0;

  bool operator==(const SeedBundle& other) const = default;
};

SeedBundle make_seed_bundle(std::uint64_t master_seed, std::uint64_t trial,
                            bool per_trial_data);

struct TrainConfig {
  AnsatzSpec ansatz;
  LossConfig loss;
  OptimizerKind optimizer = OptimizerKind::Spsa;
  SpsaConfig spsa;  // seed overwritten with seeds.optimizer
  /// Replace spsa.a with a step scale calibrated from loss differences at
  /// the start point (2 * 25 extra objective calls before iteration 1).
  bool calibrate_spsa = false;
  AdamConfig adam;
  double fd_delta = 0.01;
  NelderMeadConfig nelder_mead;
  int iterations = 1000;  // SPSA and Adam iteration budget
  SamplingMode sampling;
  SeedBundle seeds;

  bool operator==(const TrainConfig& other) const = default;
};

struct TrainReport {
  std::vector<std::pair<int, double>> loss_trace;  // (iteration, loss)
  std::vector<double> final_params;
  std::optional<double> fidelity;  // absent without a reference target
  std::uint64_t function_calls = 0;
  TrainConfig config;
  std::string dataset_provenance;
  double wall_clock_s = 0.0;
  bool aborted = false;
  std::string abort_reason;

  bool operator==(const TrainReport& other) const = default;
};

using ProgressFn = std::function<void(const TracePoint&)>;

/// Initial parameters: uniform in [-pi, pi) per slot from the init seed.
std::vector<double> initial_parameters(const AnsatzSpec& spec,
                                       std::uint64_t init_seed);

/// Run Algorithm-1 training: build the objective from the dataset, run the
/// selected optimizer for its budget, and assemble the report. When a
/// reference target is given (simulation mode), the final fidelity is
/// computed; otherwise it is recorded as absent. An optimizer abort is
/// propagated in the report with the partial trace preserved.
TrainReport train(const MeasurementDataset& dataset, const TrainConfig& config,
                  const Statevector* reference = nullptr,
                  const ProgressFn& progress = nullptr);

}  // namespace vqst
