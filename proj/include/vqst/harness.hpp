#pragma once

#include <filesystem>
#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "vqst/targets.hpp"
#include "vqst/tomography.hpp"

namespace vqst {

/// Which state the experiment reconstructs.
struct TargetDescriptor {
  enum class Kind { Ghz, Xxz, RandomCircuit };
  Kind kind = Kind::Ghz;
  int n_qubits = 3;
  XxzParams xxz{3, 1.0, 1.0, 1.0};  // sites kept in sync with n_qubits
  RandomCircuitSpec circuit{3, 5, 0, {}};  // empty pool = all kinds

  bool operator==(const TargetDescriptor& other) const = default;
};

Statevector build_target(const TargetDescriptor& target);
std::string target_label(const TargetDescriptor& target);

/// Measure every basis, or a per-trial random subset of the given size.
struct BasisPolicy {
  bool all = true;
  std::uint64_t subset_size = 0;

  bool operator==(const BasisPolicy& other) const = default;
};

enum class SpsaGainsChoice {
  Auto,        // tuned 3-qubit set for n <= 3, calibrated otherwise
  Tuned3q,     // the fixed small-system gain constants
  Default,     // fixed canonical-exponent constants, no calibration
  Calibrated,  // canonical exponents with the step scale fit at the start
};

struct ExperimentConfig {
  std::string name = "experiment";
  TargetDescriptor target;
  BasisPolicy bases;
  std::uint64_t shots = 100;
  int layers = 10;
  LossConfig loss;
  OptimizerKind optimizer = OptimizerKind::Spsa;
  SpsaGainsChoice gains = SpsaGainsChoice::Auto;
  AdamConfig adam;
  double fd_delta = 0.01;
  int iterations = 0;           // 0 = auto: 1000 for n <= 3, 3000 otherwise
  std::uint64_t nm_budget = 0;  // 0 = 2 * iterations (call parity with SPSA)
  bool exact_mode = false;
  std::uint64_t shots_per_iteration = 0;  // 0 = match dataset shots
  int trials = 20;
  std::uint64_t master_seed = 12345;
  /// -1 = auto: per-trial datasets (independent basis draws) when the basis
  /// policy is a random subset, one shared dataset otherwise.
  int per_trial_data = -1;
  int workers = 0;  // 0 = hardware concurrency
  std::filesystem::path out_dir;  // empty = keep results in memory only
};

nlohmann::ordered_json experiment_config_to_json(const ExperimentConfig& c);
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);

/// Effective settings after the auto rules above are applied.
int resolved_iterations(const ExperimentConfig& config);
struct ResolvedGains {
  SpsaConfig base;
  bool calibrate = false;
};
ResolvedGains resolved_spsa_gains(const ExperimentConfig& config);
bool resolved_per_trial_data(const ExperimentConfig& config);
TrainConfig make_train_config(const ExperimentConfig& config,
                              std::uint64_t trial);

/// Measurement bases for one trial (subset draws use the trial's
/// basis-selection seed).
std::vector<MeasurementBasis> select_bases(const ExperimentConfig& config,
                                           const SeedBundle& seeds);

/// Dataset for one trial under the resolved data-sharing policy.
MeasurementDataset build_trial_dataset(const ExperimentConfig& config,
                                       const Statevector& target,
                                       const SeedBundle& seeds);

struct TrialResult {
  int trial = 0;
  bool completed = false;
  std::string error;
  TrainReport report;
  double initial_fidelity = 0.0;
  std::string report_path;
};

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Tukey hinges: quartiles are medians of the lower/upper halves, each half
/// including the middle element when the count is odd.
Quartiles quartiles_of(std::vector<double> values);
double median_of(std::vector<double> values);

struct BatchSummary {
  std::string name;
  std::vector<TrialResult> trials;
  double median_fidelity = 0.0;
  Quartiles fidelity_quartiles;
  Quartiles infidelity_quartiles;
  std::string csv_path;
};

using LogFn = std::function<void(const std::string&)>;

/// Run `trials` independent trainings on a bounded worker pool. Results are
/// deterministic per trial regardless of scheduling (all seeds derived).
/// A crashing trial is recorded (completed = false) and the batch continues.
/// When out_dir is set, per-trial reports, the summary JSON, and a plot CSV
/// are written there.
BatchSummary run_batch(const ExperimentConfig& config, const LogFn& log = {});

nlohmann::ordered_json batch_summary_to_json(const BatchSummary& summary);

struct OptimizerComparisonEntry {
  OptimizerKind optimizer;
  BatchSummary summary;
  double median_function_calls = 0.0;
  double median_calls_per_unit_progress = 0.0;
};

struct ComparisonResult {
  std::vector<OptimizerComparisonEntry> entries;
  std::string csv_path;
};

/// Train the same target with each optimizer (>= 2 required) and collect the
/// infidelity and function-call statistics side by side. Gradient-based
/// optimizers run in exact-distribution mode; SPSA and Nelder-Mead measure
/// with finite shots.
ComparisonResult run_comparison(const ExperimentConfig& config,
                                const std::vector<OptimizerKind>& optimizers,
                                const LogFn& log = {});

nlohmann::ordered_json comparison_to_json(const ComparisonResult& result);

}  // namespace vqst
