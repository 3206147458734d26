// Acceptance suite: end-to-end reconstruction experiments with pinned
// thresholds, one test case per criterion. Every case prints a single
// [PASS]/[FAIL] line with the measured numbers.
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "oracles.hpp"
#include "test_helpers.hpp"
#include "vqst/harness.hpp"
#include "vqst/io.hpp"
#include "vqst/targets.hpp"
#include "vqst/tomography.hpp"

using namespace vqst;

namespace {

struct CriterionCheck {
  explicit CriterionCheck(std::string title) : name(std::move(title)) {
    start = std::chrono::steady_clock::now();
  }
  ~CriterionCheck() {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << " — " << detail.str()
              << " (runtime " << static_cast<int>(seconds) << "s)\n";
  }
  void expect(bool condition, const std::string& what) {
    CHECK_MESSAGE(condition, what);
    if (!condition) {
      ok = false;
      detail << " !! " << what << ";";
    }
  }
  std::ostringstream& note() { return detail; }

  std::string name;
  bool ok = true;
  std::ostringstream detail;
  std::chrono::steady_clock::time_point start;
};

ExperimentConfig base_config(TargetDescriptor::Kind kind, int n_qubits,
                             int layers, std::uint64_t seed) {
  ExperimentConfig config;
  config.target.kind = kind;
  config.target.n_qubits = n_qubits;
  config.target.xxz = {n_qubits, 1.0, 1.0, 1.0};
  config.target.circuit.n_qubits = n_qubits;
  config.layers = layers;
  config.shots = 100;
  config.trials = 20;
  config.master_seed = seed;
  config.workers = 0;  // all cores
  return config;
}

std::vector<double> completed_fidelities(const BatchSummary& summary) {
  std::vector<double> out;
  for (const auto& trial : summary.trials)
    if (trial.completed && trial.report.fidelity)
      out.push_back(*trial.report.fidelity);
  return out;
}

std::vector<double> final_losses(const BatchSummary& summary) {
  std::vector<double> out;
  for (const auto& trial : summary.trials)
    if (trial.completed && !trial.report.loss_trace.empty())
      out.push_back(trial.report.loss_trace.back().second);
  return out;
}

}  // namespace

TEST_CASE("criterion-1 ghz3 full-basis reconstruction") {
  CriterionCheck check("criterion 1: GHZ3, 27 bases, 10-layer ansatz, SPSA");
  const ExperimentConfig config =
      base_config(TargetDescriptor::Kind::Ghz, 3, 10, 9001);
  const BatchSummary summary = run_batch(config);

  const auto fidelities = completed_fidelities(summary);
  check.expect(fidelities.size() == 20, "all 20 trials completed");
  const double median = oracle::median(fidelities);
  check.expect(median >= 0.98, "median fidelity >= 0.98");

  int within = 0;
  for (double f : fidelities) within += (1.0 - f) <= 0.02;
  check.expect(within >= 15, "most trials (>= 15/20) infidelity <= 0.02");
  check.note() << "median fidelity " << median << "; " << within
               << "/20 trials within infidelity 0.02";
}

TEST_CASE("criterion-2 xxz3 ground-state reconstruction") {
  CriterionCheck check("criterion 2: XXZ3 ground state, 27 bases, 10 layers");
  const ExperimentConfig config =
      base_config(TargetDescriptor::Kind::Xxz, 3, 10, 9002);
  const BatchSummary summary = run_batch(config);

  const auto fidelities = completed_fidelities(summary);
  check.expect(fidelities.size() == 20, "all 20 trials completed");
  const double median = oracle::median(fidelities);
  check.expect(median >= 0.98, "median fidelity >= 0.98");
  check.note() << "median fidelity " << median;
}

TEST_CASE("criterion-3 ghz6 full-basis reconstruction with outlier screening") {
  CriterionCheck check("criterion 3: GHZ6, 729 bases, 10 layers");
  const ExperimentConfig config =
      base_config(TargetDescriptor::Kind::Ghz, 6, 10, 9003);
  const BatchSummary summary = run_batch(config);

  const auto fidelities = completed_fidelities(summary);
  check.expect(fidelities.size() == 20, "all 20 trials completed");
  const double median = oracle::median(fidelities);
  check.expect(median >= 0.98, "median fidelity >= 0.98");

  // Outliers (infidelity > 0.1) must be few and flagged by the loss: every
  // outlier's final loss above every non-outlier's final loss.
  const auto losses = final_losses(summary);
  std::vector<std::size_t> outliers;
  double max_regular_loss = -1e300;
  for (std::size_t t = 0; t < fidelities.size(); ++t) {
    if (1.0 - fidelities[t] > 0.1)
      outliers.push_back(t);
    else
      max_regular_loss = std::max(max_regular_loss, losses[t]);
  }
  check.expect(outliers.size() <= 4, "at most 4 outlier trials");
  for (std::size_t t : outliers)
    check.expect(losses[t] > max_regular_loss,
                 "outlier trial has one of the highest final losses");
  check.note() << "median fidelity " << median << "; outliers "
               << outliers.size() << "/20";
}

TEST_CASE("criterion-4 xxz6 ground-state reconstruction") {
  CriterionCheck check("criterion 4: XXZ6 ground state, 729 bases, 16 layers");
  const ExperimentConfig config =
      base_config(TargetDescriptor::Kind::Xxz, 6, 16, 9004);
  const BatchSummary summary = run_batch(config);

  const auto fidelities = completed_fidelities(summary);
  check.expect(fidelities.size() == 20, "all 20 trials completed");
  const double median = oracle::median(fidelities);
  check.expect(median >= 0.90, "median fidelity >= 0.90");
  check.note() << "median fidelity " << median;
}

TEST_CASE("criterion-5 incomplete measurement bases") {
  CriterionCheck check("criterion 5: random basis subsets");

  struct Case {
    TargetDescriptor::Kind kind;
    int n_qubits;
    int layers;
    std::uint64_t subset;
    double bar;
    std::uint64_t seed;
    const char* label;
  };
  const Case cases[] = {
      {TargetDescriptor::Kind::Ghz, 3, 10, 15, 0.97, 9051, "GHZ3/15"},
      {TargetDescriptor::Kind::Xxz, 3, 10, 15, 0.97, 9052, "XXZ3/15"},
      {TargetDescriptor::Kind::Ghz, 6, 10, 200, 0.98, 9053, "GHZ6/200"},
      {TargetDescriptor::Kind::Xxz, 6, 16, 200, 0.88, 9054, "XXZ6/200"},
  };
  for (const Case& c : cases) {
    ExperimentConfig config = base_config(c.kind, c.n_qubits, c.layers, c.seed);
    config.bases = {false, c.subset};  // fresh basis draw per trial
    const BatchSummary summary = run_batch(config);
    const auto fidelities = completed_fidelities(summary);
    check.expect(fidelities.size() == 20,
                 std::string(c.label) + ": all 20 trials completed");
    const double median = oracle::median(fidelities);
    std::ostringstream what;
    what << c.label << ": median fidelity >= " << c.bar;
    check.expect(median >= c.bar, what.str());
    check.note() << c.label << " median " << median << "; ";
  }
}

TEST_CASE("criterion-6 random-circuit targets") {
  CriterionCheck check("criterion 6: seeded random-circuit targets");

  // Five 3-qubit, 5-layer targets, 10 trials each, per-target median >= 0.9.
  for (std::uint64_t circuit_seed = 1; circuit_seed <= 5; ++circuit_seed) {
    ExperimentConfig config =
        base_config(TargetDescriptor::Kind::RandomCircuit, 3, 10,
                    9600 + circuit_seed);
    config.target.circuit = {3, 5, circuit_seed, {}};
    config.trials = 10;
    const BatchSummary summary = run_batch(config);
    const auto fidelities = completed_fidelities(summary);
    check.expect(fidelities.size() == 10, "3q target: all trials completed");
    const double median = oracle::median(fidelities);
    std::ostringstream what;
    what << "3q circuit seed " << circuit_seed << ": median >= 0.9";
    check.expect(median >= 0.9, what.str());
    check.note() << "3q#" << circuit_seed << " " << median << "; ";
  }

  // Five 6-qubit targets, 12-layer ansatz; class-level bar on the overall
  // median across all runs.
  std::vector<double> six_qubit_fidelities;
  for (std::uint64_t circuit_seed = 11; circuit_seed <= 15; ++circuit_seed) {
    ExperimentConfig config =
        base_config(TargetDescriptor::Kind::RandomCircuit, 6, 12,
                    9650 + circuit_seed);
    config.target.circuit = {6, 5, circuit_seed, {}};
    config.trials = 10;
    const BatchSummary summary = run_batch(config);
    for (double f : completed_fidelities(summary))
      six_qubit_fidelities.push_back(f);
    check.note() << "6q#" << circuit_seed << " " << summary.median_fidelity
                 << "; ";
  }
  check.expect(six_qubit_fidelities.size() == 50,
               "6q targets: all trials completed");
  const double typical = oracle::median(six_qubit_fidelities);
  check.expect(typical >= 0.85, "6q overall median fidelity >= 0.85");
  check.note() << "6q overall median " << typical;
}

TEST_CASE("criterion-7 mmd loss training") {
  CriterionCheck check("criterion 7: MMD loss, sigma 0.1");

  ExperimentConfig ghz3 = base_config(TargetDescriptor::Kind::Ghz, 3, 10, 9071);
  ghz3.loss = {LossKind::Mmd, 1e-3, 0.1};
  const BatchSummary ghz_summary = run_batch(ghz3);
  const double ghz_median =
      oracle::median(completed_fidelities(ghz_summary));
  check.expect(completed_fidelities(ghz_summary).size() == 20,
               "GHZ3 MMD: all trials completed");
  check.expect(ghz_median >= 0.97, "GHZ3 MMD median fidelity >= 0.97");

  ExperimentConfig xxz6 = base_config(TargetDescriptor::Kind::Xxz, 6, 16, 9072);
  xxz6.loss = {LossKind::Mmd, 1e-3, 0.1};
  const BatchSummary xxz_summary = run_batch(xxz6);
  const double xxz_median =
      oracle::median(completed_fidelities(xxz_summary));
  check.expect(completed_fidelities(xxz_summary).size() == 20,
               "XXZ6 MMD: all trials completed");
  check.expect(xxz_median >= 0.88, "XXZ6 MMD median fidelity >= 0.88");
  check.note() << "GHZ3 median " << ghz_median << "; XXZ6 median "
               << xxz_median;
}

TEST_CASE("criterion-8 optimizer comparison at 3 qubits") {
  CriterionCheck check("criterion 8: optimizer comparison, GHZ3, 25 trials");

  ExperimentConfig config =
      base_config(TargetDescriptor::Kind::Ghz, 3, 10, 9081);
  config.trials = 25;
  const std::vector<OptimizerKind> kinds = {
      OptimizerKind::Spsa, OptimizerKind::NelderMead,
      OptimizerKind::FiniteDifferenceAdam, OptimizerKind::ParameterShiftAdam};
  const ComparisonResult result = run_comparison(config, kinds);
  REQUIRE(result.entries.size() == 4);

  const auto& spsa = result.entries[0];
  const auto& nelder = result.entries[1];
  const auto& fd = result.entries[2];
  const auto& ps = result.entries[3];

  check.expect(spsa.summary.median_fidelity >= 0.9,
               "SPSA median fidelity >= 0.9");
  check.expect(nelder.summary.median_fidelity < 0.9,
               "Nelder-Mead median fidelity < 0.9");

  // Exactly two objective calls per iteration for every SPSA trial.
  const int iterations = resolved_iterations(config);
  for (const auto& trial : spsa.summary.trials)
    check.expect(trial.report.function_calls ==
                     2 * static_cast<std::uint64_t>(iterations),
                 "SPSA spends exactly 2 calls per iteration");

  // Gradient methods are the costliest, in raw calls and per unit of
  // fidelity progress (Nelder-Mead is excluded from the progress ratio:
  // it makes no meaningful progress here).
  for (const auto* gradient_entry : {&fd, &ps}) {
    check.expect(gradient_entry->median_function_calls >
                     spsa.median_function_calls,
                 "gradient method uses more calls than SPSA");
    check.expect(gradient_entry->median_function_calls >
                     nelder.median_function_calls,
                 "gradient method uses more calls than Nelder-Mead");
    check.expect(gradient_entry->median_calls_per_unit_progress >
                     spsa.median_calls_per_unit_progress,
                 "gradient method pays more calls per unit progress");
  }
  check.note() << "medians: spsa " << spsa.summary.median_fidelity << " ("
               << spsa.median_function_calls << " calls), nelder-mead "
               << nelder.summary.median_fidelity << " ("
               << nelder.median_function_calls << " calls), fd-adam "
               << fd.summary.median_fidelity << " ("
               << fd.median_function_calls << " calls), ps-adam "
               << ps.summary.median_fidelity << " ("
               << ps.median_function_calls << " calls)";
}

TEST_CASE("criterion-9 property suite") {
  CriterionCheck check("criterion 9: property suite");

  // Norm conservation across random circuits.
  bool norms_ok = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RandomCircuitSpec spec{5, 12, seed, all_gate_kinds()};
    const Statevector state = random_circuit_state(spec);
    norms_ok = norms_ok && std::abs(state.norm() - 1.0) < 1e-10;
  }
  check.expect(norms_ok, "norm conserved to 1e-10 across random circuits");

  // Shift rule vs central differences on shiftable objectives.
  const AnsatzSpec spec{2, 4};
  const Objective observable = [&spec](std::span<const double> theta) {
    return testutil::z_parity_expectation(evaluate_ansatz(spec, theta));
  };
  bool gradients_ok = true;
  Rng rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> theta(spec.parameter_count());
    for (double& t : theta) t = rng.uniform(-3.0, 3.0);
    const auto shift = parameter_shift_gradient(observable, theta);
    const auto diff = finite_difference_gradient(observable, theta, 1e-5);
    for (std::size_t i = 0; i < theta.size(); ++i)
      gradients_ok = gradients_ok && std::abs(shift[i] - diff[i]) < 1e-6;
  }
  check.expect(gradients_ok, "shift rule matches central differences to 1e-6");

  // Two-site chain: ground energy -3 with the singlet eigenvector.
  const GroundState gs = ground_state(xxz_hamiltonian({2, 1.0, 1.0, 1.0}));
  check.expect(std::abs(gs.energy + 3.0) < 1e-10, "XXZ2 ground energy is -3");
  const double s2 = 1.0 / std::sqrt(2.0);
  const Statevector singlet(
      2, {cplx{0, 0}, cplx{s2, 0}, cplx{-s2, 0}, cplx{0, 0}});
  check.expect(fidelity(gs.state, singlet) > 1.0 - 1e-10,
               "XXZ2 ground state is the singlet");

  // KL self-divergence bound and MMD identities.
  Rng dist_rng(7);
  bool kl_ok = true, mmd_ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    OutcomeDistribution p{3, std::vector<double>(8, 0.0)};
    double total = 0.0;
    for (double& v : p.probabilities) total += v = dist_rng.uniform();
    for (double& v : p.probabilities) v /= total;
    int support = 0;
    for (double v : p.probabilities) support += v > 0.0;
    kl_ok = kl_ok &&
            std::abs(symmetric_kl(p, p, 1e-3)) <= 2 * 1e-3 * support;
    mmd_ok = mmd_ok && mmd(p, p, 0.1) <= 1e-12;

    OutcomeDistribution q{3, std::vector<double>(8, 0.0)};
    total = 0.0;
    for (double& v : q.probabilities) total += v = dist_rng.uniform();
    for (double& v : q.probabilities) v /= total;
    mmd_ok = mmd_ok && mmd(p, q, 0.1) >= -1e-12;
  }
  check.expect(kl_ok, "KL self-divergence within the 2*eps*support bound");
  check.expect(mmd_ok, "MMD nonnegative and zero on equal distributions");

  // Round trips and bit-identical reruns.
  const Statevector ghz = ghz_state(3);
  const auto bases = enumerate_bases(3);
  const MeasurementDataset d1 = acquire_dataset(ghz, bases, 100, 55, "ghz");
  const MeasurementDataset d2 = acquire_dataset(ghz, bases, 100, 55, "ghz");
  check.expect(dataset_to_json(d1).dump() == dataset_to_json(d2).dump(),
               "dataset acquisition is byte-identical under a fixed seed");
  check.expect(dataset_from_json(dataset_to_json(d1)) == d1,
               "dataset JSON round trip");

  TrainConfig tc;
  tc.ansatz = {3, 6};
  tc.spsa = spsa_gains_3q();
  tc.iterations = 60;
  tc.seeds = make_seed_bundle(777, 0, false);
  const TrainReport r1 = train(d1, tc, &ghz);
  const TrainReport r2 = train(d1, tc, &ghz);
  check.expect(r1.loss_trace == r2.loss_trace &&
                   r1.final_params == r2.final_params &&
                   r1.fidelity == r2.fidelity,
               "training reruns bit-identically under fixed seeds");
  check.expect(report_from_json(report_to_json(r1)) == r1,
               "report JSON round trip");
  check.note() << "all property families checked";
}
