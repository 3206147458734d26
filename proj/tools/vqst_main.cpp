// vqst: variational quantum state tomography experiment harness.
//
// Subcommands:
//   gen-data            write a measurement dataset for a target state
//   train               train the ansatz against a dataset file
//   batch               run N independent training trials and summarize
//   compare-optimizers  run the same experiment under several optimizers
//
// Standard output carries only the paths of the machine-readable results;
// progress goes to standard error.

#include <CLI11.hpp>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>

#include "vqst/errors.hpp"
#include "vqst/harness.hpp"
#include "vqst/io.hpp"

namespace {

using namespace vqst;

std::mutex g_log_mutex;

void log_line(const std::string& message) {
  std::scoped_lock lock(g_log_mutex);
  std::cerr << message << '\n';
}

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::uint64_t> shots;
  std::optional<int> layers;
  std::optional<std::string> optimizer;
  std::optional<std::string> loss;
  std::optional<double> epsilon;
  std::optional<double> sigma;
  std::optional<std::string> bases;
  std::optional<int> iterations;
  std::optional<std::string> gains;
  bool exact_mode = false;
  std::optional<std::string> target;
  std::optional<int> qubits;
  std::optional<double> xxz_j, xxz_delta, xxz_h;
  std::optional<std::uint64_t> circuit_seed;
  std::optional<int> circuit_layers;
  std::optional<int> workers;
  std::optional<int> per_trial_data;
  std::string out_dir = "runs";
  std::string name;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "experiment config JSON; flags below override its fields");
  cmd->add_option("--seed", flags.seed, "master seed (all streams derive)");
  cmd->add_option("--trials", flags.trials, "number of independent trials");
  cmd->add_option("--shots", flags.shots, "shots per basis in the dataset");
  cmd->add_option("--layers", flags.layers, "ansatz rotation layers");
  cmd->add_option("--optimizer", flags.optimizer,
                  "spsa | nelder-mead | finite-difference-adam | "
                  "parameter-shift-adam");
  cmd->add_option("--loss", flags.loss, "symmetric-kl | mmd");
  cmd->add_option("--epsilon", flags.epsilon, "KL denominator guard");
  cmd->add_option("--sigma", flags.sigma, "MMD kernel bandwidth");
  cmd->add_option("--bases", flags.bases, "all | random:<k>");
  cmd->add_option("--iterations", flags.iterations,
                  "optimizer iteration budget (0 = auto)");
  cmd->add_option("--gains", flags.gains, "SPSA gains: auto | 3q-tuned | default");
  cmd->add_flag("--exact-mode", flags.exact_mode,
                "measure the ansatz exactly instead of sampling shots");
  cmd->add_option("--target", flags.target, "ghz | xxz | random-circuit");
  cmd->add_option("--qubits", flags.qubits, "target qubit count");
  cmd->add_option("--xxz-j", flags.xxz_j, "XXZ coupling J");
  cmd->add_option("--xxz-delta", flags.xxz_delta, "XXZ anisotropy Delta");
  cmd->add_option("--xxz-h", flags.xxz_h, "XXZ field h");
  cmd->add_option("--circuit-seed", flags.circuit_seed,
                  "random-circuit target seed");
  cmd->add_option("--circuit-layers", flags.circuit_layers,
                  "random-circuit target layers");
  cmd->add_option("--workers", flags.workers, "worker threads (0 = all cores)");
  cmd->add_option("--per-trial-data", flags.per_trial_data,
                  "-1 auto, 0 shared dataset, 1 fresh dataset per trial");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--name", flags.name, "experiment name");
}

ExperimentConfig resolve_config(const CommonFlags& flags) {
  ExperimentConfig config;
  if (!flags.config_path.empty())
    config = experiment_config_from_json(load_json(flags.config_path));
  if (!flags.name.empty()) config.name = flags.name;
  if (flags.seed) config.master_seed = *flags.seed;
  if (flags.trials) config.trials = *flags.trials;
  if (flags.shots) config.shots = *flags.shots;
  if (flags.layers) config.layers = *flags.layers;
  if (flags.optimizer) {
    const auto kind = optimizer_from_name(*flags.optimizer);
    if (!kind)
      throw config_error(
          "unknown optimizer \"" + *flags.optimizer +
          "\" (valid: spsa, nelder-mead, finite-difference-adam, "
          "parameter-shift-adam)");
    config.optimizer = *kind;
  }
  if (flags.loss) {
    if (*flags.loss == "symmetric-kl")
      config.loss.kind = LossKind::SymmetricKl;
    else if (*flags.loss == "mmd")
      config.loss.kind = LossKind::Mmd;
    else
      throw config_error("unknown loss \"" + *flags.loss +
                         "\" (valid: symmetric-kl, mmd)");
  }
  if (flags.epsilon) config.loss.epsilon = *flags.epsilon;
  if (flags.sigma) config.loss.sigma = *flags.sigma;
  if (flags.bases) {
    if (*flags.bases == "all") {
      config.bases = {true, 0};
    } else if (flags.bases->rfind("random:", 0) == 0) {
      config.bases = {false, std::stoull(flags.bases->substr(7))};
    } else {
      throw config_error("--bases must be all or random:<k>, got \"" +
                         *flags.bases + "\"");
    }
  }
  if (flags.iterations) config.iterations = *flags.iterations;
  if (flags.gains) {
    nlohmann::json probe;
    probe["gains"] = *flags.gains;
    config.gains = experiment_config_from_json(probe).gains;
  }
  if (flags.exact_mode) config.exact_mode = true;
  if (flags.target) {
    nlohmann::json probe;
    probe["target"] = {{"kind", *flags.target}};
    config.target.kind = experiment_config_from_json(probe).target.kind;
  }
  if (flags.qubits) {
    config.target.n_qubits = *flags.qubits;
    config.target.xxz.sites = *flags.qubits;
    config.target.circuit.n_qubits = *flags.qubits;
  }
  if (flags.xxz_j) config.target.xxz.j = *flags.xxz_j;
  if (flags.xxz_delta) config.target.xxz.delta = *flags.xxz_delta;
  if (flags.xxz_h) config.target.xxz.h = *flags.xxz_h;
  if (flags.circuit_seed) config.target.circuit.seed = *flags.circuit_seed;
  if (flags.circuit_layers)
    config.target.circuit.n_layers = *flags.circuit_layers;
  if (flags.workers) config.workers = *flags.workers;
  if (flags.per_trial_data) config.per_trial_data = *flags.per_trial_data;
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  return config;
}

int cmd_gen_data(const CommonFlags& flags) {
  ExperimentConfig config = resolve_config(flags);
  const Statevector target = build_target(config.target);
  const SeedBundle seeds = make_seed_bundle(config.master_seed, 0,
                                            resolved_per_trial_data(config));
  const MeasurementDataset dataset =
      build_trial_dataset(config, target, seeds);
  std::filesystem::create_directories(config.out_dir);
  const auto path = config.out_dir / (config.name + "_dataset.json");
  save_dataset(path, dataset);
  log_line("wrote dataset with " + std::to_string(dataset.records.size()) +
           " records");
  std::cout << path.string() << ' ' << file_checksum(path) << '\n';
  return 0;
}

int cmd_train(const CommonFlags& flags, const std::string& dataset_path) {
  ExperimentConfig config = resolve_config(flags);
  const MeasurementDataset dataset = load_dataset(dataset_path);
  config.target.n_qubits = dataset.n_qubits;
  config.target.xxz.sites = dataset.n_qubits;
  config.target.circuit.n_qubits = dataset.n_qubits;
  TrainConfig tc = make_train_config(config, 0);
  if (config.optimizer == OptimizerKind::ParameterShiftAdam)
    tc.sampling.exact = true;
  tc.sampling.shots = config.shots_per_iteration > 0
                          ? config.shots_per_iteration
                          : dataset.shots_per_basis;

  // Fidelity is only computable when the caller names the target state.
  std::optional<Statevector> reference;
  if (flags.target) reference = build_target(config.target);

  int last_logged = 0;
  ProgressFn progress = [&](const TracePoint& point) {
    const int milestone = static_cast<int>(point.function_calls / 1000);
    if (point.iteration >= 0 && point.iteration % 100 != 0) return;
    if (point.iteration < 0 && milestone == last_logged) return;
    last_logged = milestone;
    log_line("calls " + std::to_string(point.function_calls) + " loss " +
             std::to_string(point.loss));
  };
  const TrainReport report =
      train(dataset, tc, reference ? &*reference : nullptr, progress);

  std::filesystem::create_directories(config.out_dir);
  const auto path = config.out_dir / (config.name + "_report.json");
  save_report(path, report);
  if (report.fidelity)
    log_line("final fidelity " + std::to_string(*report.fidelity));
  std::cout << path.string() << '\n';
  return 0;
}

int cmd_batch(const CommonFlags& flags) {
  ExperimentConfig config = resolve_config(flags);
  if (config.out_dir.empty()) config.out_dir = "runs";
  const BatchSummary summary = run_batch(config, log_line);
  log_line("median fidelity " + std::to_string(summary.median_fidelity));
  std::cout << (config.out_dir / "batch_summary.json").string() << '\n';
  return 0;
}

int cmd_compare(const CommonFlags& flags, const std::string& optimizer_list) {
  ExperimentConfig config = resolve_config(flags);
  if (config.out_dir.empty()) config.out_dir = "runs";
  std::vector<OptimizerKind> kinds;
  std::string item;
  std::istringstream stream(optimizer_list);
  while (std::getline(stream, item, ',')) {
    const auto kind = optimizer_from_name(item);
    if (!kind)
      throw config_error(
          "unknown optimizer \"" + item +
          "\" (valid: spsa, nelder-mead, finite-difference-adam, "
          "parameter-shift-adam)");
    kinds.push_back(*kind);
  }
  const ComparisonResult result = run_comparison(config, kinds, log_line);
  for (const auto& entry : result.entries)
    log_line(optimizer_name(entry.optimizer) + ": median fidelity " +
             std::to_string(entry.summary.median_fidelity) +
             ", median calls " +
             std::to_string(entry.median_function_calls));
  std::cout << (config.out_dir / "comparison.json").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational quantum state tomography harness"};
  app.require_subcommand(1);

  CommonFlags gen_flags, train_flags, batch_flags, compare_flags;
  std::string dataset_path;
  std::string optimizer_list = "spsa,nelder-mead";

  CLI::App* gen = app.add_subcommand("gen-data", "write a measurement dataset");
  add_common_flags(gen, gen_flags);

  CLI::App* tr = app.add_subcommand("train", "train against a dataset file");
  add_common_flags(tr, train_flags);
  tr->add_option("dataset", dataset_path, "dataset JSON path")->required();

  CLI::App* batch = app.add_subcommand("batch", "run independent trials");
  add_common_flags(batch, batch_flags);

  CLI::App* cmp = app.add_subcommand("compare-optimizers",
                                     "run the experiment per optimizer");
  add_common_flags(cmp, compare_flags);
  cmp->add_option("--optimizers", optimizer_list,
                  "comma-separated optimizer names (>= 2)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      if (gen_flags.name.empty()) gen_flags.name = "experiment";
      return cmd_gen_data(gen_flags);
    }
    if (tr->parsed()) {
      if (train_flags.name.empty()) train_flags.name = "train";
      return cmd_train(train_flags, dataset_path);
    }
    if (batch->parsed()) {
      if (batch_flags.name.empty()) batch_flags.name = "batch";
      return cmd_batch(batch_flags);
    }
    if (cmp->parsed()) {
      if (compare_flags.name.empty()) compare_flags.name = "comparison";
      return cmd_compare(compare_flags, optimizer_list);
    }
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const config_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const io_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
