#include "vqst/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "vqst/errors.hpp"
#include "vqst/io.hpp"

namespace vqst {

namespace {
using nlohmann::json;
using nlohmann::ordered_json;
}  // namespace

Statevector build_target(const TargetDescriptor& target) {
  switch (target.kind) {
    case TargetDescriptor::Kind::Ghz:
      return ghz_state(target.n_qubits);
    case TargetDescriptor::Kind::Xxz: {
      XxzParams params = target.xxz;
      params.sites = target.n_qubits;
      return ground_state(xxz_hamiltonian(params)).state;
    }
    case TargetDescriptor::Kind::RandomCircuit: {
      RandomCircuitSpec spec = target.circuit;
      spec.n_qubits = target.n_qubits;
      if (spec.gate_pool.empty()) spec.gate_pool = all_gate_kinds();
      return random_circuit_state(spec);
    }
  }
  throw config_error("unknown target kind");
}

std::string target_label(const TargetDescriptor& target) {
  std::ostringstream label;
  switch (target.kind) {
    case TargetDescriptor::Kind::Ghz:
      label << "ghz n=" << target.n_qubits;
      break;
    case TargetDescriptor::Kind::Xxz:
      label << "xxz L=" << target.n_qubits << " J=" << target.xxz.j
            << " delta=" << target.xxz.delta << " h=" << target.xxz.h;
      break;
    case TargetDescriptor::Kind::RandomCircuit:
      label << "random-circuit n=" << target.n_qubits
            << " layers=" << target.circuit.n_layers
            << " seed=" << target.circuit.seed;
      break;
  }
  return label.str();
}

int resolved_iterations(const ExperimentConfig& config) {
  if (config.iterations > 0) return config.iterations;
  if (config.iterations < 0)
    throw config_error("iteration budget must be nonnegative");
  return config.target.n_qubits <= 3 ? 1000 : 3000;
}

ResolvedGains resolved_spsa_gains(const ExperimentConfig& config) {
  const auto calibrated = [] {
    SpsaConfig base = spsa_gains_default();
    base.c = 0.2;  // calibration perturbation doubles as the c series scale
    return ResolvedGains{base, true};
  };
  switch (config.gains) {
    case SpsaGainsChoice::Tuned3q:
      return {spsa_gains_3q(), false};
    case SpsaGainsChoice::Default:
      return {spsa_gains_default(), false};
    case SpsaGainsChoice::Calibrated:
      return calibrated();
    case SpsaGainsChoice::Auto:
      // The tuned constants were fit to the KL loss scale on small systems;
      // everything else adapts the step scale to the observed loss.
      if (config.target.n_qubits <= 3 &&
          config.loss.kind == LossKind::SymmetricKl)
        return {spsa_gains_3q(), false};
      return calibrated();
  }
  throw config_error("unknown SPSA gains choice");
}

bool resolved_per_trial_data(const ExperimentConfig& config) {
  if (config.per_trial_data >= 0) return config.per_trial_data != 0;
  return !config.bases.all;  // random subsets are drawn fresh per trial
}

TrainConfig make_train_config(const ExperimentConfig& config,
                              std::uint64_t trial) {
  TrainConfig tc;
  tc.ansatz = {config.target.n_qubits, config.layers};
  tc.loss = config.loss;
  tc.optimizer = config.optimizer;
  const ResolvedGains gains = resolved_spsa_gains(config);
  tc.spsa = gains.base;
  tc.calibrate_spsa = gains.calibrate;
  tc.adam = config.adam;
  tc.fd_delta = config.fd_delta;
  tc.iterations = resolved_iterations(config);
  tc.nelder_mead.max_function_calls =
      config.nm_budget > 0 ? config.nm_budget
                           : 2 * static_cast<std::uint64_t>(tc.iterations);
  tc.sampling.exact = config.exact_mode;
  tc.sampling.shots = config.shots_per_iteration > 0
                          ? config.shots_per_iteration
                          : config.shots;
  tc.seeds = make_seed_bundle(config.master_seed, trial,
                              resolved_per_trial_data(config));
  return tc;
}

std::vector<MeasurementBasis> select_bases(const ExperimentConfig& config,
                                           const SeedBundle& seeds) {
  if (config.bases.all) return enumerate_bases(config.target.n_qubits);
  Rng rng(seeds.basis_select);
  return random_basis_subset(config.target.n_qubits, config.bases.subset_size,
                             rng);
}

MeasurementDataset build_trial_dataset(const ExperimentConfig& config,
                                       const Statevector& target,
                                       const SeedBundle& seeds) {
  std::ostringstream provenance;
  provenance << target_label(config.target) << " bases="
             << (config.bases.all
                     ? "all"
                     : "random:" + std::to_string(config.bases.subset_size))
             << " master_seed=" << seeds.master;
  if (resolved_per_trial_data(config))
    provenance << " trial=" << seeds.trial;
  return acquire_dataset(target, select_bases(config, seeds), config.shots,
                         seeds.data, provenance.str());
}

double median_of(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Quartiles quartiles_of(std::vector<double> values) {
  Quartiles q;
  if (values.empty()) {
    q.q1 = q.median = q.q3 = std::nan("");
    return q;
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  q.median = n % 2 == 1 ? values[n / 2]
                        : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  const std::size_t half = n / 2 + n % 2;  // lower half includes the middle
  std::vector<double> lower(values.begin(), values.begin() + half);
  std::vector<double> upper(values.end() - half, values.end());
  q.q1 = median_of(std::move(lower));
  q.q3 = median_of(std::move(upper));
  return q;
}

namespace {

TrialResult run_trial(const ExperimentConfig& config, const Statevector& target,
                      const MeasurementDataset* shared_dataset,
                      std::uint64_t trial) {
  TrialResult result;
  result.trial = static_cast<int>(trial);
  try {
    const TrainConfig tc = make_train_config(config, trial);
    MeasurementDataset own_dataset;
    const MeasurementDataset* dataset = shared_dataset;
    if (!dataset) {
      own_dataset = build_trial_dataset(config, target, tc.seeds);
      dataset = &own_dataset;
    }
    const Statevector initial_state = evaluate_ansatz(
        tc.ansatz, initial_parameters(tc.ansatz, tc.seeds.init));
    result.initial_fidelity = fidelity(initial_state, target);
    result.report = train(*dataset, tc, &target);
    result.completed = !result.report.aborted;
    if (result.report.aborted) result.error = result.report.abort_reason;
  } catch (const std::exception& e) {
    result.completed = false;
    result.error = e.what();
  }
  return result;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<TrialResult>& trials) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out << "trial,fidelity,final_loss\n";
  for (const auto& t : trials) {
    out << t.trial << ',';
    if (t.completed && t.report.fidelity) out << *t.report.fidelity;
    out << ',';
    if (t.completed && !t.report.loss_trace.empty())
      out << t.report.loss_trace.back().second;
    out << '\n';
  }
}

void summarize(BatchSummary& summary) {
  std::vector<double> fidelities;
  for (const auto& t : summary.trials)
    if (t.completed && t.report.fidelity)
      fidelities.push_back(*t.report.fidelity);
  summary.fidelity_quartiles = quartiles_of(fidelities);
  summary.median_fidelity = summary.fidelity_quartiles.median;
  std::vector<double> infidelities;
  infidelities.reserve(fidelities.size());
  for (double f : fidelities) infidelities.push_back(1.0 - f);
  summary.infidelity_quartiles = quartiles_of(infidelities);
}

}  // namespace

BatchSummary run_batch(const ExperimentConfig& config, const LogFn& log) {
  if (config.trials < 1) throw config_error("batch needs trials >= 1");
  const Statevector target = build_target(config.target);

  const bool per_trial = resolved_per_trial_data(config);
  MeasurementDataset shared_dataset;
  if (!per_trial) {
    shared_dataset =
        build_trial_dataset(config, target, make_seed_bundle(
                                                config.master_seed, 0, false));
  }

  BatchSummary summary;
  summary.name = config.name;
  summary.trials.resize(config.trials);

  unsigned workers = config.workers > 0
                         ? static_cast<unsigned>(config.workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, config.trials);

  std::atomic<int> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (int t = next.fetch_add(1); t < config.trials;
         t = next.fetch_add(1)) {
      TrialResult result = run_trial(config, target,
                                     per_trial ? nullptr : &shared_dataset,
                                     static_cast<std::uint64_t>(t));
      if (log) {
        std::scoped_lock lock(log_mutex);
        std::ostringstream msg;
        msg << config.name << " trial " << t << "/" << config.trials << ": ";
        if (result.completed && result.report.fidelity)
          msg << "fidelity " << *result.report.fidelity;
        else
          msg << "failed (" << result.error << ")";
        log(msg.str());
      }
      summary.trials[t] = std::move(result);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& thread : pool) thread.join();

  summarize(summary);

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    for (auto& t : summary.trials) {
      if (!t.completed) continue;
      std::ostringstream name;
      name << "trial_" << std::setw(3) << std::setfill('0') << t.trial
           << ".json";
      const auto path = config.out_dir / name.str();
      save_report(path, t.report);
      t.report_path = path.string();
    }
    const auto csv = config.out_dir / "trials.csv";
    write_csv(csv, summary.trials);
    summary.csv_path = csv.string();
    save_json(config.out_dir / "batch_summary.json",
              batch_summary_to_json(summary));
  }
  return summary;
}

nlohmann::ordered_json batch_summary_to_json(const BatchSummary& summary) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["name"] = summary.name;
  ordered_json trials = ordered_json::array();
  for (const auto& t : summary.trials) {
    ordered_json entry;
    entry["trial"] = t.trial;
    entry["completed"] = t.completed;
    if (t.completed) {
      entry["fidelity"] =
          t.report.fidelity ? ordered_json(*t.report.fidelity)
                            : ordered_json(nullptr);
      entry["final_loss"] = t.report.loss_trace.empty()
                                ? ordered_json(nullptr)
                                : ordered_json(t.report.loss_trace.back().second);
      entry["function_calls"] = t.report.function_calls;
      entry["seed"] = t.report.config.seeds.master;
      entry["trial_seeds"] = {{"init", t.report.config.seeds.init},
                              {"optimizer", t.report.config.seeds.optimizer},
                              {"sampling", t.report.config.seeds.sampling},
                              {"data", t.report.config.seeds.data}};
      if (!t.report_path.empty()) entry["report_path"] = t.report_path;
    } else {
      entry["error"] = t.error;
    }
    trials.push_back(std::move(entry));
  }
  doc["trials"] = std::move(trials);
  doc["median_fidelity"] = summary.median_fidelity;
  doc["quartiles"] = {
      {"fidelity",
       {summary.fidelity_quartiles.q1, summary.fidelity_quartiles.median,
        summary.fidelity_quartiles.q3}},
      {"infidelity",
       {summary.infidelity_quartiles.q1, summary.infidelity_quartiles.median,
        summary.infidelity_quartiles.q3}}};
  doc["csv_path"] = summary.csv_path;
  return doc;
}

ComparisonResult run_comparison(const ExperimentConfig& config,
                                const std::vector<OptimizerKind>& optimizers,
                                const LogFn& log) {
  if (optimizers.size() < 2)
    throw config_error("optimizer comparison needs at least 2 optimizers");
  ComparisonResult result;
  for (OptimizerKind kind : optimizers) {
    ExperimentConfig variant = config;
    variant.optimizer = kind;
    variant.name = config.name + "/" + optimizer_name(kind);
    const bool gradient_based = kind == OptimizerKind::FiniteDifferenceAdam ||
                                kind == OptimizerKind::ParameterShiftAdam;
    variant.exact_mode = gradient_based;  // shift rule needs exact mode
    if (gradient_based && config.iterations == 0) variant.iterations = 300;
    if (!config.out_dir.empty())
      variant.out_dir = config.out_dir / optimizer_name(kind);

    OptimizerComparisonEntry entry;
    entry.optimizer = kind;
    entry.summary = run_batch(variant, log);

    std::vector<double> calls, calls_per_progress;
    for (const auto& t : entry.summary.trials) {
      if (!t.completed || !t.report.fidelity) continue;
      calls.push_back(static_cast<double>(t.report.function_calls));
      const double progress =
          std::max(*t.report.fidelity - t.initial_fidelity, 0.01);
      calls_per_progress.push_back(
          static_cast<double>(t.report.function_calls) / progress);
    }
    entry.median_function_calls = median_of(std::move(calls));
    entry.median_calls_per_unit_progress =
        median_of(std::move(calls_per_progress));
    result.entries.push_back(std::move(entry));
  }

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    const auto csv = config.out_dir / "comparison.csv";
    std::ofstream out(csv);
    if (!out) throw io_error("cannot open for writing: " + csv.string());
    out << "optimizer,trial,fidelity,final_loss,function_calls\n";
    for (const auto& entry : result.entries) {
      for (const auto& t : entry.summary.trials) {
        out << optimizer_name(entry.optimizer) << ',' << t.trial << ',';
        if (t.completed && t.report.fidelity) out << *t.report.fidelity;
        out << ',';
        if (t.completed && !t.report.loss_trace.empty())
          out << t.report.loss_trace.back().second;
        out << ',' << t.report.function_calls << '\n';
      }
    }
    result.csv_path = csv.string();
    save_json(config.out_dir / "comparison.json", comparison_to_json(result));
  }
  return result;
}

nlohmann::ordered_json comparison_to_json(const ComparisonResult& result) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  ordered_json entries = ordered_json::array();
  for (const auto& entry : result.entries) {
    ordered_json e;
    e["optimizer"] = optimizer_name(entry.optimizer);
    e["median_fidelity"] = entry.summary.median_fidelity;
    e["median_function_calls"] = entry.median_function_calls;
    e["median_calls_per_unit_progress"] =
        entry.median_calls_per_unit_progress;
    ordered_json trials = ordered_json::array();
    for (const auto& t : entry.summary.trials) {
      ordered_json jt;
      jt["trial"] = t.trial;
      jt["completed"] = t.completed;
      if (t.completed) {
        jt["fidelity"] = t.report.fidelity ? ordered_json(*t.report.fidelity)
                                           : ordered_json(nullptr);
        jt["initial_fidelity"] = t.initial_fidelity;
        jt["final_loss"] = t.report.loss_trace.empty()
                               ? ordered_json(nullptr)
                               : ordered_json(
                                     t.report.loss_trace.back().second);
        jt["function_calls"] = t.report.function_calls;
      } else {
        jt["error"] = t.error;
      }
      trials.push_back(std::move(jt));
    }
    e["trials"] = std::move(trials);
    entries.push_back(std::move(e));
  }
  doc["optimizers"] = std::move(entries);
  doc["csv_path"] = result.csv_path;
  return doc;
}

namespace {

std::string gains_name(SpsaGainsChoice choice) {
  switch (choice) {
    case SpsaGainsChoice::Auto: return "auto";
    case SpsaGainsChoice::Tuned3q: return "3q-tuned";
    case SpsaGainsChoice::Default: return "default";
    case SpsaGainsChoice::Calibrated: return "calibrated";
  }
  return "?";
}

SpsaGainsChoice gains_from_name(const std::string& name) {
  if (name == "auto") return SpsaGainsChoice::Auto;
  if (name == "3q-tuned") return SpsaGainsChoice::Tuned3q;
  if (name == "default") return SpsaGainsChoice::Default;
  if (name == "calibrated") return SpsaGainsChoice::Calibrated;
  throw config_error("unknown SPSA gains choice \"" + name +
                     "\" (valid: auto, 3q-tuned, default, calibrated)");
}

std::string target_kind_name(TargetDescriptor::Kind kind) {
  switch (kind) {
    case TargetDescriptor::Kind::Ghz: return "ghz";
    case TargetDescriptor::Kind::Xxz: return "xxz";
    case TargetDescriptor::Kind::RandomCircuit: return "random-circuit";
  }
  return "?";
}

TargetDescriptor::Kind target_kind_from_name(const std::string& name) {
  if (name == "ghz") return TargetDescriptor::Kind::Ghz;
  if (name == "xxz") return TargetDescriptor::Kind::Xxz;
  if (name == "random-circuit") return TargetDescriptor::Kind::RandomCircuit;
  throw config_error("unknown target kind \"" + name +
                     "\" (valid: ghz, xxz, random-circuit)");
}

}  // namespace

nlohmann::ordered_json experiment_config_to_json(const ExperimentConfig& c) {
  ordered_json doc;
  doc["name"] = c.name;
  ordered_json target;
  target["kind"] = target_kind_name(c.target.kind);
  target["n_qubits"] = c.target.n_qubits;
  if (c.target.kind == TargetDescriptor::Kind::Xxz) {
    target["j"] = c.target.xxz.j;
    target["delta"] = c.target.xxz.delta;
    target["h"] = c.target.xxz.h;
  }
  if (c.target.kind == TargetDescriptor::Kind::RandomCircuit) {
    target["circuit_layers"] = c.target.circuit.n_layers;
    target["circuit_seed"] = c.target.circuit.seed;
  }
  doc["target"] = std::move(target);
  doc["bases"] = c.bases.all
                     ? ordered_json("all")
                     : ordered_json("random:" +
                                    std::to_string(c.bases.subset_size));
  doc["shots"] = c.shots;
  doc["layers"] = c.layers;
  doc["loss"] = {{"kind",
                  c.loss.kind == LossKind::SymmetricKl ? "symmetric-kl"
                                                       : "mmd"},
                 {"epsilon", c.loss.epsilon},
                 {"sigma", c.loss.sigma}};
  doc["optimizer"] = optimizer_name(c.optimizer);
  doc["gains"] = gains_name(c.gains);
  doc["iterations"] = c.iterations;
  doc["exact_mode"] = c.exact_mode;
  doc["shots_per_iteration"] = c.shots_per_iteration;
  doc["trials"] = c.trials;
  doc["seed"] = c.master_seed;
  doc["per_trial_data"] = c.per_trial_data;
  doc["workers"] = c.workers;
  doc["out_dir"] = c.out_dir.string();
  return doc;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc) {
  ExperimentConfig c;
  try {
    if (doc.contains("name")) c.name = doc["name"].get<std::string>();
    if (doc.contains("target")) {
      const json& target = doc["target"];
      if (target.contains("kind"))
        c.target.kind =
            target_kind_from_name(target["kind"].get<std::string>());
      if (target.contains("n_qubits"))
        c.target.n_qubits = target["n_qubits"].get<int>();
      if (target.contains("j")) c.target.xxz.j = target["j"].get<double>();
      if (target.contains("delta"))
        c.target.xxz.delta = target["delta"].get<double>();
      if (target.contains("h")) c.target.xxz.h = target["h"].get<double>();
      if (target.contains("circuit_layers"))
        c.target.circuit.n_layers = target["circuit_layers"].get<int>();
      if (target.contains("circuit_seed"))
        c.target.circuit.seed = target["circuit_seed"].get<std::uint64_t>();
      c.target.xxz.sites = c.target.n_qubits;
      c.target.circuit.n_qubits = c.target.n_qubits;
    }
    if (doc.contains("bases")) {
      const std::string spec = doc["bases"].get<std::string>();
      if (spec == "all") {
        c.bases = {true, 0};
      } else if (spec.rfind("random:", 0) == 0) {
        c.bases = {false, std::stoull(spec.substr(7))};
      } else {
        throw config_error("bases must be \"all\" or \"random:<k>\", got \"" +
                           spec + "\"");
      }
    }
    if (doc.contains("shots")) c.shots = doc["shots"].get<std::uint64_t>();
    if (doc.contains("layers")) c.layers = doc["layers"].get<int>();
    if (doc.contains("loss")) {
      const json& loss = doc["loss"];
      if (loss.contains("kind")) {
        const std::string kind = loss["kind"].get<std::string>();
        if (kind == "symmetric-kl")
          c.loss.kind = LossKind::SymmetricKl;
        else if (kind == "mmd")
          c.loss.kind = LossKind::Mmd;
        else
          throw config_error("unknown loss kind \"" + kind +
                             "\" (valid: symmetric-kl, mmd)");
      }
      if (loss.contains("epsilon"))
        c.loss.epsilon = loss["epsilon"].get<double>();
      if (loss.contains("sigma")) c.loss.sigma = loss["sigma"].get<double>();
    }
    if (doc.contains("optimizer")) {
      const std::string name = doc["optimizer"].get<std::string>();
      const auto kind = optimizer_from_name(name);
      if (!kind)
        throw config_error(
            "unknown optimizer \"" + name +
            "\" (valid: spsa, nelder-mead, finite-difference-adam, "
            "parameter-shift-adam)");
      c.optimizer = *kind;
    }
    if (doc.contains("gains"))
      c.gains = gains_from_name(doc["gains"].get<std::string>());
    if (doc.contains("iterations")) c.iterations = doc["iterations"].get<int>();
    if (doc.contains("exact_mode"))
      c.exact_mode = doc["exact_mode"].get<bool>();
    if (doc.contains("shots_per_iteration"))
      c.shots_per_iteration = doc["shots_per_iteration"].get<std::uint64_t>();
    if (doc.contains("trials")) c.trials = doc["trials"].get<int>();
    if (doc.contains("seed")) c.master_seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("per_trial_data"))
      c.per_trial_data = doc["per_trial_data"].get<int>();
    if (doc.contains("workers")) c.workers = doc["workers"].get<int>();
    if (doc.contains("out_dir"))
      c.out_dir = doc["out_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw validation_error(std::string("experiment config: ") + e.what());
  }
  return c;
}

}  // namespace vqst
