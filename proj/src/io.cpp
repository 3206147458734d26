#include "vqst/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "vqst/errors.hpp"

namespace vqst {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& require(const json& doc, const char* key,
                    const std::string& where) {
  const auto it = doc.find(key);
  if (it == doc.end())
    throw validation_error(where + ": missing field \"" + key + "\"");
  return *it;
}

void check_version(const json& doc, const std::string& where) {
  const int version = require(doc, "format_version", where).get<int>();
  if (version != kFormatVersion)
    throw validation_error(where + ": unsupported format_version " +
                           std::to_string(version));
}

std::string loss_kind_name(LossKind kind) {
  return kind == LossKind::SymmetricKl ? "symmetric-kl" : "mmd";
}

LossKind loss_kind_from_name(const std::string& name) {
  if (name == "symmetric-kl") return LossKind::SymmetricKl;
  if (name == "mmd") return LossKind::Mmd;
  throw validation_error("unknown loss kind \"" + name + "\"");
}

}  // namespace

ordered_json dataset_to_json(const MeasurementDataset& dataset) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["n_qubits"] = dataset.n_qubits;
  doc["shots_per_basis"] = dataset.shots_per_basis;
  doc["seed"] = dataset.seed;
  doc["provenance"] = dataset.provenance;
  ordered_json records = ordered_json::array();
  for (const auto& record : dataset.records) {
    ordered_json counts = ordered_json::object();
    for (const auto& [outcome, count] : record.histogram.counts)
      counts[bitstring_from_index(outcome, dataset.n_qubits)] = count;
    records.push_back({{"basis", record.basis.axes}, {"counts", counts}});
  }
  doc["records"] = std::move(records);
  return doc;
}

MeasurementDataset dataset_from_json(const json& doc) {
  const std::string where = "dataset";
  try {
    check_version(doc, where);
    MeasurementDataset dataset;
    dataset.n_qubits = require(doc, "n_qubits", where).get<int>();
    dataset.shots_per_basis =
        require(doc, "shots_per_basis", where).get<std::uint64_t>();
    dataset.seed = require(doc, "seed", where).get<std::uint64_t>();
    dataset.provenance = require(doc, "provenance", where).get<std::string>();
    for (const auto& entry : require(doc, "records", where)) {
      DatasetRecord record;
      record.basis = MeasurementBasis(
          require(entry, "basis", where + ".records").get<std::string>());
      record.histogram.shots = 0;
      for (const auto& [bits, count] :
           require(entry, "counts", where + ".records").items()) {
        const std::uint64_t c = count.get<std::uint64_t>();
        record.histogram.counts[index_from_bitstring(bits)] = c;
        record.histogram.shots += c;
      }
      dataset.records.push_back(std::move(record));
    }
    dataset.validate();
    return dataset;
  } catch (const json::exception& e) {
    throw validation_error(where + ": malformed document: " + e.what());
  } catch (const usage_error& e) {
    throw validation_error(where + ": " + e.what());
  }
}

namespace {

ordered_json config_to_json(const TrainConfig& config) {
  ordered_json doc;
  doc["n_qubits"] = config.ansatz.n_qubits;
  doc["layers"] = config.ansatz.n_layers;
  doc["loss"] = {{"kind", loss_kind_name(config.loss.kind)},
                 {"epsilon", config.loss.epsilon},
                 {"sigma", config.loss.sigma}};
  doc["optimizer"] = optimizer_name(config.optimizer);
  doc["spsa"] = {{"a", config.spsa.a},     {"A", config.spsa.A},
                 {"alpha", config.spsa.alpha}, {"c", config.spsa.c},
                 {"gamma", config.spsa.gamma}};
  doc["calibrate_spsa"] = config.calibrate_spsa;
  doc["adam"] = {{"learning_rate", config.adam.learning_rate},
                 {"beta1", config.adam.beta1},
                 {"beta2", config.adam.beta2},
                 {"eps", config.adam.eps}};
  doc["fd_delta"] = config.fd_delta;
  doc["nelder_mead"] = {
      {"max_function_calls", config.nelder_mead.max_function_calls},
      {"initial_step", config.nelder_mead.initial_step},
      {"tolerance", config.nelder_mead.tolerance}};
  doc["iterations"] = config.iterations;
  doc["exact_mode"] = config.sampling.exact;
  doc["shots_per_iteration"] = config.sampling.shots;
  return doc;
}

TrainConfig config_from_json(const json& doc) {
  const std::string where = "report.config";
  TrainConfig config;
  config.ansatz.n_qubits = require(doc, "n_qubits", where).get<int>();
  config.ansatz.n_layers = require(doc, "layers", where).get<int>();
  const json& loss = require(doc, "loss", where);
  config.loss.kind =
      loss_kind_from_name(require(loss, "kind", where).get<std::string>());
  config.loss.epsilon = require(loss, "epsilon", where).get<double>();
  config.loss.sigma = require(loss, "sigma", where).get<double>();
  const std::string opt_name =
      require(doc, "optimizer", where).get<std::string>();
  const auto kind = optimizer_from_name(opt_name);
  if (!kind)
    throw validation_error(where + ": unknown optimizer \"" + opt_name + "\"");
  config.optimizer = *kind;
  const json& spsa = require(doc, "spsa", where);
  config.spsa.a = require(spsa, "a", where).get<double>();
  config.spsa.A = require(spsa, "A", where).get<double>();
  config.spsa.alpha = require(spsa, "alpha", where).get<double>();
  config.spsa.c = require(spsa, "c", where).get<double>();
  config.spsa.gamma = require(spsa, "gamma", where).get<double>();
  config.calibrate_spsa = require(doc, "calibrate_spsa", where).get<bool>();
  const json& adam = require(doc, "adam", where);
  config.adam.learning_rate =
      require(adam, "learning_rate", where).get<double>();
  config.adam.beta1 = require(adam, "beta1", where).get<double>();
  config.adam.beta2 = require(adam, "beta2", where).get<double>();
  config.adam.eps = require(adam, "eps", where).get<double>();
  config.fd_delta = require(doc, "fd_delta", where).get<double>();
  const json& nm = require(doc, "nelder_mead", where);
  config.nelder_mead.max_function_calls =
      require(nm, "max_function_calls", where).get<std::uint64_t>();
  config.nelder_mead.initial_step =
      require(nm, "initial_step", where).get<double>();
  config.nelder_mead.tolerance = require(nm, "tolerance", where).get<double>();
  config.iterations = require(doc, "iterations", where).get<int>();
  config.sampling.exact = require(doc, "exact_mode", where).get<bool>();
  config.sampling.shots =
      require(doc, "shots_per_iteration", where).get<std::uint64_t>();
  return config;
}

ordered_json seeds_to_json(const SeedBundle& seeds) {
  ordered_json doc;
  doc["master"] = seeds.master;
  doc["trial"] = seeds.trial;
  doc["data"] = seeds.data;
  doc["basis_select"] = seeds.basis_select;
  doc["init"] = seeds.init;
  doc["optimizer"] = seeds.optimizer;
  doc["sampling"] = seeds.sampling;
  return doc;
}

SeedBundle seeds_from_json(const json& doc) {
  const std::string where = "report.seeds";
  SeedBundle seeds;
  seeds.master = require(doc, "master", where).get<std::uint64_t>();
  seeds.trial = require(doc, "trial", where).get<std::uint64_t>();
  seeds.data = require(doc, "data", where).get<std::uint64_t>();
  seeds.basis_select =
      require(doc, "basis_select", where).get<std::uint64_t>();
  seeds.init = require(doc, "init", where).get<std::uint64_t>();
  seeds.optimizer = require(doc, "optimizer", where).get<std::uint64_t>();
  seeds.sampling = require(doc, "sampling", where).get<std::uint64_t>();
  return seeds;
}

}  // namespace

ordered_json report_to_json(const TrainReport& report) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  ordered_json config = config_to_json(report.config);
  config["dataset_provenance"] = report.dataset_provenance;
  doc["config"] = std::move(config);
  doc["seeds"] = seeds_to_json(report.config.seeds);
  ordered_json trace = ordered_json::array();
  for (const auto& [iteration, loss] : report.loss_trace)
    trace.push_back({iteration, loss});
  doc["loss_trace"] = std::move(trace);
  doc["function_calls"] = report.function_calls;
  doc["final_params"] = report.final_params;
  if (report.fidelity)
    doc["fidelity"] = *report.fidelity;
  else
    doc["fidelity"] = nullptr;
  doc["wall_clock_s"] = report.wall_clock_s;
  doc["aborted"] = report.aborted;
  if (report.aborted) doc["abort_reason"] = report.abort_reason;
  return doc;
}

TrainReport report_from_json(const json& doc) {
  const std::string where = "report";
  try {
    check_version(doc, where);
    TrainReport report;
    const json& config = require(doc, "config", where);
    report.config = config_from_json(config);
    report.dataset_provenance =
        require(config, "dataset_provenance", where).get<std::string>();
    report.config.seeds = seeds_from_json(require(doc, "seeds", where));
    for (const auto& pair : require(doc, "loss_trace", where)) {
      if (!pair.is_array() || pair.size() != 2)
        throw validation_error(where + ".loss_trace: entries must be "
                               "[iteration, loss] pairs");
      report.loss_trace.emplace_back(pair[0].get<int>(),
                                     pair[1].get<double>());
    }
    report.function_calls =
        require(doc, "function_calls", where).get<std::uint64_t>();
    report.final_params =
        require(doc, "final_params", where).get<std::vector<double>>();
    const json& fidelity = require(doc, "fidelity", where);
    if (!fidelity.is_null()) report.fidelity = fidelity.get<double>();
    report.wall_clock_s = require(doc, "wall_clock_s", where).get<double>();
    report.aborted = require(doc, "aborted", where).get<bool>();
    if (report.aborted)
      report.abort_reason =
          require(doc, "abort_reason", where).get<std::string>();
    return report;
  } catch (const json::exception& e) {
    throw validation_error(where + ": malformed document: " + e.what());
  }
}

void save_json(const std::filesystem::path& path, const ordered_json& doc) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw io_error("write failed: " + path.string());
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open for reading: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw validation_error(path.string() + ": invalid JSON: " + e.what());
  }
}

void save_dataset(const std::filesystem::path& path,
                  const MeasurementDataset& dataset) {
  save_json(path, dataset_to_json(dataset));
}

MeasurementDataset load_dataset(const std::filesystem::path& path) {
  return dataset_from_json(load_json(path));
}

void save_report(const std::filesystem::path& path,
                 const TrainReport& report) {
  save_json(path, report_to_json(report));
}

TrainReport load_report(const std::filesystem::path& path) {
  return report_from_json(load_json(path));
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path.string());
  std::uint64_t hash = 0xCBF29CE484222325ull;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001B3ull;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << hash;
  return hex.str();
}

}  // namespace vqst
