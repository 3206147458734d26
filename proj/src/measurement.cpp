#include "vqst/measurement.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "vqst/errors.hpp"

namespace vqst {

MeasurementBasis::MeasurementBasis(std::string axes_in)
    : axes(std::move(axes_in)) {
  if (axes.empty()) throw usage_error("measurement basis must be nonempty");
  for (char c : axes) {
    if (c != 'X' && c != 'Y' && c != 'Z')
      throw usage_error("measurement basis axis must be X, Y, or Z; got \"" +
                        axes + "\"");
  }
}

Circuit basis_rotation(const MeasurementBasis& basis) {
  Circuit circuit;
  for (int q = 0; q < basis.n_qubits(); ++q) {
    switch (basis.axes[q]) {
      case 'X':
        circuit.push_back(h(q));
        break;
      case 'Y':
        circuit.push_back(sdg(q));
        circuit.push_back(h(q));
        break;
      default:
        break;  // Z: computational basis already
    }
  }
  return circuit;
}

double OutcomeDistribution::probability(const std::string& bitstring) const {
  const std::uint64_t index = index_from_bitstring(bitstring);
  if (bitstring.size() != static_cast<std::size_t>(n_qubits))
    throw usage_error("bitstring length does not match distribution");
  return probabilities[index];
}

OutcomeDistribution exact_distribution(const Statevector& state,
                                       const MeasurementBasis& basis) {
  if (basis.n_qubits() != state.n_qubits())
    throw usage_error("basis length " + std::to_string(basis.n_qubits()) +
                      " does not match state with " +
                      std::to_string(state.n_qubits()) + " qubits");
  Statevector rotated = state;
  rotated.apply(basis_rotation(basis));
  return {state.n_qubits(), rotated.probabilities()};
}

Histogram sample(const OutcomeDistribution& dist, std::uint64_t shots,
                 Rng& rng) {
  if (shots < 1) throw config_error("shot count must be at least 1");
  // Inverse-CDF draw over the cumulative sums; the final entry absorbs any
  // rounding slack.
  std::vector<double> cumulative(dist.probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
    acc += dist.probabilities[i];
    cumulative[i] = acc;
  }
  Histogram hist;
  hist.shots = shots;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    const auto it =
        std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::uint64_t outcome = static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                 cumulative.size() - 1));
    ++hist.counts[outcome];
  }
  return hist;
}

OutcomeDistribution empirical_distribution(const Histogram& histogram,
                                           int n_qubits) {
  OutcomeDistribution dist;
  dist.n_qubits = n_qubits;
  dist.probabilities.assign(std::uint64_t(1) << n_qubits, 0.0);
  const double scale = 1.0 / static_cast<double>(histogram.shots);
  for (const auto& [outcome, count] : histogram.counts) {
    if (outcome >= dist.probabilities.size())
      throw usage_error("histogram outcome exceeds 2^n_qubits");
    dist.probabilities[outcome] = static_cast<double>(count) * scale;
  }
  return dist;
}

namespace {

std::uint64_t pow3(int n) {
  std::uint64_t v = 1;
  for (int i = 0; i < n; ++i) v *= 3;
  return v;
}

MeasurementBasis basis_from_ternary(std::uint64_t code, int n_qubits) {
  static constexpr char kAxes[3] = {'X', 'Y', 'Z'};
  std::string axes(static_cast<std::size_t>(n_qubits), 'Z');
  for (int q = n_qubits - 1; q >= 0; --q) {
    axes[q] = kAxes[code % 3];
    code /= 3;
  }
  return MeasurementBasis(std::move(axes));
}

}  // namespace

std::vector<MeasurementBasis> enumerate_bases(int n_qubits) {
  if (n_qubits < 1) throw config_error("basis enumeration needs n >= 1");
  const std::uint64_t total = pow3(n_qubits);
  std::vector<MeasurementBasis> bases;
  bases.reserve(total);
  for (std::uint64_t code = 0; code < total; ++code)
    bases.push_back(basis_from_ternary(code, n_qubits));
  return bases;
}

std::vector<MeasurementBasis> random_basis_subset(int n_qubits,
                                                  std::uint64_t k, Rng& rng) {
  if (n_qubits < 1) throw config_error("basis subset needs n >= 1");
  const std::uint64_t total = pow3(n_qubits);
  if (k < 1 || k > total)
    throw config_error("basis subset size " + std::to_string(k) +
                       " out of range [1, " + std::to_string(total) + "]");
  std::vector<MeasurementBasis> bases;
  bases.reserve(k);
  for (std::uint64_t code : rng.sample_without_replacement(total, k))
    bases.push_back(basis_from_ternary(code, n_qubits));
  return bases;
}

void MeasurementDataset::validate() const {
  std::vector<std::string> problems;
  if (n_qubits < 1 || n_qubits > Statevector::kMaxQubits)
    problems.push_back("n_qubits: " + std::to_string(n_qubits) +
                       " out of range [1, 12]");
  if (shots_per_basis < 1) problems.push_back("shots_per_basis: must be >= 1");
  if (records.empty()) problems.push_back("records: empty");
  std::set<std::string> seen;
  const std::uint64_t dim = std::uint64_t(1) << n_qubits;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const std::string where = "records[" + std::to_string(r) + "]";
    const auto& rec = records[r];
    if (rec.basis.n_qubits() != n_qubits)
      problems.push_back(where + ".basis: length " +
                         std::to_string(rec.basis.n_qubits()) +
                         " != n_qubits " + std::to_string(n_qubits));
    if (!seen.insert(rec.basis.axes).second)
      problems.push_back(where + ".basis: duplicate \"" + rec.basis.axes +
                         "\"");
    std::uint64_t total = 0;
    for (const auto& [outcome, count] : rec.histogram.counts) {
      if (outcome >= dim)
        problems.push_back(where + ".counts: outcome index " +
                           std::to_string(outcome) + " >= 2^n");
      total += count;
    }
    if (rec.histogram.shots != shots_per_basis)
      problems.push_back(where + ".shots: " +
                         std::to_string(rec.histogram.shots) +
                         " != shots_per_basis " +
                         std::to_string(shots_per_basis));
    if (total != rec.histogram.shots)
      problems.push_back(where + ".counts: sum " + std::to_string(total) +
                         " != shots " + std::to_string(rec.histogram.shots));
  }
  if (!problems.empty()) {
    std::string message = "dataset validation failed:";
    for (const auto& p : problems) message += "\n  - " + p;
    throw validation_error(message);
  }
}

}  // namespace vqst
