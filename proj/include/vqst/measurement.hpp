#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vqst/circuit.hpp"
#include "vqst/rng.hpp"
#include "vqst/statevector.hpp"

namespace vqst {

/// One Pauli measurement setting: an axis in {X, Y, Z} per qubit.
/// Character position = qubit index.
struct MeasurementBasis {
  std::string axes;

  MeasurementBasis() = default;
  explicit MeasurementBasis(std::string axes_in);

  int n_qubits() const { return static_cast<int>(axes.size()); }
  bool operator==(const MeasurementBasis& other) const = default;
  auto operator<=>(const MeasurementBasis& other) const = default;
};

/// Change-of-basis circuit: measuring the rotated state in the computational
/// basis equals measuring the original state in the named Pauli basis.
/// Per qubit: X axis appends H; Y axis appends Sdg then H (the +i eigenstate
/// maps to outcome 0); Z axis appends nothing.
Circuit basis_rotation(const MeasurementBasis& basis);

/// Exact outcome probabilities over all 2^n bitstrings, index-aligned with
/// the project bit ordering.
struct OutcomeDistribution {
  int n_qubits = 0;
  std::vector<double> probabilities;  // length 2^n

  double probability(const std::string& bitstring) const;
};

/// probabilities[s] = |amplitude of s after basis_rotation|^2.
/// Throws usage_error on dimension mismatch.
OutcomeDistribution exact_distribution(const Statevector& state,
                                       const MeasurementBasis& basis);

/// Finite-shot counts. Sparse: absent bitstring means zero counts.
struct Histogram {
  std::uint64_t shots = 0;
  std::map<std::uint64_t, std::uint64_t> counts;  // outcome index -> count

  bool operator==(const Histogram& other) const = default;
};

/// Draw `shots` i.i.d. outcomes from the distribution. Reproducible given
/// the stream. Throws config_error for shots < 1.
Histogram sample(const OutcomeDistribution& dist, std::uint64_t shots,
                 Rng& rng);

/// Normalized counts as a dense distribution (count / shots).
OutcomeDistribution empirical_distribution(const Histogram& histogram,
                                           int n_qubits);

/// All 3^n bases in lexicographic order over X < Y < Z.
std::vector<MeasurementBasis> enumerate_bases(int n_qubits);

/// k distinct bases drawn uniformly without replacement.
/// Throws config_error for k outside [1, 3^n].
std::vector<MeasurementBasis> random_basis_subset(int n_qubits, std::uint64_t k,
                                                  Rng& rng);

/// Target-state training data: one histogram per measured basis.
struct DatasetRecord {
  MeasurementBasis basis;
  Histogram histogram;

  bool operator==(const DatasetRecord& other) const = default;
};

struct MeasurementDataset {
  int n_qubits = 0;
  std::uint64_t shots_per_basis = 0;
  std::uint64_t seed = 0;       // seed the file can be regenerated from
  std::string provenance;       // free-text label of the target state
  std::vector<DatasetRecord> records;

  bool operator==(const MeasurementDataset& other) const = default;

  /// Enforce the dataset invariants (unique bases, counts summing to
  /// shots_per_basis, valid axis strings). Throws validation_error listing
  /// every offending field.
  void validate() const;
};

}  // namespace vqst
