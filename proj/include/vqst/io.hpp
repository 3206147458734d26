#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

#include "vqst/measurement.hpp"
#include "vqst/tomography.hpp"

namespace vqst {

inline constexpr int kFormatVersion = 1;

/// Dataset document:
///   {format_version, n_qubits, shots_per_basis, seed, provenance,
///    records: [{basis: "XYZ...", counts: {"010...": int}}]}
/// Bitstring character 0 = qubit 0 (most significant amplitude bit).
nlohmann::ordered_json dataset_to_json(const MeasurementDataset& dataset);
MeasurementDataset dataset_from_json(const nlohmann::json& doc);

/// Training report document:
///   {format_version, config, seeds, loss_trace: [[iter, loss]],
///    function_calls, final_params, fidelity, wall_clock_s, aborted}
nlohmann::ordered_json report_to_json(const TrainReport& report);
TrainReport report_from_json(const nlohmann::json& doc);

void save_json(const std::filesystem::path& path,
               const nlohmann::ordered_json& doc);
nlohmann::json load_json(const std::filesystem::path& path);

void save_dataset(const std::filesystem::path& path,
                  const MeasurementDataset& dataset);
MeasurementDataset load_dataset(const std::filesystem::path& path);

void save_report(const std::filesystem::path& path, const TrainReport& report);
TrainReport load_report(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string file_checksum(const std::filesystem::path& path);

}  // namespace vqst
