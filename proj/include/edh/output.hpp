#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "edh/experiments.hpp"
#include "edh/freefermion.hpp"

namespace edh {

/// "%.17g": enough digits to round-trip any double.
std::string format_double(double v);

// CSV schemas (header line first, one record per line):
//   spectrum:     index,energy,coherence_length,outlier
//   correlations: state_index,j,abs_correlation      (state_index -1 = eigenstate average)
//   scaling:      eps,L,N,l_max,l_av,outliers
//   overlap:      L,overlap_squared,eq10_length,direct_length
void write_spectrum_csv(const std::filesystem::path& path, const std::vector<CoherenceRecord>& records);
void write_correlations_csv(const std::filesystem::path& path, const std::vector<CorrelationRow>& rows);
void write_scaling_csv(const std::filesystem::path& path, const ScalingResult& result);
void write_overlap_csv(const std::filesystem::path& path, const OverlapScalingResult& result);

nlohmann::json to_json(const ModelParams& params);
nlohmann::json to_json(const LinearFit& fit);
nlohmann::json to_json(const SpectrumJobResult& result);
nlohmann::json scaling_fits_json(const ScalingResult& result);
nlohmann::json overlap_fits_json(const OverlapScalingResult& result);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// manifest.json in `dir`: command, effective config, version, and a checksum per output.
void write_manifest(const std::filesystem::path& dir, const std::string& command, const nlohmann::json& config,
                    const std::vector<std::filesystem::path>& outputs, const nlohmann::json& summary);

}  // namespace edh
