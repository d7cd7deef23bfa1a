#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qfc/conversion.hpp"
#include "qfc/noise.hpp"

namespace qfc {

/// Shortest round-trip decimal representation, '.' separator, locale-free.
std::string format_double(double v);

/// Reads `pump_power_w,efficiency` rows.
std::vector<EfficiencySample> read_efficiency_samples(const std::filesystem::path& path);

/// Reads `pump_power_w,ncr_cps` rows.
std::vector<NoiseSample> read_noise_samples(const std::filesystem::path& path);

/// Writes a rectangular CSV (header + rows) atomically: temp file + rename.
void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

/// Writes arbitrary text atomically.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qfc
