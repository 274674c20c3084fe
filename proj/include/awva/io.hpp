#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "awva/core_model.hpp"
#include "awva/correlator.hpp"
#include "awva/harness.hpp"
#include "awva/spectral.hpp"

namespace awva {

// Environment variable that redirects relative output paths.
inline constexpr const char* output_dir_env = "AWVA_OUTPUT_DIR";

std::filesystem::path resolve_output_path(const std::string& path);

// 17 significant digits; reads back to the same double.
std::string format_full(double v);

void emit_trace_csv(const Trace& trace, const std::filesystem::path& path);
void emit_theta_csv(const ThetaCurve& curve, const std::filesystem::path& path);
void emit_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path);
void emit_spectrogram_csv(const Spectrogram& sg, const std::filesystem::path& path);

nlohmann::ordered_json batch_to_json(const BatchResult& result, const Campaign& campaign);
std::string batch_json_text(const BatchResult& result, const Campaign& campaign);
void emit_batch_json(const BatchResult& result, const Campaign& campaign, const std::filesystem::path& path);

// Two-column numeric CSV with a header row.
std::vector<std::pair<double, double>> read_two_column_csv(const std::filesystem::path& path);

}  // namespace awva
