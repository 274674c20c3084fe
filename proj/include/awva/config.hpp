#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "awva/harness.hpp"

namespace awva {

struct OutputPaths {
    std::string trace_csv = "trace.csv";
    std::string theta_csv = "theta.csv";
    std::string theta0_csv = "theta0.csv";
    std::string batch_json = "batch.json";
    std::string spectra_prefix = "spectra";

    bool operator==(const OutputPaths&) const = default;
};

struct RunConfig {
    Campaign campaign;
    std::vector<SeedPair> seeds{{Seed{126}, Seed{913}}};
    unsigned threads = 1;
    std::size_t stft_window = 4096;
    std::size_t stft_hop = 2048;
    OutputPaths outputs;

    bool operator==(const RunConfig&) const = default;
};

// Flat "key = value" text with '#' comments. Unknown or repeated keys, malformed values and
// out-of-range parameters raise ParseError carrying the offending line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// Text that parses back to an equal RunConfig.
std::string to_text(const RunConfig& cfg);

// Shortest text that reads back to exactly v.
std::string format_number(double v);

}  // namespace awva
