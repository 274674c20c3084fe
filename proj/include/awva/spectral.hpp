#pragma once

#include <cstddef>
#include <vector>

#include "awva/core_model.hpp"

namespace awva {

struct Spectrum {
    double df = 0.0;
    std::vector<double> magnitudes;  // one-sided, bins 0..n/2

    double frequency(std::size_t bin) const noexcept { return df * static_cast<double>(bin); }
};

struct Spectrogram {
    std::size_t window_len = 0;
    std::size_t hop = 0;
    std::vector<double> column_times;  // window centres, seconds
    std::vector<Spectrum> columns;

    double column_energy(std::size_t c) const;
    // Column whose window centre is nearest to t.
    std::size_t column_at(double t) const;
};

inline constexpr std::size_t default_window_len = 4096;
inline constexpr std::size_t default_hop = 2048;

// Magnitude of the DFT of the raw samples, no window or padding.
Spectrum fft_magnitude(const Trace& trace);
Spectrogram spectrogram(const Trace& trace, std::size_t window_len = default_window_len,
                        std::size_t hop = default_hop);
// Symmetric Hann taper over the whole trace.
Trace hann_taper(const Trace& trace);

double snr_db(const Trace& signal, const Trace& noise);

}  // namespace awva
