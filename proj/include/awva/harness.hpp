#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "awva/core_model.hpp"
#include "awva/correlator.hpp"
#include "awva/noise.hpp"

namespace awva {

using SeedPair = std::pair<Seed, Seed>;

struct MeasurementRecord {
    SeedPair seeds;
    double theta0 = 0.0;
    double theta_tau = 0.0;
    // Channel-1 SNR after clamping; empty when the channel carries no noise.
    std::optional<double> snr_db_actual;
};

struct Stats {
    double mean = 0.0;
    double sample_dev = 0.0;
    std::size_t count = 0;
};

struct SensitivityResult {
    double k = 0.0;
    double e = 0.0;
    double k_normalized = 0.0;
    double e_normalized = 0.0;
    double readout_time = 0.0;
    double k_ref = 0.0;
};

struct GateSpec {
    double theta_min = 0.0;
    double theta_max = 0.0;
    void validate() const;
    bool operator==(const GateSpec&) const = default;
};

inline constexpr double default_k_ref = 0.0258;
inline constexpr double default_readout_time = 1.5e-3;

// How the clip level is chosen for a campaign.
struct ClampSetting {
    enum class Mode { Off, Ratio, Absolute };
    Mode mode = Mode::Off;
    double value = 0.0;  // ratio to the measurement-signal peak, or absolute level

    ClampSpec resolve(double signal_peak) const;
    bool operator==(const ClampSetting&) const = default;
};

struct Campaign {
    TimeGrid grid = TimeGrid::standard();
    MeasurementConfig cfg;
    NoiseRecipe recipe;
    ClampSetting clamp;
    double readout_time = default_readout_time;
    double k_ref = default_k_ref;
    std::optional<GateSpec> gate;

    bool operator==(const Campaign&) const = default;
};

struct GatedSummary {
    GateSpec gate;
    std::vector<std::size_t> kept;  // indices into BatchResult::records
    std::optional<Stats> stats0;
    std::optional<Stats> stats_tau;
    std::optional<SensitivityResult> sensitivity;
};

struct BatchResult {
    std::vector<MeasurementRecord> records;
    Stats stats0;
    Stats stats_tau;
    SensitivityResult sensitivity;
    std::optional<GatedSummary> gated;
};

// Signals shared by every measurement of a campaign.
struct SignalSet {
    Trace delayed;    // I1_out at tau
    Trace undelayed;  // I1_out at tau = 0
    Trace reference;  // I2_out

    static SignalSet build(const TimeGrid& grid, const MeasurementConfig& cfg);
};

MeasurementRecord run_single(const TimeGrid& grid, const MeasurementConfig& cfg, const std::optional<NoiseSpec>& noise1,
                             const std::optional<NoiseSpec>& noise2, const ClampSpec& clamp, double readout_time);
MeasurementRecord run_single(const SignalSet& signals, const std::optional<NoiseSpec>& noise1,
                             const std::optional<NoiseSpec>& noise2, const ClampSpec& clamp, double readout_time);

// threads = 0 picks the hardware concurrency. Output does not depend on the thread count.
BatchResult run_batch(const Campaign& campaign, const std::vector<SeedPair>& seeds, unsigned threads = 1);

Stats stats(const std::vector<double>& values);
SensitivityResult sensitivity(const Stats& stats0, const Stats& stats_tau, double tau, double k_ref,
                              double readout_time = default_readout_time);
std::vector<MeasurementRecord> gate_range(const std::vector<MeasurementRecord>& records, const GateSpec& gate);
bool in_gate(const GateSpec& gate, double theta0, double theta_tau);

struct Calibration {
    double shift = 0.0;  // seconds
    double i0 = 0.0;     // amplitude reproducing target_theta0 at zero shift
};

Calibration calibrate_shift(double target_theta0, double target_theta_tau, const MeasurementConfig& cfg,
                            double readout_time = default_readout_time);

}  // namespace awva
