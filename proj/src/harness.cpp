#include "awva/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "awva/error.hpp"
#include "awva/spectral.hpp"

namespace awva {

void GateSpec::validate() const {
    if (!(theta_min < theta_max)) throw DomainError("gate requires theta_min < theta_max");
}

ClampSpec ClampSetting::resolve(double signal_peak) const {
    switch (mode) {
        case Mode::Off: return ClampSpec::disabled();
        case Mode::Ratio: return ClampSpec::ratio(value, signal_peak);
        case Mode::Absolute: return ClampSpec::absolute(value);
    }
    return ClampSpec::disabled();
}

SignalSet SignalSet::build(const TimeGrid& grid, const MeasurementConfig& cfg) {
    return SignalSet{measurement_signal(grid, cfg), measurement_signal(grid, without_delay(cfg)),
                     reference_signal(grid, cfg)};
}

MeasurementRecord run_single(const SignalSet& signals, const std::optional<NoiseSpec>& noise1,
                             const std::optional<NoiseSpec>& noise2, const ClampSpec& clamp_spec,
                             double readout_time) {
    const TimeGrid& grid = signals.delayed.grid();
    const std::size_t idx = grid.nearest_index(readout_time);
    const Trace* ref = &signals.delayed;

    MeasurementRecord rec;
    const Trace n1 = noise1 ? synthesize(grid, *noise1, ref) : Trace::zeros(grid);
    const Trace n2 = noise2 ? synthesize(grid, *noise2, ref) : Trace::zeros(grid);

    const Trace ch2 = clamp(signals.reference + n2, clamp_spec);
    rec.theta0 = theta_at_index(clamp(signals.undelayed + n1, clamp_spec), ch2, idx);
    rec.theta_tau = theta_at_index(clamp(signals.delayed + n1, clamp_spec), ch2, idx);
    if (noise1) {
        const Trace seen = clamp(n1, clamp_spec);
        if (seen.max_abs() > 0.0) rec.snr_db_actual = snr_db(signals.delayed, seen);
    }
    return rec;
}

MeasurementRecord run_single(const TimeGrid& grid, const MeasurementConfig& cfg, const std::optional<NoiseSpec>& noise1,
                             const std::optional<NoiseSpec>& noise2, const ClampSpec& clamp_spec,
                             double readout_time) {
    return run_single(SignalSet::build(grid, cfg), noise1, noise2, clamp_spec, readout_time);
}

Stats stats(const std::vector<double>& values) {
    if (values.empty()) throw DomainError("stats of an empty sample");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double dev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return Stats{mean, dev, values.size()};
}

SensitivityResult sensitivity(const Stats& stats0, const Stats& stats_tau, double tau, double k_ref,
                              double readout_time) {
    if (tau == 0.0) throw DomainError("sensitivity needs a non-zero delay");
    if (k_ref == 0.0) throw DomainError("sensitivity reference must be non-zero");
    SensitivityResult r;
    r.k = (stats0.mean - stats_tau.mean) / tau;
    r.e = (stats0.sample_dev + stats_tau.sample_dev) / tau;
    r.k_normalized = r.k / k_ref;
    r.e_normalized = r.e / k_ref;
    r.readout_time = readout_time;
    r.k_ref = k_ref;
    return r;
}

bool in_gate(const GateSpec& gate, double theta0, double theta_tau) {
    auto inside = [&](double v) { return v > gate.theta_min && v < gate.theta_max; };
    return inside(theta0) && inside(theta_tau);
}

std::vector<MeasurementRecord> gate_range(const std::vector<MeasurementRecord>& records, const GateSpec& gate) {
    gate.validate();
    std::vector<MeasurementRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out),
                 [&](const MeasurementRecord& r) { return in_gate(gate, r.theta0, r.theta_tau); });
    return out;
}

namespace {

std::pair<Stats, Stats> column_stats(const std::vector<MeasurementRecord>& records,
                                     const std::vector<std::size_t>& which) {
    std::vector<double> a, b;
    for (std::size_t i : which) {
        a.push_back(records[i].theta0);
        b.push_back(records[i].theta_tau);
    }
    return {stats(a), stats(b)};
}

}  // namespace

BatchResult run_batch(const Campaign& campaign, const std::vector<SeedPair>& seeds, unsigned threads) {
    if (seeds.empty()) throw DomainError("batch needs at least one seed pair");
    campaign.cfg.validate();
    if (campaign.gate) campaign.gate->validate();

    const SignalSet signals = SignalSet::build(campaign.grid, campaign.cfg);
    const ClampSpec clamp_spec = campaign.clamp.resolve(signals.delayed.max_abs());
    campaign.grid.nearest_index(campaign.readout_time);

    BatchResult result;
    result.records.resize(seeds.size());
    auto measure = [&](std::size_t i) {
        const auto n1 = campaign.recipe.for_channel(seeds[i].first, 0);
        const auto n2 = campaign.recipe.for_channel(seeds[i].second, 1);
        MeasurementRecord rec = run_single(signals, n1, n2, clamp_spec, campaign.readout_time);
        rec.seeds = seeds[i];
        result.records[i] = rec;
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, seeds.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i) measure(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < seeds.size(); i = next++) {
                    try {
                        measure(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    std::vector<std::size_t> all(seeds.size());
    std::iota(all.begin(), all.end(), 0);
    std::tie(result.stats0, result.stats_tau) = column_stats(result.records, all);
    result.sensitivity =
        sensitivity(result.stats0, result.stats_tau, campaign.cfg.tau, campaign.k_ref, campaign.readout_time);

    if (campaign.gate) {
        GatedSummary g;
        g.gate = *campaign.gate;
        for (std::size_t i = 0; i < result.records.size(); ++i)
            if (in_gate(g.gate, result.records[i].theta0, result.records[i].theta_tau)) g.kept.push_back(i);
        if (!g.kept.empty()) {
            auto [s0, st] = column_stats(result.records, g.kept);
            g.stats0 = s0;
            g.stats_tau = st;
            g.sensitivity = sensitivity(s0, st, campaign.cfg.tau, campaign.k_ref, campaign.readout_time);
        }
        result.gated = g;
    }
    return result;
}

Calibration calibrate_shift(double target_theta0, double target_theta_tau, const MeasurementConfig& cfg,
                            double readout_time) {
    if (!(target_theta0 > 0.0) || !(target_theta_tau > 0.0)) throw DomainError("calibration targets must be positive");
    if (target_theta_tau > target_theta0)
        throw DomainError("calibration needs target_theta0 >= target_theta_tau");

    MeasurementConfig base = cfg;
    base.shift_override = 0.0;
    const double theta_zero = theta_closed_form(base, readout_time);
    if (!(theta_zero > 0.0)) throw DomainError("closed form vanishes at the readout time");

    Calibration cal;
    cal.i0 = cfg.i0 * std::sqrt(target_theta0 / theta_zero);
    if (target_theta_tau == target_theta0) return cal;

    const double wanted = target_theta_tau / target_theta0;
    auto excess = [&](double shift) {
        MeasurementConfig c = base;
        c.shift_override = shift;
        return theta_closed_form(c, readout_time) / theta_zero - wanted;
    };

    double lo = 0.0;
    double hi = 10.0 * cfg.zeta;
    if (excess(hi) > 0.0) throw DomainError("no calibration shift in (0, 10 zeta) reaches the target ratio");
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    cal.shift = 0.5 * (lo + hi);
    return cal;
}

}  // namespace awva
