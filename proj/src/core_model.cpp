#include "awva/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "awva/error.hpp"

namespace awva {

TimeGrid::TimeGrid(double dt, std::size_t n, double origin) : dt_(dt), n_(n), origin_(origin) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time grid: dt must be positive and finite");
    if (n < 2) throw DomainError("time grid: need at least two samples");
    if (!std::isfinite(origin)) throw DomainError("time grid: origin must be finite");
}

bool TimeGrid::contains(double t) const noexcept {
    const double half = 0.5 * dt_;
    return t >= origin_ - half && t <= origin_ + duration() + half;
}

std::size_t TimeGrid::nearest_index(double t) const {
    if (!contains(t)) throw DomainError("time " + std::to_string(t) + " s lies outside the grid");
    const double k = std::round((t - origin_) / dt_);
    return std::min(static_cast<std::size_t>(std::max(k, 0.0)), n_ - 1);
}

Trace::Trace(TimeGrid grid, std::vector<double> samples) : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) throw DomainError("trace length does not match its grid");
    if (!std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); }))
        throw DomainError("trace contains non-finite samples");
}

Trace Trace::zeros(const TimeGrid& grid) { return Trace(grid, std::vector<double>(grid.size(), 0.0)); }

double Trace::max_abs() const noexcept {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
}

Trace Trace::scaled(double factor) const {
    std::vector<double> out(samples_);
    for (double& v : out) v *= factor;
    return Trace(grid_, std::move(out));
}

Trace Trace::operator+(const Trace& other) const {
    if (!(grid_ == other.grid_)) throw DomainError("cannot add traces on different grids");
    std::vector<double> out(samples_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += other.samples_[k];
    return Trace(grid_, std::move(out));
}

void MeasurementConfig::validate() const {
    if (!std::isfinite(i0)) throw DomainError("i0 must be finite");
    if (!(zeta > 0.0) || !std::isfinite(zeta)) throw DomainError("zeta must be positive");
    if (!std::isfinite(t0)) throw DomainError("t0 must be finite");
    if (!(alpha > 0.0 && alpha < std::numbers::pi / 2)) throw DomainError("alpha must lie in (0, pi/2)");
    if (!std::isfinite(tau) || !(std::abs(tau) < zeta / 10.0))
        throw DomainError("tau outside the weak-measurement regime |tau| < zeta/10");
    if (shift_override && !std::isfinite(*shift_override)) throw DomainError("shift_override must be finite");
}

double weak_value(double alpha) {
    if (!(alpha > 0.0 && alpha < std::numbers::pi / 2)) throw DomainError("alpha must lie in (0, pi/2)");
    return -1.0 / std::tan(alpha);
}

double pointer_shift(const MeasurementConfig& cfg) {
    cfg.validate();
    if (cfg.shift_override) return *cfg.shift_override;
    return cfg.tau / std::tan(cfg.alpha);
}

MeasurementConfig without_delay(const MeasurementConfig& cfg) {
    MeasurementConfig out = cfg;
    out.tau = 0.0;
    out.shift_override.reset();
    return out;
}

namespace {

Trace gaussian_pulse(const TimeGrid& grid, double amplitude, double center, double zeta) {
    const double norm = amplitude * std::pow(2.0 * std::numbers::pi * zeta * zeta, -0.25);
    const double denom = 4.0 * zeta * zeta;
    std::vector<double> out(grid.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double u = grid.time(k) - center;
        out[k] = norm * std::exp(-u * u / denom);
    }
    return Trace(grid, std::move(out));
}

double post_selection(double alpha) {
    const double s = std::sin(alpha);
    return 0.5 * s * s;
}

}  // namespace

Trace initial_pointer(const TimeGrid& grid, const MeasurementConfig& cfg) {
    cfg.validate();
    return gaussian_pulse(grid, cfg.i0, cfg.t0, cfg.zeta);
}

Trace measurement_signal(const TimeGrid& grid, const MeasurementConfig& cfg) {
    const double shift = pointer_shift(cfg);
    return gaussian_pulse(grid, cfg.i0 * post_selection(cfg.alpha), cfg.t0 + shift, cfg.zeta);
}

Trace reference_signal(const TimeGrid& grid, const MeasurementConfig& cfg) {
    cfg.validate();
    return gaussian_pulse(grid, cfg.i0 * post_selection(cfg.alpha), cfg.t0, cfg.zeta);
}

}  // namespace awva
