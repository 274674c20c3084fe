#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace awva {

// Uniform sampling lattice. Sample k sits at origin + k*dt.
class TimeGrid {
public:
    TimeGrid(double dt, std::size_t n, double origin = 0.0);

    // 100 MHz over 3 ms.
    static TimeGrid standard() { return TimeGrid(1.0e-8, 300001, 0.0); }

    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return n_; }
    double origin() const noexcept { return origin_; }
    double duration() const noexcept { return dt_ * static_cast<double>(n_ - 1); }
    double time(std::size_t k) const noexcept { return origin_ + static_cast<double>(k) * dt_; }
    bool contains(double t) const noexcept;
    // Index of the sample nearest to t. Throws DomainError if t is off the grid.
    std::size_t nearest_index(double t) const;

    bool operator==(const TimeGrid&) const = default;

private:
    double dt_;
    std::size_t n_;
    double origin_;
};

// Immutable sampled signal.
class Trace {
public:
    Trace(TimeGrid grid, std::vector<double> samples);
    static Trace zeros(const TimeGrid& grid);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::span<const double> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double operator[](std::size_t k) const noexcept { return samples_[k]; }
    double max_abs() const noexcept;

    Trace scaled(double factor) const;
    Trace operator+(const Trace& other) const;

private:
    TimeGrid grid_;
    std::vector<double> samples_;
};

struct MeasurementConfig {
    double i0 = 1.0;
    double zeta = 2.0e-4;
    double t0 = 1.5e-3;
    double alpha = 0.01;
    double tau = 3.0e-9;
    std::optional<double> shift_override;

    // Throws DomainError unless zeta > 0, 0 < alpha < pi/2 and |tau| < zeta/10.
    void validate() const;
    bool operator==(const MeasurementConfig&) const = default;
};

double weak_value(double alpha);
double pointer_shift(const MeasurementConfig& cfg);

Trace initial_pointer(const TimeGrid& grid, const MeasurementConfig& cfg);
Trace measurement_signal(const TimeGrid& grid, const MeasurementConfig& cfg);
Trace reference_signal(const TimeGrid& grid, const MeasurementConfig& cfg);

// Same measurement with the delay removed: tau = 0 and no override.
MeasurementConfig without_delay(const MeasurementConfig& cfg);

}  // namespace awva
