#pragma once

#include <cmath>
#include <vector>

#include "awva/core_model.hpp"

namespace awva {

// 10^(9.1/20): clip level relative to the peak of the measurement signal.
inline const double default_clamp_ratio = std::pow(10.0, 9.1 / 20.0);

struct ClampSpec {
    double threshold = 0.0;
    bool enabled = false;

    static ClampSpec disabled() { return {}; }
    static ClampSpec absolute(double threshold);
    static ClampSpec ratio(double ratio, double signal_peak);
    void validate() const;
};

struct ThetaCurve {
    TimeGrid grid;
    std::vector<double> values;

    double at(double t) const;
};

struct ThetaDecomposition {
    ThetaCurve ii;
    ThetaCurve in_;
    ThetaCurve ni;
    ThetaCurve nn;
};

// min(sample, threshold) per sample when enabled.
Trace clamp(const Trace& trace, const ClampSpec& spec);

// Cumulative trapezoid of ch1*ch2.
ThetaCurve theta(const Trace& ch1, const Trace& ch2);
// The same integral evaluated only up to sample index `upto`.
double theta_at_index(const Trace& ch1, const Trace& ch2, std::size_t upto);

double standard_normal_cdf(double x);
double theta_closed_form(const MeasurementConfig& cfg, double t);

ThetaDecomposition theta_decomposition(const Trace& sig1, const Trace& sig2, const Trace& noise1,
                                       const Trace& noise2);

}  // namespace awva
