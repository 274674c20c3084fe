#include "awva/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "awva/error.hpp"

namespace awva {

ClampSpec ClampSpec::absolute(double threshold) {
    ClampSpec s{threshold, true};
    s.validate();
    return s;
}

ClampSpec ClampSpec::ratio(double ratio, double signal_peak) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw DomainError("clamp ratio must be positive");
    return absolute(ratio * signal_peak);
}

void ClampSpec::validate() const {
    if (enabled && (!(threshold > 0.0) || !std::isfinite(threshold)))
        throw DomainError("clamp threshold must be positive");
}

double ThetaCurve::at(double t) const { return values.at(grid.nearest_index(t)); }

Trace clamp(const Trace& trace, const ClampSpec& spec) {
    spec.validate();
    if (!spec.enabled) return trace;
    std::vector<double> out(trace.samples().begin(), trace.samples().end());
    for (double& v : out) v = std::min(v, spec.threshold);
    return Trace(trace.grid(), std::move(out));
}

namespace {

void require_same_grid(const Trace& a, const Trace& b) {
    if (!(a.grid() == b.grid())) throw DomainError("theta: channels live on different grids");
}

}  // namespace

ThetaCurve theta(const Trace& ch1, const Trace& ch2) {
    require_same_grid(ch1, ch2);
    const auto x = ch1.samples();
    const auto y = ch2.samples();
    const double half_dt = 0.5 * ch1.grid().dt();
    std::vector<double> v(x.size());
    v[0] = 0.0;
    double prev = x[0] * y[0];
    for (std::size_t k = 1; k < v.size(); ++k) {
        const double cur = x[k] * y[k];
        v[k] = v[k - 1] + half_dt * (prev + cur);
        prev = cur;
    }
    return ThetaCurve{ch1.grid(), std::move(v)};
}

double theta_at_index(const Trace& ch1, const Trace& ch2, std::size_t upto) {
    require_same_grid(ch1, ch2);
    if (upto >= ch1.size()) throw DomainError("theta: readout index beyond the grid");
    const auto x = ch1.samples();
    const auto y = ch2.samples();
    const double half_dt = 0.5 * ch1.grid().dt();
    double acc = 0.0;
    double prev = x[0] * y[0];
    for (std::size_t k = 1; k <= upto; ++k) {
        const double cur = x[k] * y[k];
        acc += half_dt * (prev + cur);
        prev = cur;
    }
    return acc;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double theta_closed_form(const MeasurementConfig& cfg, double t) {
    const double shift = pointer_shift(cfg);
    const double s = std::sin(cfg.alpha);
    const double a = cfg.i0 * s * s * std::pow(2.0 * std::numbers::pi * cfg.zeta * cfg.zeta, -0.25) / 2.0;
    const double tbar = cfg.t0 + shift / 2.0;
    const double mass = a * a * std::exp(-shift * shift / (8.0 * cfg.zeta * cfg.zeta)) * cfg.zeta *
                        std::sqrt(2.0 * std::numbers::pi);
    return mass * (standard_normal_cdf((t - tbar) / cfg.zeta) - standard_normal_cdf(-tbar / cfg.zeta));
}

ThetaDecomposition theta_decomposition(const Trace& sig1, const Trace& sig2, const Trace& noise1,
                                       const Trace& noise2) {
    require_same_grid(sig1, sig2);
    require_same_grid(sig1, noise1);
    require_same_grid(sig1, noise2);
    return ThetaDecomposition{theta(sig1, sig2), theta(sig1, noise2), theta(noise1, sig2), theta(noise1, noise2)};
}

}  // namespace awva
