#include "awva/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

#include "awva/error.hpp"

namespace awva {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

class RealFft {
public:
    explicit RealFft(std::size_t n)
        : n_(n),
          in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
          out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
        if (!in_ || !out_) throw std::bad_alloc();
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(), FFTW_ESTIMATE);
        if (!plan_) throw Error("FFTW could not create a plan");
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;
    ~RealFft() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }

    double* input() noexcept { return in_.get(); }

    std::vector<double> magnitudes() {
        fftw_execute(plan_);
        std::vector<double> mags(n_ / 2 + 1);
        for (std::size_t k = 0; k < mags.size(); ++k) mags[k] = std::hypot(out_.get()[k][0], out_.get()[k][1]);
        return mags;
    }

private:
    std::size_t n_;
    std::unique_ptr<double, FftwFree> in_;
    std::unique_ptr<fftw_complex, FftwFree> out_;
    fftw_plan plan_ = nullptr;
};

std::vector<double> hann(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k)
        w[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1));
    return w;
}

}  // namespace

double Spectrogram::column_energy(std::size_t c) const {
    double e = 0.0;
    for (double m : columns.at(c).magnitudes) e += m * m;
    return e;
}

std::size_t Spectrogram::column_at(double t) const {
    if (column_times.empty()) throw DomainError("spectrogram has no columns");
    std::size_t best = 0;
    for (std::size_t c = 1; c < column_times.size(); ++c)
        if (std::abs(column_times[c] - t) < std::abs(column_times[best] - t)) best = c;
    return best;
}

Spectrum fft_magnitude(const Trace& trace) {
    const std::size_t n = trace.size();
    RealFft fft(n);
    std::copy(trace.samples().begin(), trace.samples().end(), fft.input());
    return Spectrum{1.0 / (static_cast<double>(n) * trace.grid().dt()), fft.magnitudes()};
}

Spectrogram spectrogram(const Trace& trace, std::size_t window_len, std::size_t hop) {
    const std::size_t n = trace.size();
    if (window_len < 2) throw DomainError("spectrogram window must span at least two samples");
    if (window_len > n) throw DomainError("spectrogram window longer than the trace");
    if (hop < 1) throw DomainError("spectrogram hop must be at least one sample");

    const TimeGrid& grid = trace.grid();
    const std::vector<double> w = hann(window_len);
    const std::size_t count = (n - window_len) / hop + 1;
    const double df = 1.0 / (static_cast<double>(window_len) * grid.dt());
    const double centre = 0.5 * static_cast<double>(window_len - 1) * grid.dt();

    Spectrogram out;
    out.window_len = window_len;
    out.hop = hop;
    out.column_times.reserve(count);
    out.columns.reserve(count);
    RealFft fft(window_len);
    const auto x = trace.samples();
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t start = c * hop;
        double* in = fft.input();
        for (std::size_t k = 0; k < window_len; ++k) in[k] = w[k] * x[start + k];
        out.column_times.push_back(grid.time(start) + centre);
        out.columns.push_back(Spectrum{df, fft.magnitudes()});
    }
    return out;
}

Trace hann_taper(const Trace& trace) {
    const std::vector<double> w = hann(trace.size());
    std::vector<double> out(trace.samples().begin(), trace.samples().end());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= w[k];
    return Trace(trace.grid(), std::move(out));
}

double snr_db(const Trace& signal, const Trace& noise) {
    if (!(signal.grid() == noise.grid())) throw DomainError("snr: signal and noise live on different grids");
    const double s = signal.max_abs();
    const double m = noise.max_abs();
    if (s == 0.0) throw DomainError("snr: signal is identically zero");
    if (m == 0.0) throw DomainError("snr: noise is identically zero");
    return 20.0 * std::log10(s / m);
}

}  // namespace awva
