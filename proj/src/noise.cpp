#include "awva/noise.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "awva/error.hpp"

namespace awva {

const char* to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::White: return "N0";
        case NoiseKind::LowFreq: return "N1";
        case NoiseKind::MidFreq: return "N2";
        case NoiseKind::HighFreq: return "N3";
        case NoiseKind::Impulsive: return "N4";
        case NoiseKind::Mix: return "mix";
    }
    return "?";
}

std::vector<FilterSection> chain_for(NoiseKind kind) {
    using namespace filters;
    switch (kind) {
        case NoiseKind::LowFreq: return {g11, g11};
        case NoiseKind::MidFreq: return {g21, g21, g22, g23};
        case NoiseKind::HighFreq: return {g31, g31};
        default: throw DomainError(std::string("no filter chain for ") + to_string(kind));
    }
}

void ImpulsiveParams::validate() const {
    if (!(zeta4 > 0.0)) throw DomainError("impulsive zeta4 must be positive");
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(kappas[i] > 0.0)) throw DomainError("impulsive kappas must be positive");
        if (!std::isfinite(gammas[i]) || !std::isfinite(centers[i]))
            throw DomainError("impulsive parameters must be finite");
    }
}

Trace white_noise(const TimeGrid& grid, Seed seed, double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be non-negative");
    std::mt19937_64 engine(seed.value);
    constexpr double scale = 0x1.0p-53;
    std::vector<double> out(grid.size());
    for (std::size_t k = 0; k < out.size(); k += 2) {
        const double u1 = static_cast<double>((engine() >> 11) + 1) * scale;  // (0, 1]
        const double u2 = static_cast<double>(engine() >> 11) * scale;        // [0, 1)
        const double r = sigma * std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        out[k] = r * std::cos(phi);
        if (k + 1 < out.size()) out[k + 1] = r * std::sin(phi);
    }
    return Trace(grid, std::move(out));
}

DiscreteSection discretize_section(const FilterSection& sec, double dt) {
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    if (!(sec.a1 > 0.0)) throw DomainError("filter section pole must satisfy a1 > 0");
    const double k = 2.0 / dt;
    const double den = k + sec.a1;
    DiscreteSection d;
    d.c0 = (sec.b0 * k + sec.b1) / den;
    d.c1 = (sec.b1 - sec.b0 * k) / den;
    d.d1 = (sec.a1 - k) / den;
    if (!(std::abs(d.d1) < 1.0)) throw DomainError("discretized section is unstable (|d1| >= 1)");
    return d;
}

double discrete_magnitude(const DiscreteSection& d, double f_hz, double dt) {
    const std::complex<double> zinv = std::polar(1.0, -2.0 * std::numbers::pi * f_hz * dt);
    return std::abs((d.c0 + d.c1 * zinv) / (1.0 + d.d1 * zinv));
}

double analog_magnitude(const FilterSection& sec, double f_hz) {
    const std::complex<double> s(0.0, 2.0 * std::numbers::pi * f_hz);
    return std::abs((sec.b0 * s + sec.b1) / (s + sec.a1));
}

double dc_gain(const DiscreteSection& d) { return (d.c0 + d.c1) / (1.0 + d.d1); }

Trace apply_chain(const Trace& input, const std::vector<FilterSection>& chain) {
    if (chain.empty()) throw DomainError("filter chain is empty");
    const double dt = input.grid().dt();
    std::vector<double> buf(input.samples().begin(), input.samples().end());
    for (const FilterSection& sec : chain) {
        const DiscreteSection d = discretize_section(sec, dt);
        double x_prev = 0.0;
        double y_prev = 0.0;
        for (double& v : buf) {
            const double y = d.c0 * v + d.c1 * x_prev - d.d1 * y_prev;
            x_prev = v;
            y_prev = y;
            v = y;
        }
    }
    return Trace(input.grid(), std::move(buf));
}

Trace colored_noise(const TimeGrid& grid, Seed seed, double sigma, const std::vector<FilterSection>& chain) {
    if (chain.empty()) throw DomainError("filter chain is empty");
    return apply_chain(white_noise(grid, seed, sigma), chain);
}

Trace impulsive_noise(const TimeGrid& grid, const ImpulsiveParams& p) {
    p.validate();
    const double norm = std::pow(2.0 * std::numbers::pi * p.zeta4 * p.zeta4, -0.25);
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        if (p.gammas[i] == 0.0) continue;
        const double amp = p.gammas[i] * norm;
        const double denom = p.kappas[i] * p.zeta4 * p.zeta4;
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double u = grid.time(k) - p.centers[i];
            out[k] += amp * std::exp(-u * u / denom);
        }
    }
    return Trace(grid, std::move(out));
}

namespace {

Trace synthesize_raw(const TimeGrid& grid, const NoiseSpec& spec, const Trace* reference) {
    switch (spec.kind) {
        case NoiseKind::White: return white_noise(grid, spec.seed, spec.sigma);
        case NoiseKind::LowFreq:
        case NoiseKind::MidFreq:
        case NoiseKind::HighFreq: return colored_noise(grid, spec.seed, spec.sigma, chain_for(spec.kind));
        case NoiseKind::Impulsive: return impulsive_noise(grid, spec.impulsive);
        case NoiseKind::Mix: {
            if (spec.mix_terms.size() < 2) throw DomainError("mix needs at least two terms");
            std::vector<double> acc(grid.size(), 0.0);
            for (const MixTerm& term : spec.mix_terms) {
                if (!std::isfinite(term.weight)) throw DomainError("mix weights must be finite");
                const Trace member = synthesize(grid, term.spec, reference);
                const auto s = member.samples();
                for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += term.weight * s[k];
            }
            return Trace(grid, std::move(acc));
        }
    }
    throw DomainError("unknown noise kind");
}

}  // namespace

Trace synthesize(const TimeGrid& grid, const NoiseSpec& spec, const Trace* reference) {
    Trace raw = synthesize_raw(grid, spec, reference);
    if (!spec.snr_target_db) return raw;
    if (reference == nullptr) throw DomainError("snr target requires a reference signal");
    if (!(reference->grid() == grid)) throw DomainError("reference lives on a different grid");
    const double ref_peak = reference->max_abs();
    const double noise_peak = raw.max_abs();
    if (ref_peak == 0.0) throw DomainError("snr target against an all-zero reference");
    if (noise_peak == 0.0) throw DomainError("snr target applied to all-zero noise");
    const double wanted_peak = ref_peak * std::pow(10.0, -*spec.snr_target_db / 20.0);
    return raw.scaled(wanted_peak / noise_peak);
}

namespace {

NoiseKind kind_from_digit(char c) {
    switch (c) {
        case '0': return NoiseKind::White;
        case '1': return NoiseKind::LowFreq;
        case '2': return NoiseKind::MidFreq;
        case '3': return NoiseKind::HighFreq;
        case '4': return NoiseKind::Impulsive;
        default: throw DomainError(std::string("unknown noise family N") + c);
    }
}

bool seeded(NoiseKind kind) { return kind != NoiseKind::Impulsive; }

}  // namespace

NoiseRecipe NoiseRecipe::parse(const std::string& text) {
    NoiseRecipe recipe;
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t') s += c;
    if (s.empty() || s == "none") return recipe;

    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t plus = s.find('+', pos);
        const std::string tok = s.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
        const std::size_t n = tok.find('N');
        if (n == std::string::npos || n + 2 != tok.size())
            throw DomainError("malformed noise term '" + tok + "' in '" + text + "'");
        Term term;
        if (n > 0) {
            const char* first = tok.data();
            const char* last = tok.data() + n;
            auto [ptr, ec] = std::from_chars(first, last, term.weight);
            if (ec != std::errc() || ptr != last || !std::isfinite(term.weight))
                throw DomainError("malformed weight in noise term '" + tok + "'");
        }
        term.kind = kind_from_digit(tok[n + 1]);
        recipe.terms.push_back(term);
        if (plus == std::string::npos) break;
        pos = plus + 1;
    }
    if (recipe.terms.size() == 1 && recipe.terms.front().weight != 1.0)
        throw DomainError("a single-term noise recipe cannot carry a weight");
    return recipe;
}

std::string NoiseRecipe::name() const {
    if (terms.empty()) return "none";
    std::string out;
    for (const Term& t : terms) {
        if (!out.empty()) out += '+';
        if (t.weight != 1.0) {
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof buf, t.weight);
            out.append(buf, res.ptr);
        }
        out += to_string(t.kind);
    }
    return out;
}

std::optional<NoiseSpec> NoiseRecipe::for_channel(Seed seed, int channel) const {
    if (channel != 0 && channel != 1) throw DomainError("channel must be 0 or 1");
    if (terms.empty()) return std::nullopt;

    bool primary_used = false;
    auto member = [&](const Term& t) {
        NoiseSpec spec;
        spec.kind = t.kind;
        spec.sigma = sigma;
        spec.impulsive = impulsive;
        if (seeded(t.kind)) {
            spec.seed = primary_used ? aux_seeds[channel] : seed;
            primary_used = true;
            spec.snr_target_db = stationary_snr_db;
        } else {
            spec.snr_target_db = impulsive_snr_db;
        }
        return spec;
    };

    if (terms.size() == 1) {
        if (terms.front().weight != 1.0) throw DomainError("a single-term noise recipe cannot carry a weight");
        return member(terms.front());
    }

    NoiseSpec mix;
    mix.kind = NoiseKind::Mix;
    for (const Term& t : terms) mix.mix_terms.push_back(MixTerm{member(t), t.weight});
    return mix;
}

}  // namespace awva
