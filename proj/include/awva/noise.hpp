#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "awva/core_model.hpp"

namespace awva {

struct Seed {
    std::uint64_t value = 0;
    bool operator==(const Seed&) const = default;
};

// H(s) = (b0*s + b1) / (s + a1)
struct FilterSection {
    double b0 = 0.0;
    double b1 = 0.0;
    double a1 = 1.0;
};

// y[k] = c0*x[k] + c1*x[k-1] - d1*y[k-1]
struct DiscreteSection {
    double c0 = 0.0;
    double c1 = 0.0;
    double d1 = 0.0;
};

namespace filters {
inline constexpr FilterSection g11{0.0, 1000.0, 100.0};
inline constexpr FilterSection g21{1.0, 0.0, 40000.0};
inline constexpr FilterSection g22{0.0, 10000.0, 10000.0};
inline constexpr FilterSection g23{0.0, 83000.0, 10000.0};
inline constexpr FilterSection g31{1.0, 0.0, 8000.0};
}  // namespace filters

enum class NoiseKind { White, LowFreq, MidFreq, HighFreq, Impulsive, Mix };

const char* to_string(NoiseKind kind);
// Section chain for LowFreq (G11^2), MidFreq (G21^2 G22 G23) and HighFreq (G31^2).
std::vector<FilterSection> chain_for(NoiseKind kind);

struct ImpulsiveParams {
    double zeta4 = 2.0e-4;
    std::array<double, 3> gammas{15.0, 5.0, 9.0};
    std::array<double, 3> centers{0.00255, 0.0018, -0.00015};
    std::array<double, 3> kappas{0.0016, 0.0016, 0.0012};

    void validate() const;
    bool operator==(const ImpulsiveParams&) const = default;
};

struct MixTerm;

struct NoiseSpec {
    NoiseKind kind = NoiseKind::White;
    Seed seed;
    double sigma = 1.0;
    ImpulsiveParams impulsive;
    std::vector<MixTerm> mix_terms;
    std::optional<double> snr_target_db;
};

struct MixTerm {
    NoiseSpec spec;
    double weight = 1.0;
};

// Gaussian samples from mt19937_64 seeded with seed.value. Uniform doubles take the top 53 bits
// of each draw; pairs of uniforms become pairs of normals by the Box-Muller transform.
Trace white_noise(const TimeGrid& grid, Seed seed, double sigma);

// Bilinear transform of one section.
DiscreteSection discretize_section(const FilterSection& sec, double dt);
// Frequency response of the discrete recurrence at f Hz.
double discrete_magnitude(const DiscreteSection& d, double f_hz, double dt);
// |H(j 2 pi f)| of the continuous section.
double analog_magnitude(const FilterSection& sec, double f_hz);
// Discrete gain at z = 1.
double dc_gain(const DiscreteSection& d);

Trace apply_chain(const Trace& input, const std::vector<FilterSection>& chain);
Trace colored_noise(const TimeGrid& grid, Seed seed, double sigma, const std::vector<FilterSection>& chain);
Trace impulsive_noise(const TimeGrid& grid, const ImpulsiveParams& p);

// reference is needed only when spec (or a mix member) has snr_target_db.
Trace synthesize(const TimeGrid& grid, const NoiseSpec& spec, const Trace* reference);

// Noise composition used by campaigns, e.g. "N1+3N0", "N4+0.1N0", "N2" or "none".
// Each term is synthesized and SNR-scaled on its own, then the weighted terms are summed.
// The first seeded term follows the per-measurement seed; later seeded terms use the
// fixed per-channel auxiliary seeds.
struct NoiseRecipe {
    struct Term {
        double weight = 1.0;
        NoiseKind kind = NoiseKind::White;
        bool operator==(const Term&) const = default;
    };

    std::vector<Term> terms;
    double sigma = 1.0;
    std::optional<double> stationary_snr_db = -5.1;
    std::optional<double> impulsive_snr_db = -23.5;
    ImpulsiveParams impulsive;
    std::array<Seed, 2> aux_seeds{Seed{223}, Seed{751}};

    static NoiseRecipe parse(const std::string& text);
    std::string name() const;
    bool empty() const noexcept { return terms.empty(); }

    // channel is 0 or 1. Returns nullopt for the empty recipe.
    std::optional<NoiseSpec> for_channel(Seed seed, int channel) const;

    bool operator==(const NoiseRecipe&) const = default;
};

}  // namespace awva
