#include "awva/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <map>
#include <numbers>
#include <sstream>

#include "awva/error.hpp"

namespace awva {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

double parse_double(const std::string& text, int line, const std::string& key) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty() || !std::isfinite(v))
        throw ParseError(line, key + ": expected a number, got '" + text + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& text, int line, const std::string& key) {
    std::uint64_t v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty())
        throw ParseError(line, key + ": expected a non-negative integer, got '" + text + "'");
    return v;
}

std::array<double, 3> parse_triple(const std::string& text, int line, const std::string& key) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw ParseError(line, key + ": expected three comma-separated numbers");
    return {parse_double(parts[0], line, key), parse_double(parts[1], line, key), parse_double(parts[2], line, key)};
}

std::optional<double> parse_optional_db(const std::string& text, int line, const std::string& key) {
    if (text == "none") return std::nullopt;
    return parse_double(text, line, key);
}

std::string triple_text(const std::array<double, 3>& t) {
    return format_number(t[0]) + ", " + format_number(t[1]) + ", " + format_number(t[2]);
}

struct Builder {
    RunConfig cfg;
    std::map<std::string, int> lines;
    std::optional<double> duration;
    std::optional<std::uint64_t> samples;
    double dt = 1.0e-8;
    double origin = 0.0;
    std::string clamp_mode = "off";
    double clamp_ratio = default_clamp_ratio;
    std::optional<double> clamp_threshold;
    std::optional<double> gate_min;
    std::optional<double> gate_max;

    // Line of the first key present, 0 when every key took its default.
    int line_of(std::initializer_list<const char*> keys) const {
        for (const char* key : keys)
            if (auto it = lines.find(key); it != lines.end()) return it->second;
        return 0;
    }
};

using Setter = std::function<void(Builder&, const std::string&, int, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"dt", [](Builder& b, const std::string& v, int l, const std::string& k) { b.dt = parse_double(v, l, k); }},
        {"duration", [](Builder& b, const std::string& v, int l, const std::string& k) { b.duration = parse_double(v, l, k); }},
        {"samples", [](Builder& b, const std::string& v, int l, const std::string& k) { b.samples = parse_uint(v, l, k); }},
        {"origin", [](Builder& b, const std::string& v, int l, const std::string& k) { b.origin = parse_double(v, l, k); }},
        {"i0", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.cfg.i0 = parse_double(v, l, k); }},
        {"zeta", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.cfg.zeta = parse_double(v, l, k); }},
        {"t0", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.cfg.t0 = parse_double(v, l, k); }},
        {"alpha", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.cfg.alpha = parse_double(v, l, k); }},
        {"tau", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.cfg.tau = parse_double(v, l, k); }},
        {"shift_override",
         [](Builder& b, const std::string& v, int l, const std::string& k) {
             if (v == "none") b.cfg.campaign.cfg.shift_override.reset();
             else b.cfg.campaign.cfg.shift_override = parse_double(v, l, k);
         }},
        {"noise",
         [](Builder& b, const std::string& v, int l, const std::string&) {
             try {
                 NoiseRecipe parsed = NoiseRecipe::parse(v);
                 b.cfg.campaign.recipe.terms = parsed.terms;
             } catch (const DomainError& e) {
                 throw ParseError(l, e.what());
             }
         }},
        {"sigma", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.recipe.sigma = parse_double(v, l, k); }},
        {"noise_snr_db", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.recipe.stationary_snr_db = parse_optional_db(v, l, k); }},
        {"impulsive_snr_db", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.recipe.impulsive_snr_db = parse_optional_db(v, l, k); }},
        {"aux_seed_ch1", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.recipe.aux_seeds[0] = Seed{parse_uint(v, l, k)}; }},
        {"aux_seed_ch2", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.recipe.aux_seeds[1] = Seed{parse_uint(v, l, k)}; }},
        {"impulsive_zeta4", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.recipe.impulsive.zeta4 = parse_double(v, l, k); }},
        {"impulsive_gammas", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.recipe.impulsive.gammas = parse_triple(v, l, k); }},
        {"impulsive_centers", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.recipe.impulsive.centers = parse_triple(v, l, k); }},
        {"impulsive_kappas", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.recipe.impulsive.kappas = parse_triple(v, l, k); }},
        {"clamp",
         [](Builder& b, const std::string& v, int l, const std::string&) {
             if (v != "off" && v != "ratio" && v != "absolute")
                 throw ParseError(l, "clamp: expected off, ratio or absolute, got '" + v + "'");
             b.clamp_mode = v;
         }},
        {"clamp_ratio", [](Builder& b, const std::string& v, int l, const std::string& k) { b.clamp_ratio = parse_double(v, l, k); }},
        {"clamp_threshold", [](Builder& b, const std::string& v, int l, const std::string& k) { b.clamp_threshold = parse_double(v, l, k); }},
        {"seeds",
         [](Builder& b, const std::string& v, int l, const std::string& k) {
             b.cfg.seeds.clear();
             for (const std::string& pair : split(v, ',')) {
                 const auto parts = split(pair, ':');
                 if (parts.size() != 2) throw ParseError(l, k + ": expected xi1:xi2 pairs, got '" + pair + "'");
                 b.cfg.seeds.emplace_back(Seed{parse_uint(parts[0], l, k)}, Seed{parse_uint(parts[1], l, k)});
             }
         }},
        {"readout_time", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.readout_time = parse_double(v, l, k); }},
        {"k_ref", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.campaign.k_ref = parse_double(v, l, k); }},
        {"gate_min", [](Builder& b, const std::string& v, int l, const std::string& k) { b.gate_min = parse_double(v, l, k); }},
        {"gate_max", [](Builder& b, const std::string& v, int l, const std::string& k) { b.gate_max = parse_double(v, l, k); }},
        {"threads", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.threads = static_cast<unsigned>(parse_uint(v, l, k)); }},
        {"stft_window", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.stft_window = parse_uint(v, l, k); }},
        {"stft_hop", [](Builder& b, const std::string& v, int l, const std::string& k) { b.cfg.stft_hop = parse_uint(v, l, k); }},
        {"trace_csv", [](Builder& b, const std::string& v, int, const std::string&) { b.cfg.outputs.trace_csv = v; }},
        {"theta_csv", [](Builder& b, const std::string& v, int, const std::string&) { b.cfg.outputs.theta_csv = v; }},
        {"theta0_csv", [](Builder& b, const std::string& v, int, const std::string&) { b.cfg.outputs.theta0_csv = v; }},
        {"batch_json", [](Builder& b, const std::string& v, int, const std::string&) { b.cfg.outputs.batch_json = v; }},
        {"spectra_prefix", [](Builder& b, const std::string& v, int, const std::string&) { b.cfg.outputs.spectra_prefix = v; }},
    };
    return table;
}

void finish(Builder& b) {
    RunConfig& cfg = b.cfg;

    if (b.duration && b.samples) throw ParseError(b.line_of({"samples"}), "give either duration or samples, not both");
    if (!(b.dt > 0.0)) throw ParseError(b.line_of({"dt"}), "dt must be positive");
    std::uint64_t n = 300001;
    if (b.samples) {
        n = *b.samples;
    } else if (b.duration) {
        const double steps = *b.duration / b.dt;
        if (!(steps >= 1.0) || std::abs(steps - std::round(steps)) > 1e-6)
            throw ParseError(b.line_of({"duration"}), "duration must be a positive whole number of dt steps");
        n = static_cast<std::uint64_t>(std::llround(steps)) + 1;
    }
    if (n < 2) throw ParseError(b.line_of({"samples", "duration"}), "grid needs at least two samples");
    cfg.campaign.grid = TimeGrid(b.dt, static_cast<std::size_t>(n), b.origin);

    MeasurementConfig& m = cfg.campaign.cfg;
    if (!(m.zeta > 0.0)) throw ParseError(b.line_of({"zeta"}), "zeta must be positive");
    if (!(m.alpha > 0.0 && m.alpha < std::numbers::pi / 2))
        throw ParseError(b.line_of({"alpha"}), "alpha must lie in (0, pi/2)");
    if (!(std::abs(m.tau) < m.zeta / 10.0))
        throw ParseError(b.line_of({"tau", "zeta"}), "tau violates the weak-measurement regime |tau| < zeta/10");

    NoiseRecipe& r = cfg.campaign.recipe;
    if (!(r.sigma >= 0.0)) throw ParseError(b.line_of({"sigma"}), "sigma must be non-negative");
    try {
        r.impulsive.validate();
    } catch (const DomainError& e) {
        throw ParseError(b.line_of({"impulsive_kappas", "impulsive_zeta4"}), e.what());
    }

    if (b.clamp_mode == "ratio") {
        if (!(b.clamp_ratio > 0.0)) throw ParseError(b.line_of({"clamp_ratio"}), "clamp_ratio must be positive");
        cfg.campaign.clamp = ClampSetting{ClampSetting::Mode::Ratio, b.clamp_ratio};
    } else if (b.clamp_mode == "absolute") {
        if (!b.clamp_threshold) throw ParseError(b.line_of({"clamp"}), "absolute clamp needs clamp_threshold");
        if (!(*b.clamp_threshold > 0.0))
            throw ParseError(b.line_of({"clamp_threshold"}), "clamp_threshold must be positive");
        cfg.campaign.clamp = ClampSetting{ClampSetting::Mode::Absolute, *b.clamp_threshold};
    } else {
        cfg.campaign.clamp = ClampSetting{};
    }

    if (cfg.seeds.empty()) throw ParseError(b.line_of({"seeds"}), "seed list is empty");
    if (!cfg.campaign.grid.contains(cfg.campaign.readout_time))
        throw ParseError(b.line_of({"readout_time", "samples", "duration", "dt"}), "readout_time lies outside the grid");
    if (cfg.campaign.k_ref == 0.0) throw ParseError(b.line_of({"k_ref"}), "k_ref must be non-zero");

    if (b.gate_min.has_value() != b.gate_max.has_value())
        throw ParseError(b.line_of({"gate_min", "gate_max"}), "gate needs both gate_min and gate_max");
    if (b.gate_min) {
        if (!(*b.gate_min < *b.gate_max)) throw ParseError(b.line_of({"gate_max"}), "gate_min must be below gate_max");
        cfg.campaign.gate = GateSpec{*b.gate_min, *b.gate_max};
    }

    if (cfg.stft_window < 2 || cfg.stft_window > n)
        throw ParseError(b.line_of({"stft_window", "samples", "duration", "dt"}), "stft_window must lie in [2, samples]");
    if (cfg.stft_hop < 1) throw ParseError(b.line_of({"stft_hop"}), "stft_hop must be at least 1");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    Builder b;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string content = trim(raw.substr(0, raw.find('#')));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (key.empty()) throw ParseError(line, "missing key before '='");
        const auto it = setters().find(key);
        if (it == setters().end()) throw ParseError(line, "unknown key '" + key + "'");
        if (!b.lines.emplace(key, line).second) throw ParseError(line, "key '" + key + "' given twice");
        if (value.empty()) throw ParseError(line, "key '" + key + "' has no value");
        it->second(b, value, line, key);
    }
    finish(b);
    return b.cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ParseError& e) {
        throw Error(path + ": " + e.what());
    }
}

std::string to_text(const RunConfig& cfg) {
    const Campaign& c = cfg.campaign;
    const NoiseRecipe& r = c.recipe;
    std::ostringstream out;
    auto kv = [&](const std::string& k, const std::string& v) { out << k << " = " << v << '\n'; };
    auto db = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("none"); };

    kv("dt", format_number(c.grid.dt()));
    kv("samples", std::to_string(c.grid.size()));
    kv("origin", format_number(c.grid.origin()));
    kv("i0", format_number(c.cfg.i0));
    kv("zeta", format_number(c.cfg.zeta));
    kv("t0", format_number(c.cfg.t0));
    kv("alpha", format_number(c.cfg.alpha));
    kv("tau", format_number(c.cfg.tau));
    kv("shift_override", c.cfg.shift_override ? format_number(*c.cfg.shift_override) : "none");
    kv("noise", r.name());
    kv("sigma", format_number(r.sigma));
    kv("noise_snr_db", db(r.stationary_snr_db));
    kv("impulsive_snr_db", db(r.impulsive_snr_db));
    kv("aux_seed_ch1", std::to_string(r.aux_seeds[0].value));
    kv("aux_seed_ch2", std::to_string(r.aux_seeds[1].value));
    kv("impulsive_zeta4", format_number(r.impulsive.zeta4));
    kv("impulsive_gammas", triple_text(r.impulsive.gammas));
    kv("impulsive_centers", triple_text(r.impulsive.centers));
    kv("impulsive_kappas", triple_text(r.impulsive.kappas));
    switch (c.clamp.mode) {
        case ClampSetting::Mode::Off: kv("clamp", "off"); break;
        case ClampSetting::Mode::Ratio:
            kv("clamp", "ratio");
            kv("clamp_ratio", format_number(c.clamp.value));
            break;
        case ClampSetting::Mode::Absolute:
            kv("clamp", "absolute");
            kv("clamp_threshold", format_number(c.clamp.value));
            break;
    }
    std::string seeds;
    for (const auto& [a, b] : cfg.seeds) {
        if (!seeds.empty()) seeds += ", ";
        seeds += std::to_string(a.value) + ":" + std::to_string(b.value);
    }
    kv("seeds", seeds);
    kv("readout_time", format_number(c.readout_time));
    kv("k_ref", format_number(c.k_ref));
    if (c.gate) {
        kv("gate_min", format_number(c.gate->theta_min));
        kv("gate_max", format_number(c.gate->theta_max));
    }
    kv("threads", std::to_string(cfg.threads));
    kv("stft_window", std::to_string(cfg.stft_window));
    kv("stft_hop", std::to_string(cfg.stft_hop));
    kv("trace_csv", cfg.outputs.trace_csv);
    kv("theta_csv", cfg.outputs.theta_csv);
    kv("theta0_csv", cfg.outputs.theta0_csv);
    kv("batch_json", cfg.outputs.batch_json);
    kv("spectra_prefix", cfg.outputs.spectra_prefix);
    return out.str();
}

}  // namespace awva
