#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "awva/config.hpp"
#include "awva/error.hpp"
#include "awva/fixtures.hpp"
#include "awva/io.hpp"

using namespace awva;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("awva_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST(ParseConfig, Defaults) {
    const RunConfig c = parse_config("");
    EXPECT_EQ(c, RunConfig{});
    EXPECT_EQ(c.campaign.grid, TimeGrid::standard());
    EXPECT_EQ(c.campaign.cfg, MeasurementConfig{});
}

TEST(ParseConfig, SimpleKeys) {
    EXPECT_EQ(parse_config("alpha = 0.01\n").campaign.cfg.alpha, 0.01);
    const RunConfig c = parse_config("# weak regime\nzeta = 2e-4\ntau = 3e-9   # delay\n\nnoise = N1+3N0\nseeds = 126:913, 632:097\n"
                                     "clamp = ratio\nclamp_ratio = 2.851\ngate_min = 1.0e-9\ngate_max = 1.6e-9\n");
    EXPECT_EQ(c.campaign.cfg.tau, 3e-9);
    EXPECT_EQ(c.campaign.recipe.name(), "N1+3N0");
    ASSERT_EQ(c.seeds.size(), 2u);
    EXPECT_EQ(c.seeds[1].second, Seed{97});
    EXPECT_EQ(c.campaign.clamp.mode, ClampSetting::Mode::Ratio);
    EXPECT_EQ(c.campaign.gate, (GateSpec{1.0e-9, 1.6e-9}));
    EXPECT_EQ(parse_config("shift_override = 3.116e-5\n").campaign.cfg.shift_override, 3.116e-5);
    EXPECT_EQ(parse_config("samples = 1000\nreadout_time = 5e-6\nstft_window = 256\n").campaign.grid.size(), 1000u);
}

TEST(ParseConfig, RejectsWithLineNumbers) {
    EXPECT_EQ(error_line("zeta = 2e-4\ntau = 1e-4\n"), 2);
    EXPECT_EQ(error_line("alpha = 0.01\nbogus = 1\n"), 2);
    EXPECT_EQ(error_line("alpha = 0.01\n\nalpha = 0.02\n"), 3);
    EXPECT_EQ(error_line("alpha 0.01\n"), 1);
    EXPECT_EQ(error_line("alpha = 0.01x\n"), 1);
    EXPECT_EQ(error_line("alpha =\n"), 1);
    EXPECT_EQ(error_line("noise = N7\n"), 1);
    EXPECT_EQ(error_line("seeds = 1:2, 3\n"), 1);
    EXPECT_EQ(error_line("dt = -1e-8\n"), 1);
    EXPECT_EQ(error_line("readout_time = 4e-3\n"), 1);
    EXPECT_EQ(error_line("gate_min = 2e-9\ngate_max = 1e-9\n"), 2);
    EXPECT_EQ(error_line("gate_min = 1e-9\n"), 1);
    EXPECT_EQ(error_line("clamp = sideways\n"), 1);
    EXPECT_EQ(error_line("threads = -2\n"), 1);
    EXPECT_EQ(error_line("samples = 200000\nstft_window = 300000\n"), 2);
    EXPECT_EQ(error_line("alpha = 0.01\nsamples = 1000\n"), 2);
}

TEST(ParseConfig, RoundTripProperty) {
    std::mt19937_64 rng(12345);
    auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    const std::vector<std::string> recipes{"none", "N0", "N1", "N2", "N3", "N4", "N1+3N0", "N4+0.1N0", "N4+N1"};
    for (int trial = 0; trial < 200; ++trial) {
        RunConfig c;
        auto& m = c.campaign.cfg;
        m.i0 = uni(0.1, 2.0);
        m.zeta = uni(1e-4, 3e-4);
        m.t0 = uni(1e-3, 2e-3);
        m.alpha = uni(0.001, 0.05);
        m.tau = uni(-1e-6, 1e-6);
        if (trial % 3 == 0) m.shift_override = uni(0.0, 5e-5);
        c.campaign.grid = TimeGrid(uni(5e-9, 2e-8), 250000 + rng() % 100000, uni(-1e-6, 1e-6));
        c.campaign.recipe = NoiseRecipe::parse(recipes[rng() % recipes.size()]);
        c.campaign.recipe.sigma = uni(0.5, 2.0);
        if (trial % 4 == 0) c.campaign.recipe.stationary_snr_db.reset();
        c.campaign.recipe.impulsive_snr_db = uni(-30.0, 0.0);
        c.campaign.recipe.aux_seeds = {Seed{rng()}, Seed{rng() % 1000}};
        c.campaign.recipe.impulsive.gammas[1] = uni(0.0, 20.0);
        c.campaign.recipe.impulsive.centers[2] = uni(-1e-3, 3e-3);
        c.campaign.clamp = trial % 2 ? ClampSetting{ClampSetting::Mode::Absolute, uni(1e-4, 1e-2)}
                                     : ClampSetting{ClampSetting::Mode::Ratio, uni(1.0, 5.0)};
        c.campaign.readout_time = uni(0.1, 0.9) * c.campaign.grid.duration() + c.campaign.grid.origin();
        c.campaign.k_ref = uni(0.01, 0.05);
        if (trial % 2) c.campaign.gate = GateSpec{uni(0.0, 1e-9), uni(1.1e-9, 3e-9)};
        c.seeds.clear();
        for (std::size_t i = 0, n = 1 + rng() % 5; i < n; ++i) c.seeds.emplace_back(Seed{rng() % 100000}, Seed{rng()});
        c.threads = static_cast<unsigned>(rng() % 8);
        c.stft_window = 1024 + rng() % 4096;
        c.stft_hop = 1 + rng() % 1024;
        c.outputs.batch_json = "out/run" + std::to_string(trial) + ".json";
        const std::string text = to_text(c);
        ASSERT_EQ(parse_config(text), c) << text;
        ASSERT_EQ(to_text(parse_config(text)), text);
    }
}

TEST(LoadConfig, MissingFileNamesPath) {
    try {
        load_config("/nonexistent/dir/missing.cfg");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/missing.cfg"), std::string::npos);
    }
}

TEST(LoadConfig, ParseErrorNamesPathAndLine) {
    TempDir tmp;
    const fs::path p = tmp.path / "bad.cfg";
    std::ofstream(p) << "alpha = 0.01\nwhat = 2\n";
    try {
        load_config(p.string());
        FAIL();
    } catch (const Error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find(p.string()), std::string::npos);
        EXPECT_NE(msg.find("line 2"), std::string::npos);
    }
}

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.01), "0.01");
    EXPECT_EQ(format_number(3e-9), "3e-09");
    for (double v : {1.0 / 3.0, 2.9973818364682836e-05, -1e300, 4.9406564584124654e-300}) EXPECT_EQ(std::stod(format_number(v)), v);
    EXPECT_EQ(std::stod(format_full(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Emit, ThetaCsvRoundTrip) {
    TempDir tmp;
    const TimeGrid g(1e-8, 5000);
    const MeasurementConfig cfg;
    std::vector<double> v(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) v[k] = std::exp(-double(k) / 700.0) * 1.2345678901234567e-9 * (k + 1);
    const ThetaCurve curve{g, v};
    const fs::path p = tmp.path / "theta.csv";
    emit_theta_csv(curve, p);
    EXPECT_EQ(slurp(p).substr(0, slurp(p).find('\n')), "t_seconds,theta");
    const auto back = read_two_column_csv(p);
    ASSERT_EQ(back.size(), g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        EXPECT_NEAR(back[k].first, g.time(k), 1e-15 * std::abs(g.time(k)));
        EXPECT_NEAR(back[k].second, v[k], 1e-15 * std::abs(v[k]));
    }
}

TEST(Emit, Schemas) {
    TempDir tmp;
    const TimeGrid g(1e-8, 8);
    const Trace t(g, {1, 2, 3, 4, 5, 6, 7, 8});
    emit_trace_csv(t, tmp.path / "t.csv");
    emit_spectrum_csv(fft_magnitude(t), tmp.path / "s.csv");
    emit_spectrogram_csv(spectrogram(t, 4, 2), tmp.path / "g.csv");
    auto header = [&](const char* f) {
        const std::string s = slurp(tmp.path / f);
        return s.substr(0, s.find('\n'));
    };
    EXPECT_EQ(header("t.csv"), "t_seconds,amplitude");
    EXPECT_EQ(header("s.csv"), "f_hz,magnitude");
    EXPECT_EQ(header("g.csv"), "t_seconds,f_hz,magnitude");
    const std::string g_text = slurp(tmp.path / "g.csv");
    EXPECT_EQ(std::count(g_text.begin(), g_text.end(), '\n'), 1 + 3 * 3);
    EXPECT_EQ(g_text.back(), '\n');
    EXPECT_EQ(read_two_column_csv(tmp.path / "t.csv")[7].second, 8.0);
    std::ofstream(tmp.path / "plain") << "x";
    EXPECT_THROW(emit_trace_csv(t, tmp.path / "plain" / "t.csv"), IoError);
}

TEST(Emit, BatchJsonOfFixture) {
    const auto rows = load_table(default_fixture_dir(), "II").block("N0");
    BatchResult r;
    r.records = TableFixture::records(rows);
    std::vector<double> a, b;
    for (const auto& rec : r.records) {
        a.push_back(rec.theta0);
        b.push_back(rec.theta_tau);
    }
    r.stats0 = stats(a);
    r.stats_tau = stats(b);
    r.sensitivity = sensitivity(r.stats0, r.stats_tau, table_tau, default_k_ref);
    Campaign c;
    c.recipe = NoiseRecipe::parse("N0");
    const auto j = nlohmann::json::parse(batch_json_text(r, c));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", j["stats0"]["mean"].get<double>());
    EXPECT_STREQ(buf, "1.2459e-09");
    EXPECT_EQ(j["records"].size(), 7u);
    EXPECT_EQ(j["records"][0]["xi1"], 126);
    EXPECT_EQ(j["stats0"]["mean"].get<double>(), r.stats0.mean);
    EXPECT_TRUE(j.contains("sensitivity"));
    EXPECT_TRUE(j.contains("stats_tau"));
}

TEST(OutputDir, EnvironmentRedirectsRelativePaths) {
    TempDir tmp;
    ::setenv(output_dir_env, tmp.path.c_str(), 1);
    EXPECT_EQ(resolve_output_path("a/b.csv"), tmp.path / "a/b.csv");
    EXPECT_EQ(resolve_output_path("/abs/b.csv"), fs::path("/abs/b.csv"));
    ::unsetenv(output_dir_env);
    EXPECT_EQ(resolve_output_path("a/b.csv"), fs::path("a/b.csv"));
}
