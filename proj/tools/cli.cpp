#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <sstream>

#include "awva/config.hpp"
#include "awva/error.hpp"
#include "awva/fixtures.hpp"
#include "awva/harness.hpp"
#include "awva/io.hpp"
#include "awva/spectral.hpp"

namespace awva {

namespace {

RunConfig config_from(const std::string& path) { return path.empty() ? RunConfig{} : load_config(path); }

std::string sci(double v, int digits = 6) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(digits) << v;
    return s.str();
}

int cmd_run(const std::string& config_path, std::size_t seed_index, std::ostream& out) {
    const RunConfig rc = config_from(config_path);
    const Campaign& c = rc.campaign;
    if (seed_index >= rc.seeds.size()) throw Error("seed index " + std::to_string(seed_index) + " out of range");
    const SeedPair seeds = rc.seeds[seed_index];

    const SignalSet signals = SignalSet::build(c.grid, c.cfg);
    const ClampSpec clamp_spec = c.clamp.resolve(signals.delayed.max_abs());
    const auto n1 = c.recipe.for_channel(seeds.first, 0);
    const auto n2 = c.recipe.for_channel(seeds.second, 1);
    const Trace noise1 = n1 ? synthesize(c.grid, *n1, &signals.delayed) : Trace::zeros(c.grid);
    const Trace noise2 = n2 ? synthesize(c.grid, *n2, &signals.delayed) : Trace::zeros(c.grid);

    const Trace ch1_tau = clamp(signals.delayed + noise1, clamp_spec);
    const Trace ch1_zero = clamp(signals.undelayed + noise1, clamp_spec);
    const Trace ch2 = clamp(signals.reference + noise2, clamp_spec);
    const ThetaCurve theta_tau = theta(ch1_tau, ch2);
    const ThetaCurve theta_zero = theta(ch1_zero, ch2);

    const auto trace_path = resolve_output_path(rc.outputs.trace_csv);
    const auto theta_path = resolve_output_path(rc.outputs.theta_csv);
    const auto theta0_path = resolve_output_path(rc.outputs.theta0_csv);
    emit_trace_csv(ch1_tau, trace_path);
    emit_theta_csv(theta_tau, theta_path);
    emit_theta_csv(theta_zero, theta0_path);

    out << "noise        " << c.recipe.name() << "  xi1=" << seeds.first.value << " xi2=" << seeds.second.value << "\n";
    out << "shift        " << sci(pointer_shift(c.cfg)) << " s\n";
    out << "theta0       " << sci(theta_zero.at(c.readout_time)) << "  at t=" << c.readout_time << " s\n";
    out << "theta_tau    " << sci(theta_tau.at(c.readout_time)) << "\n";
    if (n1) out << "snr_db       " << std::fixed << std::setprecision(3) << snr_db(signals.delayed, clamp(noise1, clamp_spec)) << "\n";
    out << "wrote        " << trace_path.string() << ", " << theta_path.string() << ", " << theta0_path.string() << "\n";
    return 0;
}

int cmd_batch(const std::string& config_path, std::optional<unsigned> threads, std::ostream& out) {
    const RunConfig rc = config_from(config_path);
    const BatchResult result = run_batch(rc.campaign, rc.seeds, threads.value_or(rc.threads));
    const auto path = resolve_output_path(rc.outputs.batch_json);
    emit_batch_json(result, rc.campaign, path);

    out << "noise " << rc.campaign.recipe.name() << ", " << result.records.size() << " measurements, readout "
        << rc.campaign.readout_time << " s\n";
    out << "   xi1    xi2          theta0       theta_tau\n";
    for (const MeasurementRecord& r : result.records) {
        char line[128];
        std::snprintf(line, sizeof line, "%6llu %6llu  %14.6e  %14.6e\n",
                      static_cast<unsigned long long>(r.seeds.first.value),
                      static_cast<unsigned long long>(r.seeds.second.value), r.theta0, r.theta_tau);
        out << line;
    }
    auto summary = [&](const char* tag, const Stats& s0, const Stats& st, const SensitivityResult& k) {
        char line[256];
        std::snprintf(line, sizeof line,
                      "%-8s mean0 %.4e (+- %.4e)  mean_tau %.4e (+- %.4e)  K %.4f (+- %.4f)  K/%g %.3f (+- %.3f)  n=%zu\n",
                      tag, s0.mean, s0.sample_dev, st.mean, st.sample_dev, k.k, k.e, k.k_ref, k.k_normalized,
                      k.e_normalized, s0.count);
        out << line;
    };
    summary("all", result.stats0, result.stats_tau, result.sensitivity);
    if (result.gated) {
        if (result.gated->stats0)
            summary("gated", *result.gated->stats0, *result.gated->stats_tau, *result.gated->sensitivity);
        else
            out << "gated    no measurement inside the gate\n";
    }
    out << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_spectra(const std::string& config_path, const std::string& noise_override, std::optional<std::uint64_t> seed,
                std::optional<std::size_t> window, std::optional<std::size_t> hop, std::ostream& out) {
    RunConfig rc = config_from(config_path);
    Campaign& c = rc.campaign;
    if (!noise_override.empty()) {
        const NoiseRecipe parsed = NoiseRecipe::parse(noise_override);
        c.recipe.terms = parsed.terms;
    }
    const std::size_t win = window.value_or(rc.stft_window);
    const std::size_t step = hop.value_or(rc.stft_hop);
    const Seed s = seed ? Seed{*seed} : rc.seeds.front().first;

    const Trace signal = measurement_signal(c.grid, c.cfg);
    const std::string prefix = rc.outputs.spectra_prefix;
    std::vector<std::string> written;
    auto emit = [&](const Trace& t, const std::string& tag) {
        const auto fft_path = resolve_output_path(prefix + "_" + tag + "_fft.csv");
        const auto stft_path = resolve_output_path(prefix + "_" + tag + "_stft.csv");
        emit_spectrum_csv(fft_magnitude(t), fft_path);
        emit_spectrogram_csv(spectrogram(t, win, step), stft_path);
        written.push_back(fft_path.string());
        written.push_back(stft_path.string());
    };
    emit(signal, "signal");
    if (const auto spec = c.recipe.for_channel(s, 0)) {
        const Trace noise = synthesize(c.grid, *spec, &signal);
        emit(noise, "noise");
        out << "noise " << c.recipe.name() << " xi=" << s.value << "  snr_db " << std::fixed << std::setprecision(3)
            << snr_db(signal, noise) << "\n";
    }
    for (const auto& w : written) out << "wrote " << w << "\n";
    return 0;
}

int cmd_table(const std::string& id, const std::string& dir_arg, std::ostream& out) {
    const std::filesystem::path dir = dir_arg.empty() ? default_fixture_dir() : std::filesystem::path(dir_arg);
    const TableReport report = id == "I" ? check_table_one(dir) : check_block_summaries(dir, id);

    out << "table " << report.id << ": recomputed from " << dir.string() << "\n";
    out << std::left << std::setw(30) << "row" << std::setw(11) << "column" << std::setw(14) << "printed"
        << std::setw(18) << "computed" << "status\n";
    for (const CellCheck& c : report.cells) {
        // Show the computed value in the printed value's exponent so the digits line up.
        std::ostringstream computed;
        const auto e = c.printed.find('e');
        if (e == std::string::npos) {
            computed << std::fixed << std::setprecision(6) << c.computed;
        } else {
            const std::string exponent = c.printed.substr(e);
            computed << std::fixed << std::setprecision(6) << c.computed / std::stod("1" + exponent) << exponent;
        }
        out << std::left << std::setw(30) << c.row << std::setw(11) << c.column << std::setw(14) << c.printed
            << std::setw(18) << computed.str() << (c.ok ? "ok" : "DIFF") << "\n";
    }
    const std::size_t bad = report.mismatches();
    out << report.cells.size() - bad << " of " << report.cells.size() << " cells match within one unit of the last printed digit\n";
    if (bad != 0) throw Error(std::to_string(bad) + " cells of table " + report.id + " differ from the printed values");
    return 0;
}

int cmd_calibrate(double theta0, double theta_tau, const std::string& config_path, std::optional<double> readout,
                  std::ostream& out) {
    const RunConfig rc = config_from(config_path);
    const double t = readout.value_or(rc.campaign.readout_time);
    const Calibration cal = calibrate_shift(theta0, theta_tau, rc.campaign.cfg, t);
    out << "shift        " << sci(cal.shift, 9) << " s\n";
    out << "i0           " << sci(cal.i0, 9) << "\n";
    if (rc.campaign.cfg.tau != 0.0) out << "cot_alpha    " << sci(cal.shift / rc.campaign.cfg.tau, 9) << "  (shift / tau)\n";
    out << "readout      " << t << " s\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Auto-correlative weak-value amplification simulator", "awva"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<unsigned> threads;
    std::size_t seed_index = 0;
    std::string noise_override;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> window, hop;
    std::string table_id, fixture_dir;
    double theta0 = 0.0, theta_tau = 0.0;
    std::optional<double> readout;

    auto* run = app.add_subcommand("run", "single measurement; writes trace and theta CSVs");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--seed-index", seed_index, "which seed pair of the config to use");

    auto* batch = app.add_subcommand("batch", "multi-seed campaign; writes JSON and prints a summary");
    batch->add_option("--config", config_path, "config file")->required();
    batch->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* spectra = app.add_subcommand("spectra", "FFT and spectrogram CSVs for a noise recipe and the clean signal");
    spectra->add_option("--config", config_path, "config file");
    spectra->add_option("--noise", noise_override, "noise recipe, e.g. N1 or N4+N0");
    spectra->add_option("--seed", seed, "channel-1 seed");
    spectra->add_option("--window", window, "spectrogram window length in samples");
    spectra->add_option("--hop", hop, "spectrogram hop in samples");

    auto* table = app.add_subcommand("table", "recompute a table from the shipped fixtures and diff it");
    table->add_option("--id", table_id, "table id")->required()->check(CLI::IsMember({"I", "II", "III", "IV", "V", "VI"}));
    table->add_option("--fixtures", fixture_dir, "fixture directory");

    auto* calibrate = app.add_subcommand("calibrate", "fit the pointer shift to two readout targets");
    calibrate->add_option("--theta0", theta0, "target theta at tau = 0")->required();
    calibrate->add_option("--theta-tau", theta_tau, "target theta at tau")->required();
    calibrate->add_option("--config", config_path, "config file");
    calibrate->add_option("--readout", readout, "readout time in seconds");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "awva: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, seed_index, out);
        if (batch->parsed()) return cmd_batch(config_path, threads, out);
        if (spectra->parsed()) return cmd_spectra(config_path, noise_override, seed, window, hop, out);
        if (table->parsed()) return cmd_table(table_id, fixture_dir, out);
        if (calibrate->parsed()) return cmd_calibrate(theta0, theta_tau, config_path, readout, out);
    } catch (const std::exception& e) {
        err << "awva: error: " << e.what() << "\n";
        return 1;
    }
    err << app.help();
    return 2;
}

}  // namespace awva
