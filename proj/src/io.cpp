#include "awva/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "awva/error.hpp"

namespace awva {

namespace fs = std::filesystem;

fs::path resolve_output_path(const std::string& path) {
    fs::path p(path);
    if (p.is_absolute()) return p;
    if (const char* dir = std::getenv(output_dir_env); dir != nullptr && *dir != '\0') return fs::path(dir) / p;
    return p;
}

std::string format_full(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_for_write(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_columns(const fs::path& path, const char* header, const TimeGrid& grid, std::span<const double> values) {
    std::ofstream out = open_for_write(path);
    std::string buf;
    buf.reserve(1 << 16);
    buf += header;
    buf += '\n';
    for (std::size_t k = 0; k < values.size(); ++k) {
        buf += format_full(grid.time(k));
        buf += ',';
        buf += format_full(values[k]);
        buf += '\n';
        if (buf.size() > (1 << 16) - 128) {
            out << buf;
            buf.clear();
        }
    }
    out << buf;
    finish(out, path);
}

nlohmann::ordered_json stats_json(const Stats& s) {
    return {{"mean", s.mean}, {"sample_dev", s.sample_dev}, {"count", s.count}};
}

nlohmann::ordered_json sensitivity_json(const SensitivityResult& r) {
    return {{"k", r.k},
            {"e", r.e},
            {"k_normalized", r.k_normalized},
            {"e_normalized", r.e_normalized},
            {"readout_time", r.readout_time},
            {"k_ref", r.k_ref}};
}

}  // namespace

void emit_trace_csv(const Trace& trace, const fs::path& path) {
    write_columns(path, "t_seconds,amplitude", trace.grid(), trace.samples());
}

void emit_theta_csv(const ThetaCurve& curve, const fs::path& path) {
    write_columns(path, "t_seconds,theta", curve.grid, curve.values);
}

void emit_spectrum_csv(const Spectrum& spectrum, const fs::path& path) {
    std::ofstream out = open_for_write(path);
    std::string buf = "f_hz,magnitude\n";
    for (std::size_t k = 0; k < spectrum.magnitudes.size(); ++k) {
        buf += format_full(spectrum.frequency(k));
        buf += ',';
        buf += format_full(spectrum.magnitudes[k]);
        buf += '\n';
    }
    out << buf;
    finish(out, path);
}

void emit_spectrogram_csv(const Spectrogram& sg, const fs::path& path) {
    std::ofstream out = open_for_write(path);
    std::string buf = "t_seconds,f_hz,magnitude\n";
    for (std::size_t c = 0; c < sg.columns.size(); ++c) {
        const std::string t = format_full(sg.column_times[c]);
        const Spectrum& col = sg.columns[c];
        for (std::size_t k = 0; k < col.magnitudes.size(); ++k) {
            buf += t;
            buf += ',';
            buf += format_full(col.frequency(k));
            buf += ',';
            buf += format_full(col.magnitudes[k]);
            buf += '\n';
        }
        out << buf;
        buf.clear();
    }
    finish(out, path);
}

nlohmann::ordered_json batch_to_json(const BatchResult& result, const Campaign& campaign) {
    nlohmann::ordered_json j;
    j["noise"] = campaign.recipe.name();
    j["tau"] = campaign.cfg.tau;
    j["shift"] = pointer_shift(campaign.cfg);
    j["readout_time"] = campaign.readout_time;
    auto& records = j["records"] = nlohmann::ordered_json::array();
    for (const MeasurementRecord& r : result.records) {
        nlohmann::ordered_json rec;
        rec["xi1"] = r.seeds.first.value;
        rec["xi2"] = r.seeds.second.value;
        rec["theta0"] = r.theta0;
        rec["theta_tau"] = r.theta_tau;
        rec["snr_db_actual"] = r.snr_db_actual ? nlohmann::ordered_json(*r.snr_db_actual) : nullptr;
        records.push_back(rec);
    }
    j["stats0"] = stats_json(result.stats0);
    j["stats_tau"] = stats_json(result.stats_tau);
    j["sensitivity"] = sensitivity_json(result.sensitivity);
    if (result.gated) {
        const GatedSummary& g = *result.gated;
        nlohmann::ordered_json gj;
        gj["theta_min"] = g.gate.theta_min;
        gj["theta_max"] = g.gate.theta_max;
        gj["kept"] = g.kept;
        gj["stats0"] = g.stats0 ? stats_json(*g.stats0) : nullptr;
        gj["stats_tau"] = g.stats_tau ? stats_json(*g.stats_tau) : nullptr;
        gj["sensitivity"] = g.sensitivity ? sensitivity_json(*g.sensitivity) : nullptr;
        j["gated"] = gj;
    }
    return j;
}

std::string batch_json_text(const BatchResult& result, const Campaign& campaign) {
    return batch_to_json(result, campaign).dump(2) + "\n";
}

void emit_batch_json(const BatchResult& result, const Campaign& campaign, const fs::path& path) {
    std::ofstream out = open_for_write(path);
    out << batch_json_text(result, campaign);
    finish(out, path);
}

std::vector<std::pair<double, double>> read_two_column_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw IoError("'" + path.string() + "' is empty");
    std::vector<std::pair<double, double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comma = line.find(',');
        double a = 0.0, b = 0.0;
        const char* end = line.data() + line.size();
        auto r1 = std::from_chars(line.data(), line.data() + (comma == std::string::npos ? 0 : comma), a);
        auto r2 = comma == std::string::npos ? r1 : std::from_chars(line.data() + comma + 1, end, b);
        if (comma == std::string::npos || r1.ec != std::errc() || r2.ec != std::errc() || r2.ptr != end)
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
        rows.emplace_back(a, b);
    }
    return rows;
}

}  // namespace awva
