#include "awva/fixtures.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "awva/error.hpp"

#ifndef AWVA_DEFAULT_FIXTURE_DIR
#define AWVA_DEFAULT_FIXTURE_DIR "data/fixtures"
#endif

namespace awva {

namespace fs = std::filesystem;

namespace {

double to_double(const std::string& s, const std::string& where) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw Error(where + ": not a number: '" + s + "'");
    return v;
}

struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> lines;
};

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

CsvFile read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open fixture '" + path.string() + "'");
    CsvFile f;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv(line);
        if (f.header.empty()) {
            f.header = cells;
            continue;
        }
        if (cells.size() != f.header.size())
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(f.header.size()) + " cells");
        f.rows.push_back(std::move(cells));
        f.lines.push_back(lineno);
    }
    if (f.header.empty()) throw IoError("fixture '" + path.string() + "' has no header");
    return f;
}

std::optional<GateSpec> parse_gate(const std::string& lo, const std::string& hi, const std::string& where) {
    if (lo.empty() && hi.empty()) return std::nullopt;
    GateSpec g{to_double(lo, where), to_double(hi, where)};
    g.validate();
    return g;
}

}  // namespace

PrintedValue PrintedValue::parse(const std::string& text) {
    PrintedValue p;
    p.text = text;
    p.value = to_double(text, "printed value");
    const auto e = text.find_first_of("eE");
    const std::string mantissa = text.substr(0, e);
    const int exponent = e == std::string::npos ? 0 : static_cast<int>(to_double(text.substr(e + 1), "exponent"));
    const auto dot = mantissa.find('.');
    const int decimals = dot == std::string::npos ? 0 : static_cast<int>(mantissa.size() - dot - 1);
    p.unit = std::pow(10.0, exponent - decimals);
    return p;
}

std::vector<FixtureRow> TableFixture::block(const std::string& name) const {
    std::vector<FixtureRow> out;
    for (const FixtureRow& r : rows)
        if (r.block == name) out.push_back(r);
    if (out.empty()) throw Error("table " + id + " has no block '" + name + "'");
    return out;
}

std::vector<MeasurementRecord> TableFixture::records(const std::vector<FixtureRow>& rows) {
    std::vector<MeasurementRecord> out;
    auto seed = [](const std::string& s) {
        std::uint64_t v = 0;
        std::from_chars(s.data(), s.data() + s.size(), v);
        return Seed{v};
    };
    for (const FixtureRow& r : rows)
        out.push_back(MeasurementRecord{{seed(r.xi1), seed(r.xi2)}, r.theta0.value, r.theta_tau.value, std::nullopt});
    return out;
}

fs::path default_fixture_dir() {
    if (const char* dir = std::getenv(fixture_dir_env); dir != nullptr && *dir != '\0') return dir;
    return AWVA_DEFAULT_FIXTURE_DIR;
}

TableFixture load_table(const fs::path& dir, const std::string& id) {
    TableFixture t;
    t.id = id;
    const fs::path rows_path = dir / ("table_" + id + ".csv");
    const CsvFile rows = read_csv(rows_path);
    for (std::size_t i = 0; i < rows.rows.size(); ++i) {
        const auto& c = rows.rows[i];
        if (c.size() != 7) throw IoError(rows_path.string() + ": expected 7 columns");
        const std::string where = rows_path.string() + ":" + std::to_string(rows.lines[i]);
        t.rows.push_back(FixtureRow{c[0], static_cast<int>(to_double(c[1], where)), c[2], c[3],
                                    PrintedValue::parse(c[4]), PrintedValue::parse(c[5]), c[6] == "1"});
    }
    const fs::path sum_path = dir / ("table_" + id + "_summary.csv");
    if (fs::exists(sum_path)) {
        const CsvFile sums = read_csv(sum_path);
        for (std::size_t i = 0; i < sums.rows.size(); ++i) {
            const auto& c = sums.rows[i];
            if (c.size() != 7) throw IoError(sum_path.string() + ": expected 7 columns");
            const std::string where = sum_path.string() + ":" + std::to_string(sums.lines[i]);
            t.summaries.push_back(BlockSummary{c[0], parse_gate(c[1], c[2], where), PrintedValue::parse(c[3]),
                                               PrintedValue::parse(c[4]), PrintedValue::parse(c[5]),
                                               PrintedValue::parse(c[6])});
        }
    }
    return t;
}

std::vector<TableOneRow> load_table_one(const fs::path& dir) {
    const fs::path path = dir / "table_I.csv";
    const CsvFile f = read_csv(path);
    std::vector<TableOneRow> out;
    for (std::size_t i = 0; i < f.rows.size(); ++i) {
        const auto& c = f.rows[i];
        if (c.size() != 14) throw IoError(path.string() + ": expected 14 columns");
        const std::string where = path.string() + ":" + std::to_string(f.lines[i]);
        TableOneRow r;
        r.label = c[0];
        const auto colon = c[1].find(':');
        if (colon == std::string::npos) throw IoError(where + ": source must be table:block");
        r.source_table = c[1].substr(0, colon);
        r.source_block = c[1].substr(colon + 1);
        if (!c[2].empty()) {
            const auto dash = c[2].find('-');
            if (dash == std::string::npos) throw IoError(where + ": rows must be first-last");
            r.rows = std::make_pair(static_cast<int>(to_double(c[2].substr(0, dash), where)),
                                    static_cast<int>(to_double(c[2].substr(dash + 1), where)));
        }
        r.gate = parse_gate(c[3], c[4], where);
        r.snr_db = c[5];
        for (std::size_t k = 0; k < 8; ++k)
            if (!c[6 + k].empty()) r.cells[k] = PrintedValue::parse(c[6 + k]);
        out.push_back(std::move(r));
    }
    return out;
}

std::size_t TableReport::mismatches() const {
    std::size_t n = 0;
    for (const CellCheck& c : cells) n += c.ok ? 0 : 1;
    return n;
}

std::array<double, 8> derive_cells(const std::vector<FixtureRow>& rows, const std::optional<GateSpec>& gate) {
    std::vector<MeasurementRecord> recs = TableFixture::records(rows);
    if (gate) recs = gate_range(recs, *gate);
    std::vector<double> a, b;
    for (const auto& r : recs) {
        a.push_back(r.theta0);
        b.push_back(r.theta_tau);
    }
    const Stats s0 = stats(a);
    const Stats st = stats(b);
    const SensitivityResult k = sensitivity(s0, st, table_tau, default_k_ref);
    return {s0.mean, s0.sample_dev, st.mean, st.sample_dev, k.k, k.e, k.k_normalized, k.e_normalized};
}

namespace {

CellCheck compare(const std::string& row, const std::string& column, const PrintedValue& printed, double computed) {
    const double tol = printed.unit * (1.0 + 1e-9);
    return CellCheck{row, column, printed.text, computed, printed.unit, std::abs(computed - printed.value) <= tol};
}

}  // namespace

TableReport check_table_one(const fs::path& dir) {
    TableReport report;
    report.id = "I";
    std::map<std::string, TableFixture> tables;
    for (const TableOneRow& row : load_table_one(dir)) {
        auto it = tables.find(row.source_table);
        if (it == tables.end()) it = tables.emplace(row.source_table, load_table(dir, row.source_table)).first;
        std::vector<FixtureRow> rows = it->second.block(row.source_block);
        if (row.rows) {
            const auto [first, last] = *row.rows;
            if (first < 1 || last < first || static_cast<std::size_t>(last) > rows.size())
                throw Error("table I row '" + row.label + "': slice outside its block");
            rows = std::vector<FixtureRow>(rows.begin() + (first - 1), rows.begin() + last);
        }
        const auto derived = derive_cells(rows, row.gate);
        for (std::size_t k = 0; k < 8; ++k)
            if (row.cells[k]) report.cells.push_back(compare(row.label, table_one_columns[k], *row.cells[k], derived[k]));
    }
    return report;
}

TableReport check_block_summaries(const fs::path& dir, const std::string& id) {
    const TableFixture t = load_table(dir, id);
    TableReport report;
    report.id = id;
    for (const BlockSummary& s : t.summaries) {
        const auto d = derive_cells(t.block(s.block), s.gate);
        std::string label = s.block;
        if (s.gate) {
            std::ostringstream g;
            g << " (" << s.gate->theta_min << ", " << s.gate->theta_max << ")";
            label += g.str();
        }
        report.cells.push_back(compare(label, "mean0", s.mean0, d[0]));
        report.cells.push_back(compare(label, "dev0", s.dev0, d[1]));
        report.cells.push_back(compare(label, "mean_tau", s.mean_tau, d[2]));
        report.cells.push_back(compare(label, "dev_tau", s.dev_tau, d[3]));
    }
    return report;
}

}  // namespace awva
