#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "awva/harness.hpp"

namespace awva {

// A number as printed, with the size of one unit in its last printed digit.
struct PrintedValue {
    std::string text;
    double value = 0.0;
    double unit = 0.0;

    static PrintedValue parse(const std::string& text);
};

struct FixtureRow {
    std::string block;
    int row = 0;
    std::string xi1;
    std::string xi2;
    PrintedValue theta0;
    PrintedValue theta_tau;
    bool highlighted = false;
};

struct BlockSummary {
    std::string block;
    std::optional<GateSpec> gate;
    PrintedValue mean0, dev0, mean_tau, dev_tau;
};

struct TableFixture {
    std::string id;
    std::vector<FixtureRow> rows;
    std::vector<BlockSummary> summaries;

    std::vector<FixtureRow> block(const std::string& name) const;
    static std::vector<MeasurementRecord> records(const std::vector<FixtureRow>& rows);
};

struct TableOneRow {
    std::string label;
    std::string source_table;
    std::string source_block;
    std::optional<std::pair<int, int>> rows;  // 1-based inclusive slice
    std::optional<GateSpec> gate;
    std::string snr_db;
    // mean0, dev0, mean_tau, dev_tau, k, k_err, k_norm, k_norm_err
    std::array<std::optional<PrintedValue>, 8> cells;
};

inline constexpr double table_tau = 3.0e-9;
inline constexpr const char* fixture_dir_env = "AWVA_FIXTURE_DIR";
inline constexpr std::array<const char*, 8> table_one_columns{"mean0", "dev0", "mean_tau", "dev_tau",
                                                              "k", "k_err", "k_norm", "k_norm_err"};

std::filesystem::path default_fixture_dir();
TableFixture load_table(const std::filesystem::path& dir, const std::string& id);
std::vector<TableOneRow> load_table_one(const std::filesystem::path& dir);

struct CellCheck {
    std::string row;
    std::string column;
    std::string printed;
    double computed = 0.0;
    double tolerance = 0.0;
    bool ok = false;
};

struct TableReport {
    std::string id;
    std::vector<CellCheck> cells;
    std::size_t mismatches() const;
};

// Recomputes every printed cell from the per-measurement fixtures and compares within one unit
// of the last printed digit.
TableReport check_table_one(const std::filesystem::path& dir);
// Recomputes the printed block summaries of table II..VI.
TableReport check_block_summaries(const std::filesystem::path& dir, const std::string& id);

// The eight derived quantities for a set of rows, in table_one_columns order.
std::array<double, 8> derive_cells(const std::vector<FixtureRow>& rows, const std::optional<GateSpec>& gate);

}  // namespace awva
