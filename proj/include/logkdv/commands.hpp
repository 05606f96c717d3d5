#pragma once

#include <iosfwd>
#include <string_view>

#include "logkdv/config.hpp"

namespace logkdv {

// Each command writes a CSV document (with a '#' header block recording the
// config hash and effective parameters) and returns the number of rows that
// failed hard. Per-row numerical failures are recorded in the output and do
// not abort the run.
int cmd_wave(const RunConfig& cfg, std::ostream& out);
int cmd_spectrum(const RunConfig& cfg, std::ostream& out);
int cmd_theta(const RunConfig& cfg, std::ostream& out);
int cmd_table1(const RunConfig& cfg, std::ostream& out);
int cmd_table2(const RunConfig& cfg, std::ostream& out);
int cmd_portrait(const RunConfig& cfg, std::ostream& out);
int cmd_evolve(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);

// Dispatch by subcommand name; throws ConfigError for an unknown command.
int run_command(std::string_view name, const RunConfig& cfg, std::ostream& out);

// Reference values for the table commands (bundled reference targets with tolerance).
struct Table1Row {
    double omega, a, phi0;
    double ref_period, ref_theta;
};
struct Table2Row {
    double omega, a, phi0;
    double ref_ma_detd, ref_ma, ref_fw;
};
std::span<const Table1Row> table1_rows();
std::span<const Table2Row> table2_rows();

}  // namespace logkdv
