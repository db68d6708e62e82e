#pragma once

// Tables and reports behind the command-line tool. Each command returns plain
// rows; the writers turn them into CSV (17 significant digits), JSON
// (round-trip exact) or an aligned console table (6 significant digits).

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfi/fisher.hpp"
#include "qfi/optics.hpp"

namespace qfi {

enum class OutputFormat { table, csv, json };

OutputFormat parse_output_format(const std::string& name);

struct FixedTotalRow {
  int total = 0;
  std::vector<int> n_opt;
  double f_twin_fock = 0.0;            // enumeration over n
  double f_twin_fock_simulated = 0.0;  // Var(N_d) on B|twin-Fock>
  double f_noon = 0.0;                 // N^2
  double f_noon_simulated = 0.0;       // Var(N_d) on the N00N state
  double qcrb_twin = 0.0;
  double qcrb_noon = 0.0;
  double noon_over_twin = 0.0;
};

std::vector<FixedTotalRow> table_fixed_total(int max_total);

struct MeanRow {
  double mean_total = 0.0;
  double f_closed_form = 0.0;  // N (N + 2)
  std::optional<double> f_simulated;
  std::optional<double> rel_dev;
  std::optional<double> tail;
  std::optional<double> qcrb;
  int cutoff = 0;
  std::string error;
  int required_cutoff = -1;
};

struct MeanTableOptions {
  int cutoff = 64;
  bool auto_raise = false;
  int max_cutoff = 512;
  double tail_tolerance = 1e-10;
};

/// Truncation failures are reported in the row (error + required cutoff)
/// instead of aborting the table.
std::vector<MeanRow> table_mean_total(const std::vector<double>& means, const MeanTableOptions& options);

struct QfiComparison {
  FisherReport variance;
  std::optional<FisherReport> moment;  // product inputs only
  double discrepancy = 0.0;
  int cutoff = 0;
};

QfiComparison compare_qfi(const nlohmann::json& spec_a_or_two_mode,
                          const std::optional<nlohmann::json>& spec_b, int default_cutoff);

std::string format_number(double value, int significant_digits);

nlohmann::json to_json(const std::vector<FixedTotalRow>& rows);
nlohmann::json to_json(const std::vector<MeanRow>& rows);
nlohmann::json to_json(const QfiComparison& comparison);

void write(std::ostream& out, const std::vector<FixedTotalRow>& rows, OutputFormat format);
void write(std::ostream& out, const std::vector<MeanRow>& rows, OutputFormat format);
void write(std::ostream& out, const QfiComparison& comparison, OutputFormat format);

}  // namespace qfi
