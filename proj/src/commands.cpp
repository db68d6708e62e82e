#include "qfi/commands.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <sstream>

#include "qfi/optimize.hpp"
#include "qfi/state_spec.hpp"
#include "qfi/states.hpp"

namespace qfi {

namespace {

using nlohmann::json;

constexpr int kExact = 17;
constexpr int kHuman = 6;

std::string join(const std::vector<int>& values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

json number_or_null(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

// JSON has no infinity; an infinite bound (zero QFI) is written as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string cell(const std::optional<double>& v, int digits) {
  return v ? format_number(*v, digits) : std::string();
}

void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t j = 0; j < header.size(); ++j) width[j] = header[j].size();
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < r.size(); ++j) width[j] = std::max(width[j], r[j].size());
  }
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      out << (j ? "  " : "") << std::setw(static_cast<int>(width[j])) << r[j];
    }
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t j = 0; j < r.size(); ++j) out << (j ? "," : "") << r[j];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

const std::vector<std::string> kFixedHeader{
    "N", "n_opt", "F_twin_fock", "F_twin_fock_simulated", "F_noon", "F_noon_simulated",
    "qcrb_twin", "qcrb_noon", "noon_over_twin"};

const std::vector<std::string> kMeanHeader{"N_mean", "F_closed_form", "F_simulated", "rel_dev",
                                           "tail", "qcrb", "cutoff", "required_cutoff", "error"};

std::vector<std::vector<std::string>> fixed_cells(const std::vector<FixedTotalRow>& rows, int digits) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) {
    out.push_back({std::to_string(r.total), join(r.n_opt, ';'), format_number(r.f_twin_fock, digits),
                   format_number(r.f_twin_fock_simulated, digits), format_number(r.f_noon, digits),
                   format_number(r.f_noon_simulated, digits), format_number(r.qcrb_twin, digits),
                   format_number(r.qcrb_noon, digits), format_number(r.noon_over_twin, digits)});
  }
  return out;
}

std::vector<std::vector<std::string>> mean_cells(const std::vector<MeanRow>& rows, int digits) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) {
    out.push_back({format_number(r.mean_total, digits), format_number(r.f_closed_form, digits),
                   cell(r.f_simulated, digits), cell(r.rel_dev, digits), cell(r.tail, digits),
                   cell(r.qcrb, digits), std::to_string(r.cutoff),
                   r.required_cutoff >= 0 ? std::to_string(r.required_cutoff) : std::string(),
                   r.error});
  }
  return out;
}

}  // namespace

OutputFormat parse_output_format(const std::string& name) {
  if (name == "table") return OutputFormat::table;
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format \"" + name + "\" (table, csv, json)");
}

std::string format_number(double value, int significant_digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
  return buf;
}

std::vector<FixedTotalRow> table_fixed_total(int max_total) {
  if (max_total < 1) throw std::invalid_argument("table-fixed-n: N_max must be >= 1");
  std::vector<FixedTotalRow> rows;
  for (int n = 1; n <= max_total; ++n) {
    FixedTotalRow row;
    row.total = n;
    const FixedTotalOptimum best = fixed_total_best(n);
    row.n_opt = best.maximizers;
    row.f_twin_fock = static_cast<double>(best.qfi_max);
    row.f_twin_fock_simulated = qfi_variance(twin_fock_input(n, n / 2 + 2)).qfi;
    row.f_noon = static_cast<double>(n) * n;
    row.f_noon_simulated = qfi_entangled(noon_state(n, n + 1)).qfi;
    row.qcrb_twin = qcrb(row.f_twin_fock);
    row.qcrb_noon = qcrb(row.f_noon);
    row.noon_over_twin = row.f_noon / row.f_twin_fock;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<MeanRow> table_mean_total(const std::vector<double>& means, const MeanTableOptions& options) {
  const FactoryOptions factory{options.auto_raise ? CutoffPolicy::auto_raise : CutoffPolicy::reject,
                               options.tail_tolerance, options.max_cutoff};
  std::vector<MeanRow> rows;
  for (double mean : means) {
    MeanRow row;
    row.mean_total = mean;
    row.f_closed_form = mean * (mean + 2.0);
    row.cutoff = options.cutoff;
    try {
      const TwoModeState input = optimal_mean_input(mean, options.cutoff, factory);
      const FisherReport report = qfi_variance(input);
      row.cutoff = input.cutoff();
      row.f_simulated = report.qfi;
      row.tail = input.truncation_tail();
      row.qcrb = report.qcrb;
      row.rel_dev = row.f_closed_form > 0.0
                        ? std::abs(report.qfi - row.f_closed_form) / row.f_closed_form
                        : std::abs(report.qfi);
    } catch (const TruncationError& e) {
      row.error = e.what();
      row.required_cutoff = e.required_cutoff();
      row.tail = e.tail();
    } catch (const std::invalid_argument& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

QfiComparison compare_qfi(const json& first, const std::optional<json>& second, int default_cutoff) {
  const SpecDefaults defaults{default_cutoff, FactoryOptions{}};
  QfiComparison out;

  auto score_product = [&](const SingleModeState& a, const SingleModeState& b) {
    const TwoModeState input = tensor(a, b);
    out.cutoff = input.cutoff();
    out.variance = qfi_variance(input);
    out.moment = qfi_product(moments(a), moments(b), input.truncation_tail());
    out.discrepancy = std::abs(out.variance.qfi - out.moment->qfi);
  };

  if (second) {
    json product{{"a", first}, {"b", *second}};
    const TwoModeState input = build_two_mode(product, defaults);
    // build_two_mode pads mismatched cutoffs; rebuild the factors on that grid.
    auto a = build_single_mode(first, defaults, "$.a");
    auto b = build_single_mode(*second, defaults, "$.b");
    const int d = input.cutoff();
    auto pad = [d](const SingleModeState& s) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
      v.head(s.cutoff()) = s.amplitudes();
      return SingleModeState::from_amplitudes(std::move(v), s.truncation_tail());
    };
    score_product(pad(a), pad(b));
    return out;
  }
  if (first.is_object() && !first.contains("type") && first.contains("a") && first.contains("b")) {
    return compare_qfi(first["a"], first["b"], default_cutoff);
  }
  if (is_single_mode_spec(first)) {
    throw SpecError("$", "a single-mode spec needs a second mode (--b)");
  }
  const TwoModeState input = build_two_mode(first, defaults);
  out.cutoff = input.cutoff();
  const bool post_splitter = first.value("type", std::string()) == "noon";
  out.variance = post_splitter ? qfi_entangled(input) : qfi_variance(input);
  if (!post_splitter && first.value("type", std::string()) == "optimal_mean") {
    const auto [a, b] = optimal_mean_factors(first["N_mean"].get<double>(), input.cutoff(),
                                             FactoryOptions{CutoffPolicy::reject, 1.0, 512});
    out.moment = qfi_product(moments(a), moments(b), input.truncation_tail());
    out.discrepancy = std::abs(out.variance.qfi - out.moment->qfi);
  }
  return out;
}

json to_json(const std::vector<FixedTotalRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"N", r.total},
                   {"n_opt", r.n_opt},
                   {"F_twin_fock", r.f_twin_fock},
                   {"F_twin_fock_simulated", r.f_twin_fock_simulated},
                   {"F_noon", r.f_noon},
                   {"F_noon_simulated", r.f_noon_simulated},
                   {"qcrb_twin", r.qcrb_twin},
                   {"qcrb_noon", r.qcrb_noon},
                   {"noon_over_twin", r.noon_over_twin}});
  }
  return arr;
}

json to_json(const std::vector<MeanRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json row{{"N_mean", r.mean_total},
             {"F_closed_form", r.f_closed_form},
             {"F_simulated", number_or_null(r.f_simulated)},
             {"rel_dev", number_or_null(r.rel_dev)},
             {"tail", number_or_null(r.tail)},
             {"qcrb", number_or_null(r.qcrb)},
             {"cutoff", r.cutoff}};
    if (!r.error.empty()) row["error"] = r.error;
    if (r.required_cutoff >= 0) row["required_cutoff"] = r.required_cutoff;
    arr.push_back(std::move(row));
  }
  return arr;
}

json to_json(const QfiComparison& c) {
  auto report = [](const FisherReport& r) {
    return json{{"qfi", r.qfi},
                {"qcrb", finite_or_null(r.qcrb)},
                {"method", to_string(r.method)},
                {"truncation_tail", r.truncation_tail},
                {"convention", r.convention_note}};
  };
  json out{{"cutoff", c.cutoff}, {"variance_form", report(c.variance)}};
  if (c.moment) {
    out["moment_form"] = report(*c.moment);
    out["discrepancy"] = c.discrepancy;
  }
  return out;
}

void write(std::ostream& out, const std::vector<FixedTotalRow>& rows, OutputFormat format) {
  switch (format) {
    case OutputFormat::json: out << to_json(rows).dump(2) << '\n'; break;
    case OutputFormat::csv: write_csv(out, kFixedHeader, fixed_cells(rows, kExact)); break;
    case OutputFormat::table: write_table(out, kFixedHeader, fixed_cells(rows, kHuman)); break;
  }
}

void write(std::ostream& out, const std::vector<MeanRow>& rows, OutputFormat format) {
  switch (format) {
    case OutputFormat::json: out << to_json(rows).dump(2) << '\n'; break;
    case OutputFormat::csv: write_csv(out, kMeanHeader, mean_cells(rows, kExact)); break;
    case OutputFormat::table: write_table(out, kMeanHeader, mean_cells(rows, kHuman)); break;
  }
}

void write(std::ostream& out, const QfiComparison& c, OutputFormat format) {
  if (format == OutputFormat::json) {
    out << to_json(c).dump(2) << '\n';
    return;
  }
  const int digits = format == OutputFormat::csv ? kExact : kHuman;
  std::vector<std::vector<std::string>> rows{
      {"variance_form", format_number(c.variance.qfi, digits), format_number(c.variance.qcrb, digits),
       format_number(c.variance.truncation_tail, digits)}};
  if (c.moment) {
    rows.push_back({"moment_form", format_number(c.moment->qfi, digits),
                    format_number(c.moment->qcrb, digits),
                    format_number(c.moment->truncation_tail, digits)});
  }
  const std::vector<std::string> header{"method", "qfi", "qcrb", "tail"};
  if (format == OutputFormat::csv) {
    write_csv(out, header, rows);
  } else {
    write_table(out, header, rows);
    if (c.moment) out << "discrepancy " << format_number(c.discrepancy, kHuman) << '\n';
    out << c.variance.convention_note << '\n';
  }
}

}  // namespace qfi
