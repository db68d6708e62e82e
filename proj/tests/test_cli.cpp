#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <sys/wait.h>

#include "qfi/commands.hpp"
#include "qfi/state_spec.hpp"

using namespace qfi;
using nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(QFI_BINARY) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

TEST(FixedTable, NamedRows) {
  const auto rows = table_fixed_total(20);
  ASSERT_EQ(rows.size(), 20u);
  EXPECT_EQ(rows[1].f_twin_fock, 4.0);
  EXPECT_EQ(rows[1].f_noon, 4.0);
  EXPECT_EQ(rows[1].noon_over_twin, 1.0);
  EXPECT_EQ(rows[2].f_twin_fock, 7.0);
  EXPECT_EQ(rows[2].f_noon, 9.0);
  EXPECT_EQ(rows[2].n_opt, (std::vector<int>{1, 2}));
  EXPECT_EQ(rows[19].f_twin_fock, 220.0);
  EXPECT_EQ(rows[19].f_noon, 400.0);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.f_twin_fock_simulated, r.f_twin_fock, 1e-9);
    EXPECT_NEAR(r.f_noon_simulated, r.f_noon, 1e-9);
    EXPECT_DOUBLE_EQ(r.qcrb_twin, 1.0 / r.f_twin_fock);
  }
  EXPECT_THROW(table_fixed_total(0), std::invalid_argument);
}

TEST(MeanTable, ClosedFormAgreementAndTruncationRows) {
  MeanTableOptions options;
  options.cutoff = 64;
  const auto rows = table_mean_total({0.0, 2.0, 4.0}, options);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(*rows[0].f_simulated, 0.0);
  EXPECT_NEAR(*rows[1].f_simulated, 8.0, 1e-7);
  // N = 4 at D = 64 exceeds the default tail tolerance: reported, not thrown.
  EXPECT_FALSE(rows[2].f_simulated.has_value());
  EXPECT_GT(rows[2].required_cutoff, 64);
  EXPECT_FALSE(rows[2].error.empty());

  options.tail_tolerance = 1.0;
  const auto loose = table_mean_total({4.0}, options);
  EXPECT_LT(*loose[0].rel_dev, 1e-4);
  options.cutoff = 128;
  options.tail_tolerance = 1e-10;
  const auto wide = table_mean_total({4.0}, options);
  EXPECT_LT(*wide[0].rel_dev, 1e-5);

  const auto bad = table_mean_total({-1.0}, options);
  EXPECT_FALSE(bad[0].error.empty());
}

TEST(CompareQfi, NamedInputs) {
  auto number = [](int n) { return json{{"type", "number"}, {"n", n}, {"cutoff", 4}}; };
  const auto fock = compare_qfi(number(1), number(1), 64);
  EXPECT_NEAR(fock.variance.qfi, 4.0, 1e-12);
  ASSERT_TRUE(fock.moment.has_value());
  EXPECT_NEAR(fock.moment->qfi, 4.0, 1e-12);

  const auto coh = compare_qfi(json{{"type", "coherent"}, {"alpha", 2.0}},
                               json{{"type", "number"}, {"n", 0}}, 64);
  EXPECT_NEAR(coh.variance.qfi, 4.0, 1e-9);
  EXPECT_NEAR(coh.moment->qfi, 4.0, 1e-9);

  const auto sq = compare_qfi(json{{"type", "squeezed_vacuum"}, {"mean_photons", 1.0}, {"theta", 3.141592653589793}},
                              json{{"type", "squeezed_vacuum"}, {"mean_photons", 1.0}}, 64);
  EXPECT_NEAR(sq.variance.qfi, 8.0, 8e-8);
  EXPECT_LT(sq.discrepancy, 1e-10);

  const auto noon = compare_qfi(json{{"type", "noon"}, {"N", 5}, {"cutoff", 6}}, std::nullopt, 64);
  EXPECT_NEAR(noon.variance.qfi, 25.0, 1e-10);
  EXPECT_FALSE(noon.moment.has_value());

  const auto opt = compare_qfi(json{{"type", "optimal_mean"}, {"N_mean", 2.0}}, std::nullopt, 64);
  EXPECT_NEAR(opt.variance.qfi, 8.0, 8e-8);
  ASSERT_TRUE(opt.moment.has_value());
}

TEST(Spec, ErrorsNameTheField) {
  const SpecDefaults defaults;
  auto path_of = [&](const json& spec) {
    try {
      build_two_mode(spec, defaults);
    } catch (const SpecError& e) {
      return e.path();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(path_of(json{{"a", {{"type", "coherent"}, {"alpha", {{"re", "x"}}}}}, {"b", {{"type", "number"}, {"n", 0}}}}),
            "$.a.alpha.re");
  EXPECT_EQ(path_of(json{{"type", "twin_fock"}}), "$.N");
  EXPECT_EQ(path_of(json{{"type", "noon"}, {"N", 2.5}}), "$.N");
  EXPECT_EQ(path_of(json{{"type", "laser"}}), "$.type");
  EXPECT_EQ(path_of(json{{"type", "number"}, {"n", 1}}), "$.type");
  EXPECT_EQ(path_of(json{{"type", "optimal_mean"}, {"N_mean", 1.0}, {"cutoff_policy", "maybe"}}),
            "$.cutoff_policy");
  EXPECT_EQ(path_of(json{{"type", "twin_fock"}, {"N", 2}, {"cutoff", 0}}), "$.cutoff");
  EXPECT_THROW(load_spec("{not json"), SpecError);
}

TEST(Spec, AutoPolicyRaisesCutoff) {
  const auto s = build_two_mode(json{{"type", "optimal_mean"}, {"N_mean", 4.0}, {"cutoff", 32}, {"cutoff_policy", "auto"}},
                                SpecDefaults{});
  EXPECT_EQ(s.cutoff(), 128);
}

TEST(Formats, CsvAndJsonCarryIdenticalNumbers) {
  const auto rows = table_fixed_total(12);
  std::ostringstream csv, js;
  write(csv, rows, OutputFormat::csv);
  write(js, rows, OutputFormat::json);
  const auto cells = parse_csv(csv.str());
  const json parsed = json::parse(js.str());
  ASSERT_EQ(cells.size(), rows.size() + 1);
  const auto& header = cells[0];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] == "n_opt" || header[j] == "N") continue;
      EXPECT_EQ(std::stod(cells[i + 1][j]), parsed[i][header[j]].get<double>()) << header[j];
    }
  }

  MeanTableOptions options;
  options.cutoff = 64;
  const auto mean_rows = table_mean_total({0.5, 1.0, 2.0}, options);
  std::ostringstream mcsv, mjs;
  write(mcsv, mean_rows, OutputFormat::csv);
  write(mjs, mean_rows, OutputFormat::json);
  const auto mcells = parse_csv(mcsv.str());
  const json mparsed = json::parse(mjs.str());
  for (std::size_t i = 0; i < mean_rows.size(); ++i) {
    for (const char* key : {"N_mean", "F_closed_form", "F_simulated", "rel_dev", "tail", "qcrb"}) {
      const auto it = std::find(mcells[0].begin(), mcells[0].end(), key);
      const auto j = static_cast<std::size_t>(it - mcells[0].begin());
      EXPECT_EQ(std::stod(mcells[i + 1][j]), mparsed[i][key].get<double>()) << key;
    }
  }
}

TEST(Formats, HumanTableUsesSixDigits) {
  EXPECT_EQ(format_number(1.0 / 3.0, 6), "0.333333");
  EXPECT_EQ(format_number(1.0 / 3.0, 17), "0.33333333333333331");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity(), 6), "inf");
}

TEST(Binary, TablesAndExitCodes) {
  const auto fixed = run_cli("--format csv table-fixed-n 3");
  EXPECT_EQ(fixed.status, 0);
  EXPECT_NE(fixed.out.find("\n3,1;2,7,"), std::string::npos) << fixed.out;

  const auto again = run_cli("--format csv table-fixed-n 3");
  EXPECT_EQ(again.out, fixed.out);

  const auto qfi = run_cli("--format json qfi '{\"type\":\"number\",\"n\":1,\"cutoff\":3}' --b '{\"type\":\"number\",\"n\":1,\"cutoff\":3}'");
  EXPECT_EQ(qfi.status, 0) << qfi.out;
  const json parsed = json::parse(qfi.out);
  EXPECT_NEAR(parsed["variance_form"]["qfi"].get<double>(), 4.0, 1e-12);
  EXPECT_NEAR(parsed["moment_form"]["qfi"].get<double>(), 4.0, 1e-12);

  EXPECT_EQ(run_cli("--format xml table-fixed-n 3").status, 2);
  EXPECT_EQ(run_cli("--mz-convention sideways table-fixed-n 3").status, 2);
  EXPECT_EQ(run_cli("").status, 2);
  const auto bad = run_cli("qfi '{\"type\":\"noon\"}'");
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.out.find("$.N"), std::string::npos) << bad.out;
  const auto trunc = run_cli("--cutoff 16 qfi '{\"type\":\"optimal_mean\",\"N_mean\":2}'");
  EXPECT_EQ(trunc.status, 1);
  EXPECT_NE(trunc.out.find("--cutoff"), std::string::npos) << trunc.out;

  const auto mean = run_cli("--cutoff 64 --format csv table-mean-n 0 2 4");
  EXPECT_EQ(mean.status, 0);
  EXPECT_NE(mean.out.find("required"), std::string::npos);
}

}  // namespace
