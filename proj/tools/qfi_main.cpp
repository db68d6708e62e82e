#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfi/commands.hpp"
#include "qfi/fisher.hpp"
#include "qfi/optimize.hpp"
#include "qfi/state_spec.hpp"
#include "qfi/states.hpp"
#include "qfi/verify.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

qfi::MzConvention parse_convention(const std::string& name) {
  return name == "same" ? qfi::MzConvention::same_B : qfi::MzConvention::inverse_B;
}

std::vector<double> parse_grid(const std::string& text) {
  // "lo:hi:count" or a comma-separated list
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0;
    int count = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1) {
      throw std::invalid_argument("phase grid must be lo:hi:count");
    }
    for (int k = 0; k < count; ++k) grid.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
    return grid;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    grid.push_back(std::stod(text.substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-estimation Fisher information toolkit for two-mode interferometers"};
  app.require_subcommand(1);

  int cutoff = 64;
  std::uint64_t seed = 20140101;
  int restarts = 32;
  std::string convention = "inverse";
  std::string format = "table";
  app.add_option("--cutoff", cutoff, "Fock cutoff D per mode")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for random checks and optimizer restarts")->capture_default_str();
  app.add_option("--restarts", restarts, "Optimizer restarts")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--mz-convention", convention, "Recombining splitter: same (B) or inverse (B^dagger)")
      ->capture_default_str()
      ->check(CLI::IsMember({"same", "inverse"}));
  app.add_option("--format", format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"table", "csv", "json"}));

  auto* fixed = app.add_subcommand("table-fixed-n", "QFI of twin-Fock and N00N inputs for N = 1..N_max");
  int max_total = 20;
  fixed->add_option("N_max", max_total, "Largest total photon number")->capture_default_str()->check(CLI::PositiveNumber);

  auto* mean = app.add_subcommand("table-mean-n", "Dual squeezed-vacuum QFI against N(N+2)");
  std::vector<double> means{0.5, 1.0, 2.0, 4.0};
  bool auto_raise = false;
  mean->add_option("values", means, "Mean total photon numbers")->capture_default_str()->check(CLI::NonNegativeNumber);
  mean->add_flag("--auto-cutoff", auto_raise, "Raise the cutoff until the tail is below 1e-10");

  auto* qfi_cmd = app.add_subcommand("qfi", "Score a JSON-specified input with both QFI formulas");
  std::string spec_a, spec_b;
  qfi_cmd->add_option("spec", spec_a, "Two-mode spec, or the mode-a spec with --b (JSON text or @file)")->required();
  qfi_cmd->add_option("--b", spec_b, "Mode-b spec for a product input (JSON text or @file)");

  auto* cfi_cmd = app.add_subcommand("cfi", "Photon-counting classical Fisher information over a phase grid");
  std::string cfi_spec, grid_text = "0.01:3.13:64";
  cfi_cmd->add_option("spec", cfi_spec, "Two-mode spec (JSON text or @file)")->required();
  cfi_cmd->add_option("--grid", grid_text, "Phase grid lo:hi:count or a,b,c")->capture_default_str();

  auto* search_cmd = app.add_subcommand("optimize", "Random-restart search for the best product input at fixed mean N");
  double search_mean = 2.0;
  search_cmd->add_option("N_mean", search_mean, "Mean total photon number")->capture_default_str()->check(CLI::NonNegativeNumber);

  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance checks");
  std::string level = "fast", report_path;
  verify_cmd->add_option("--level", level, "fast (1-8) or full (1-12)")
      ->capture_default_str()
      ->check(CLI::IsMember({"fast", "full"}));
  verify_cmd->add_option("--report", report_path, "Also write the JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const qfi::OutputFormat out_format = qfi::parse_output_format(format);
  const qfi::MzConvention conv = parse_convention(convention);

  try {
    if (*fixed) {
      qfi::write(std::cout, qfi::table_fixed_total(max_total), out_format);
      return 0;
    }
    if (*mean) {
      qfi::MeanTableOptions options;
      options.cutoff = cutoff;
      options.auto_raise = auto_raise;
      const auto rows = qfi::table_mean_total(means, options);
      qfi::write(std::cout, rows, out_format);
      return 0;
    }
    if (*qfi_cmd) {
      std::optional<nlohmann::json> second;
      if (!spec_b.empty()) second = qfi::load_spec(spec_b);
      const auto result = qfi::compare_qfi(qfi::load_spec(spec_a), second, cutoff);
      qfi::write(std::cout, result, out_format);
      return 0;
    }
    if (*cfi_cmd) {
      const auto input = qfi::build_two_mode(qfi::load_spec(cfi_spec), qfi::SpecDefaults{cutoff, {}});
      const auto grid = parse_grid(grid_text);
      const auto scan = qfi::cfi_scan(input, grid, conv);
      const double qfi_value = qfi::qfi_variance(input).qfi;
      if (out_format == qfi::OutputFormat::json) {
        nlohmann::json out{{"qfi", qfi_value},
                           {"best_phi", scan.best_phi},
                           {"best_cfi", scan.best_value},
                           {"convention", convention},
                           {"phi", scan.phis},
                           {"cfi", scan.values}};
        std::cout << out.dump(2) << '\n';
      } else {
        const int digits = out_format == qfi::OutputFormat::csv ? 17 : 6;
        const char* sep = out_format == qfi::OutputFormat::csv ? "," : "  ";
        std::cout << (out_format == qfi::OutputFormat::csv ? "phi,cfi\n" : "         phi           cfi\n");
        for (std::size_t i = 0; i < scan.phis.size(); ++i) {
          std::string phi = qfi::format_number(scan.phis[i], digits);
          std::string cfi = qfi::format_number(scan.values[i], digits);
          if (out_format == qfi::OutputFormat::table) {
            phi.insert(0, phi.size() < 12 ? 12 - phi.size() : 0, ' ');
            cfi.insert(0, cfi.size() < 12 ? 12 - cfi.size() : 0, ' ');
          }
          std::cout << phi << sep << cfi << '\n';
        }
        if (out_format == qfi::OutputFormat::table) {
          std::cout << "QFI " << qfi::format_number(qfi_value, 6) << ", max CFI "
                    << qfi::format_number(scan.best_value, 6) << " at phi_d = "
                    << qfi::format_number(scan.best_phi, 6) << '\n';
        }
      }
      return 0;
    }
    if (*search_cmd) {
      qfi::SearchConfig config;
      config.seed = seed;
      config.restarts = restarts;
      const auto result = qfi::mean_constrained_search(search_mean, cutoff, config);
      nlohmann::json out{{"N_mean", search_mean},
                         {"cutoff", cutoff},
                         {"converged", result.converged},
                         {"best_qfi", result.best_qfi},
                         {"rescored_qfi", result.rescored_qfi},
                         {"bound", result.bound},
                         {"odd_mass_a", result.odd_mass_a},
                         {"odd_mass_b", result.odd_mass_b},
                         {"message", result.message}};
      if (out_format == qfi::OutputFormat::json) {
        nlohmann::json history = nlohmann::json::array();
        for (const auto& h : result.history) {
          history.push_back({{"seed", h.seed},
                             {"converged", h.converged},
                             {"accepted", h.accepted},
                             {"iterations", h.iterations},
                             {"constraint_residual", h.constraint_residual},
                             {"qfi", h.qfi},
                             {"rescored_qfi", h.rescored_qfi},
                             {"note", h.note}});
        }
        out["history"] = history;
        std::cout << out.dump(2) << '\n';
      } else {
        for (auto& [key, value] : out.items()) std::cout << key << ": " << value.dump() << '\n';
      }
      return result.converged ? 0 : kExitFailure;
    }
    if (*verify_cmd) {
      qfi::VerifyConfig config;
      config.level = qfi::parse_verify_level(level);
      config.seed = seed;
      config.optimizer_restarts = restarts;
      const bool json_out = out_format == qfi::OutputFormat::json;
      if (!json_out) {
        config.on_result = [](const qfi::CheckResult& r) { std::cout << qfi::format_line(r) << std::endl; };
      }
      const auto results = qfi::run_verification(config);
      const auto report = qfi::to_json(results);
      if (json_out) {
        std::cout << report.dump(2) << '\n';
      } else {
        std::vector<std::string> failing;
        for (const auto& r : results) {
          if (r.counted && !r.passed) failing.push_back(r.id + " " + r.name);
        }
        if (failing.empty()) {
          std::cout << "all checks passed\n";
        } else {
          std::cout << "failing:";
          for (const auto& f : failing) std::cout << " [" << f << "]";
          std::cout << '\n';
        }
      }
      if (!report_path.empty()) {
        std::ofstream file(report_path);
        file << report.dump(2) << '\n';
      }
      return qfi::all_passed(results) ? 0 : kExitFailure;
    }
  } catch (const qfi::SpecError& e) {
    std::cerr << "spec error at " << e.what() << '\n';
    return kExitUsage;
  } catch (const qfi::TruncationError& e) {
    std::cerr << "truncation error: " << e.what();
    if (e.required_cutoff() > 0) std::cerr << " (try --cutoff " << e.required_cutoff() << ")";
    std::cerr << '\n';
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
