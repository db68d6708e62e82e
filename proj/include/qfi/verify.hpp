#pragma once

// Acceptance checks for the whole toolkit. Every tolerance is pinned below or
// in verify.cpp; the checks never adapt them to make a run pass.

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfi/optics.hpp"

namespace qfi {

enum class VerifyLevel { fast, full };

VerifyLevel parse_verify_level(const std::string& name);

struct CheckResult {
  std::string id;  // "1".."12"; diagnostics carry a suffix ("5b")
  std::string name;
  bool passed = false;
  bool counted = true;  // diagnostics do not affect the verdict
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct VerifyConfig {
  VerifyLevel level = VerifyLevel::full;
  // Splitter under test; the checks that do not exercise it directly use the
  // shared balanced one.
  const BeamSplitter* splitter = nullptr;
  std::uint64_t seed = 20140101;
  int optimizer_restarts = 32;
  // Called after each check completes (progress output).
  std::function<void(const CheckResult&)> on_result;
};

// Individual checks. Each catches library errors and reports them as a
// failure with the message in `detail`.
CheckResult check_fixed_total_optimum();
CheckResult check_splitter_amplitudes(const BeamSplitter& splitter);
CheckResult check_noon_versus_twin_fock();
CheckResult check_dual_squeezed_qfi();
std::vector<CheckResult> check_splitter_eigenstate(const BeamSplitter& splitter);
CheckResult check_split_optimum_closed_form(const BeamSplitter& splitter);
CheckResult check_product_form_equivalence(std::uint64_t seed, const BeamSplitter& splitter);
CheckResult check_quadrature_bound(std::uint64_t seed);
CheckResult check_photon_counting_saturation();
CheckResult check_moment_estimator();
CheckResult check_optimizer(std::uint64_t seed, int restarts);

/// Runs the checks for `level` (fast: 1-8, full: 1-12).
std::vector<CheckResult> run_verification(const VerifyConfig& config);

bool all_passed(const std::vector<CheckResult>& results);

void write_lines(std::ostream& out, const std::vector<CheckResult>& results);
std::string format_line(const CheckResult& result);
nlohmann::json to_json(const std::vector<CheckResult>& results);

}  // namespace qfi
