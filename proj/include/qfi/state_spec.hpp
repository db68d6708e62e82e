#pragma once

// JSON state specifications accepted by the command-line tool.
//
//   {"type": "number",          "n": 3,                       "cutoff": 8}
//   {"type": "coherent",        "alpha": 1.5 | [re, im] | {"re": .., "im": ..}}
//   {"type": "squeezed_vacuum", "r": 0.88, "theta": 0.0}      gamma = r e^{i theta}
//   {"type": "squeezed_vacuum", "mean_photons": 1.0, "theta": 3.14159...}
//   {"type": "twin_fock",       "N": 4, "exchange": false}
//   {"type": "noon",            "N": 3}
//   {"type": "optimal_mean",    "N_mean": 2.0}
//
// Optional on every spec: "cutoff" (falls back to the caller's default) and
// "cutoff_policy": "reject" | "auto". The first three types are single-mode;
// the last three are two-mode.

#include <string>

#include <json.hpp>

#include "qfi/fock.hpp"
#include "qfi/states.hpp"

namespace qfi {

// Malformed spec; `path` names the offending field, e.g. "$.a.alpha.re".
class SpecError : public Error {
 public:
  SpecError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct SpecDefaults {
  int cutoff = 64;
  FactoryOptions factory{};
};

bool is_single_mode_spec(const nlohmann::json& spec, const std::string& path = "$");

SingleModeState build_single_mode(const nlohmann::json& spec, const SpecDefaults& defaults,
                                  const std::string& path = "$");

/// Two-mode specs, or {"a": <single-mode>, "b": <single-mode>} for a product.
TwoModeState build_two_mode(const nlohmann::json& spec, const SpecDefaults& defaults,
                            const std::string& path = "$");

/// Parses JSON text, or the contents of a file when `text` starts with '@'.
nlohmann::json load_spec(const std::string& text);

}  // namespace qfi
