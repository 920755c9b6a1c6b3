#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "fermidet/model.hpp"

namespace fermidet::suites {

struct Options {
  std::uint64_t seed = 12345;
  int trials = 10000;
  int threads = 1;
  std::string model = "metal1d";  // metal1d | insulator1d | metal2d | custom
  int d = 1;
  int L = 8;
  double beta = 2.0;
  double epsilon_reg = 0.0;
  std::string dispersion = "cosine";  // custom models: cosine | constant
  double mu = 0.3;                    // cosine chemical potential / constant level
  std::string scaling = "unit";       // unit | shell
  double scaling_eps = 0.1;
};

/// Model resolution shared by CLI and suites.
LatticeModel make_model(const Options& opt);

std::vector<std::string> suite_names();

/// Runs one named suite (or "all"); the report carries the config echo,
/// the seed, and one record per assertion with observed/bound/margin/pass.
nlohmann::ordered_json run_suite(const std::string& name, const Options& opt);

bool report_passed(const nlohmann::ordered_json& report);

/// Covariance table rows (tau, x components, re, im) for CSV export.
std::string covariance_csv(const Options& opt, int tau_steps);

}  // namespace fermidet::suites
