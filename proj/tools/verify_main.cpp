#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fermidet/suites.hpp"

namespace {

// Write-then-rename so readers never observe a partial report.
void write_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move " + tmp + " into place");
}

void apply_config_file(const std::string& path, fermidet::suites::Options& opt) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  nlohmann::json cfg = nlohmann::json::parse(in);
  if (cfg.contains("seed")) opt.seed = cfg["seed"].get<std::uint64_t>();
  if (cfg.contains("trials")) opt.trials = cfg["trials"].get<int>();
  if (cfg.contains("threads")) opt.threads = cfg["threads"].get<int>();
  if (cfg.contains("model")) opt.model = cfg["model"].get<std::string>();
  if (cfg.contains("d")) opt.d = cfg["d"].get<int>();
  if (cfg.contains("L")) opt.L = cfg["L"].get<int>();
  if (cfg.contains("beta")) opt.beta = cfg["beta"].get<double>();
  if (cfg.contains("epsilon_reg")) opt.epsilon_reg = cfg["epsilon_reg"].get<double>();
  if (cfg.contains("dispersion")) opt.dispersion = cfg["dispersion"].get<std::string>();
  if (cfg.contains("mu")) opt.mu = cfg["mu"].get<double>();
  if (cfg.contains("scaling")) opt.scaling = cfg["scaling"].get<std::string>();
  if (cfg.contains("scaling_eps")) opt.scaling_eps = cfg["scaling_eps"].get<double>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fermidet verification suites"};
  app.get_formatter()->column_width(34);

  fermidet::suites::Options opt;
  if (const char* env_seed = std::getenv("FERMIDET_SEED")) {
    try {
      opt.seed = std::stoull(env_seed);
    } catch (const std::exception&) {
      std::cerr << "invalid FERMIDET_SEED: " << env_seed << "\n";
      return 2;
    }
  }

  std::string suite;
  std::string out_path;
  std::string format = "json";
  std::string config_path;
  int tau_steps = 64;

  std::vector<std::string> names = fermidet::suites::suite_names();
  names.push_back("all");
  names.push_back("covariance-table");
  app.add_option("suite", suite, "suite to run, \"all\", or \"covariance-table\"")
      ->required()
      ->check(CLI::IsMember(names));
  app.add_option("--config", config_path, "JSON config file; explicit flags override it");
  auto* seed_opt = app.add_option("--seed", opt.seed, "RNG seed");
  auto* trials_opt = app.add_option("--trials", opt.trials, "trial budget for randomized suites");
  auto* threads_opt = app.add_option("--threads", opt.threads, "worker threads for trial loops");
  auto* model_opt =
      app.add_option("--model", opt.model, "metal1d | insulator1d | metal2d | custom")
          ->check(CLI::IsMember({"metal1d", "insulator1d", "metal2d", "custom"}));
  auto* d_opt = app.add_option("--d", opt.d, "spatial dimension (custom model)");
  auto* l_opt = app.add_option("--L", opt.L, "lattice side length");
  auto* beta_opt = app.add_option("--beta", opt.beta, "inverse temperature");
  auto* eps_opt = app.add_option("--epsilon-reg", opt.epsilon_reg,
                                 "dispersion regularization scale (0: automatic)");
  auto* disp_opt =
      app.add_option("--dispersion", opt.dispersion, "cosine | constant (custom model)")
          ->check(CLI::IsMember({"cosine", "constant"}));
  auto* mu_opt = app.add_option("--mu", opt.mu, "chemical potential / constant level");
  auto* scal_opt = app.add_option("--scaling", opt.scaling, "unit | shell (custom model)")
                       ->check(CLI::IsMember({"unit", "shell"}));
  auto* seps_opt = app.add_option("--scaling-eps", opt.scaling_eps, "shell scaling width");
  app.add_option("--out", out_path, "report file (default: stdout)");
  app.add_option("--format", format, "json | csv (csv only for covariance-table)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tau-steps", tau_steps, "time resolution of covariance-table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Bad flags and unknown names are configuration errors: exit 2
    // (app.exit still prints help text; --help itself stays exit 0).
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      fermidet::suites::Options from_file = opt;
      apply_config_file(config_path, from_file);
      // Flags given on the command line win over file values.
      if (!*seed_opt) opt.seed = from_file.seed;
      if (!*trials_opt) opt.trials = from_file.trials;
      if (!*threads_opt) opt.threads = from_file.threads;
      if (!*model_opt) opt.model = from_file.model;
      if (!*d_opt) opt.d = from_file.d;
      if (!*l_opt) opt.L = from_file.L;
      if (!*beta_opt) opt.beta = from_file.beta;
      if (!*eps_opt) opt.epsilon_reg = from_file.epsilon_reg;
      if (!*disp_opt) opt.dispersion = from_file.dispersion;
      if (!*mu_opt) opt.mu = from_file.mu;
      if (!*scal_opt) opt.scaling = from_file.scaling;
      if (!*seps_opt) opt.scaling_eps = from_file.scaling_eps;
    }

    std::string payload;
    bool passed = true;
    if (suite == "covariance-table") {
      if (format == "csv") {
        payload = fermidet::suites::covariance_csv(opt, tau_steps);
      } else {
        nlohmann::ordered_json j;
        j["artifact"] = "fermidet 1.0.0";
        j["suite"] = "covariance-table";
        j["csv"] = fermidet::suites::covariance_csv(opt, tau_steps);
        payload = j.dump(2) + "\n";
      }
    } else {
      if (format == "csv")
        throw std::invalid_argument("csv format is only available for covariance-table");
      nlohmann::ordered_json report = fermidet::suites::run_suite(suite, opt);
      passed = fermidet::suites::report_passed(report);
      payload = report.dump(2) + "\n";
    }

    if (out_path.empty())
      std::cout << payload;
    else
      write_atomic(out_path, payload);
    return passed ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
