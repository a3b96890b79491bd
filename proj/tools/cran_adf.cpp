// Command-line front end: ADF solving on coupling-matrix CSVs and seeded
// Monte Carlo experiment sweeps.
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cran/adf.hpp"
#include "cran/coupling.hpp"
#include "cran/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInfeasible = 2;

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw cran::ConfigError("cannot open output file: " + path);
  return file;
}

cran::LoadingSpec make_loading(int num_rrhs, int num_domains,
                               const std::vector<double>& gamma) {
  if (gamma.empty()) return cran::LoadingSpec::equal(num_rrhs, num_domains);
  if (static_cast<int>(gamma.size()) != num_domains) {
    throw cran::ConfigError("--gamma needs one value per AD");
  }
  cran::LoadingSpec spec;
  spec.beta.assign(num_domains, cran::Vec::Ones(num_rrhs));
  spec.gamma = Eigen::Map<const cran::Vec>(gamma.data(), gamma.size());
  return spec;
}

void print_assignment(std::ostream& os, const cran::Assignment& a) {
  for (int k = 0; k < a.num_domains(); ++k) {
    os << k << ':';
    const auto members = a.members(k);
    for (std::size_t p = 0; p < members.size(); ++p) {
      os << (p ? "," : " ") << members[p];
    }
    os << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cloud-RAN antenna domain formation toolkit"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand(
      "solve", "Run block-coordinate descent on a coupling matrix CSV");
  std::string psi_path, out_path;
  int num_domains = 2;
  std::vector<double> gamma;
  std::uint64_t seed = 1;
  int restarts = 20;
  int max_sweeps = 50;
  solve->add_option("psi", psi_path, "coupling matrix CSV")->required();
  solve->add_option("--ads", num_domains, "number of antenna domains");
  solve->add_option("--gamma", gamma, "per-AD loads (default: equal split)");
  solve->add_option("--seed", seed, "restart seed");
  solve->add_option("--restarts", restarts, "random restarts");
  solve->add_option("--max-sweeps", max_sweeps, "sweep limit");
  solve->add_option("--out", out_path, "output file (default: stdout)");

  // exhaustive
  auto* exhaustive = app.add_subcommand(
      "exhaustive", "Globally optimal assignment by enumeration");
  exhaustive->add_option("psi", psi_path, "coupling matrix CSV")->required();
  exhaustive->add_option("--ads", num_domains, "number of antenna domains");
  exhaustive->add_option("--gamma", gamma, "per-AD loads");
  std::uint64_t cap = 10'000'000;
  exhaustive->add_option("--cap", cap, "enumeration cap");
  exhaustive->add_option("--out", out_path, "output file");

  // bound
  auto* bound = app.add_subcommand(
      "bound", "Lower bound from the continuous relaxation");
  bound->add_option("psi", psi_path, "coupling matrix CSV")->required();
  bound->add_option("--ads", num_domains, "number of antenna domains");
  bound->add_option("--gamma", gamma, "per-AD loads for the random init");
  bound->add_option("--seed", seed, "init seed");
  bound->add_option("--max-sweeps", max_sweeps, "sweep limit");
  bound->add_option("--out", out_path, "output file");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Seeded Monte Carlo sweep over SNR, emits a result CSV");
  std::string config_path, summary_path, schemes_csv, csi;
  bool timing = false;
  bool seed_given = false;
  sweep->add_option("--config", config_path, "experiment config JSON")
      ->required();
  sweep->add_option("--out", out_path, "result CSV (default: stdout)");
  sweep->add_option("--summary", summary_path, "also write aggregated CSV");
  sweep->add_option("--seed", seed, "override config seed")
      ->each([&](const std::string&) { seed_given = true; });
  sweep->add_option("--schemes", schemes_csv,
                    "override schemes, comma-separated");
  sweep->add_option("--csi", csi, "override csi_mode");
  sweep->add_flag("--timing", timing, "record wall times (non-reproducible)");

  // demo
  auto* demo = app.add_subcommand("demo", "Print the default experiment config");
  demo->add_option("--out", out_path, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ofstream file;
    std::ostream& os = open_out(file, out_path);

    if (solve->parsed()) {
      const cran::Mat psi = cran::read_psi_csv_file(psi_path);
      const auto loading =
          make_loading(static_cast<int>(psi.rows()), num_domains, gamma);
      const cran::BcdResult r =
          cran::solve_bcd_restarts(psi, loading, restarts, seed, max_sweeps);
      print_assignment(os, r.assignment);
      os << "f: " << cran::format_float(r.trace.f_history.back()) << '\n';
      os << "f_history:";
      for (std::size_t p = 0; p < r.trace.f_history.size(); ++p) {
        os << (p ? "," : " ") << cran::format_float(r.trace.f_history[p]);
      }
      os << '\n';
    } else if (exhaustive->parsed()) {
      const cran::Mat psi = cran::read_psi_csv_file(psi_path);
      const auto loading =
          make_loading(static_cast<int>(psi.rows()), num_domains, gamma);
      const auto [assignment, f] = cran::solve_exhaustive(psi, loading, cap);
      print_assignment(os, assignment);
      os << "f: " << cran::format_float(f) << '\n';
    } else if (bound->parsed()) {
      const cran::Mat psi = cran::read_psi_csv_file(psi_path);
      const int n = static_cast<int>(psi.rows());
      const auto loading = make_loading(n, num_domains, gamma);
      cran::FractionalAssignment init;
      init.w = cran::random_assignment(seed, n, loading).x;
      const cran::RelaxedResult r =
          cran::solve_relaxed_bcd(psi, init, max_sweeps);
      os << "f_lower_bound: " << cran::format_float(r.f_lower_bound) << '\n';
      os << "sweeps: " << r.sweeps << '\n';
    } else if (sweep->parsed()) {
      cran::ExperimentConfig cfg = cran::config_from_json_file(config_path);
      if (seed_given) cfg.seed = seed;
      if (!csi.empty()) {
        if (csi == "instantaneous") {
          cfg.csi_mode = cran::CsiMode::Instantaneous;
        } else if (csi == "statistical") {
          cfg.csi_mode = cran::CsiMode::Statistical;
        } else {
          throw cran::ConfigError("unknown --csi value: " + csi);
        }
      }
      if (!schemes_csv.empty()) {
        cfg.schemes.clear();
        cfg.relaxed_bound = false;
        std::stringstream ss(schemes_csv);
        std::string token;
        while (std::getline(ss, token, ',')) {
          if (token == "bcd") {
            cfg.schemes.push_back(cran::Scheme::Bcd);
          } else if (token == "random") {
            cfg.schemes.push_back(cran::Scheme::Random);
          } else if (token == "exhaustive") {
            cfg.schemes.push_back(cran::Scheme::Exhaustive);
          } else if (token == "relaxed_bound") {
            cfg.relaxed_bound = true;
          } else {
            throw cran::ConfigError("unknown scheme: " + token);
          }
        }
      }
      if (timing) cfg.record_wall_time = true;
      const cran::ResultTable table = cran::run_experiment(cfg);
      cran::write_result_csv(os, table);
      if (!summary_path.empty()) {
        std::ofstream sf(summary_path, std::ios::binary);
        if (!sf) {
          throw cran::ConfigError("cannot open summary file: " + summary_path);
        }
        cran::write_summary_csv(sf, cran::summarize(table));
      }
    } else if (demo->parsed()) {
      os << cran::config_to_json(cran::ExperimentConfig{});
    }
  } catch (const cran::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
