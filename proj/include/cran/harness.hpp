#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cran/adf.hpp"
#include "cran/coordination.hpp"
#include "cran/scenario.hpp"
#include "cran/types.hpp"

namespace cran {

enum class CsiMode { Instantaneous, Statistical };

enum class Scheme { Bcd, Random, Exhaustive };

std::string to_string(CsiMode m);
std::string to_string(Scheme s);

struct PathlossParams {
  double exponent = 3.5;
  double reference_gain = 1e9;  // unit gain near 375 m under the default exponent
  double min_distance = 1.0;
};

struct ExperimentConfig {
  int num_rrhs = 16;      // N
  int num_domains = 2;    // A
  int antennas = 4;       // M
  int users_per_rrh = 2;  // J
  int clusters_per_domain = 1;  // C
  std::vector<double> snr_grid_db = {0, 5, 10, 15, 20, 25, 30};
  int trials = 100;
  int realizations = 1;  // fading draws per trial
  std::uint64_t seed = 1;
  CsiMode csi_mode = CsiMode::Instantaneous;
  std::vector<Scheme> schemes = {Scheme::Bcd, Scheme::Random, Scheme::Exhaustive};
  bool relaxed_bound = false;  // fill the f_lower_bound column
  LoadingSpec loading;  // empty -> equal loading from (N, A)
  WmmseOptions wmmse;
  int restarts = 20;
  int max_sweeps = 50;
  FadingMode fading = FadingMode::IidPathloss;
  PathlossParams pathloss;
  double area_side = 1000.0;
  bool record_wall_time = false;  // off keeps sweep output byte-reproducible
  std::uint64_t exhaustive_cap = 10'000'000;

  int num_users() const { return num_rrhs * users_per_rrh; }
  LoadingSpec effective_loading() const;
  void validate() const;
};

ExperimentConfig config_from_json(std::istream& is);
ExperimentConfig config_from_json_file(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

struct ResultRow {
  std::string scheme;
  std::string csi_mode;
  double snr_db = 0.0;
  int trial = 0;
  double sum_rate = 0.0;
  double leakage_f = 0.0;
  std::optional<double> f_lower_bound;
  double wall_time_ms = 0.0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

ResultTable run_experiment(const ExperimentConfig& cfg);

struct SummaryRow {
  std::string scheme;
  std::string csi_mode;
  double snr_db = 0.0;
  double mean_sum_rate = 0.0;
  double mean_leakage_f = 0.0;
  std::optional<double> mean_f_lower_bound;
  std::optional<double> inst_stat_gap;  // (R_inst - R_stat) / R_inst
};

std::vector<SummaryRow> summarize(const ResultTable& table);

void write_result_csv(std::ostream& os, const ResultTable& table);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

/// RFC-4180 field quoting; floats print with 9 significant digits.
std::string csv_escape(const std::string& field);
std::string format_float(double v);

}  // namespace cran
