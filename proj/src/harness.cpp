#include "cran/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cran/coupling.hpp"
#include "cran/evaluation.hpp"

namespace cran {

using json = nlohmann::json;

std::string to_string(CsiMode m) {
  return m == CsiMode::Instantaneous ? "instantaneous" : "statistical";
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Bcd: return "bcd";
    case Scheme::Random: return "random";
    case Scheme::Exhaustive: return "exhaustive";
  }
  return "?";
}

LoadingSpec ExperimentConfig::effective_loading() const {
  if (!loading.beta.empty()) return loading;
  return LoadingSpec::equal(num_rrhs, num_domains);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (schemes.empty() && !relaxed_bound) {
    throw ConfigError("schemes must be nonempty");
  }
  if (loading.beta.empty() && num_rrhs % num_domains != 0) {
    throw ConfigError("equal loading requires A | N");
  }
  if (snr_grid_db.empty()) throw ConfigError("snr_grid_db must be nonempty");
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
}

namespace {

CsiMode parse_csi(const std::string& s) {
  if (s == "instantaneous") return CsiMode::Instantaneous;
  if (s == "statistical") return CsiMode::Statistical;
  throw ConfigError("unknown csi_mode: " + s);
}

FadingMode parse_fading(const std::string& s) {
  if (s == "iid") return FadingMode::Iid;
  if (s == "iid_pathloss") return FadingMode::IidPathloss;
  throw ConfigError("unknown fading mode: " + s);
}

}  // namespace

ExperimentConfig config_from_json(std::istream& is) {
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.num_rrhs = j.value("N", cfg.num_rrhs);
    cfg.num_domains = j.value("A", cfg.num_domains);
    cfg.antennas = j.value("M", cfg.antennas);
    cfg.users_per_rrh = j.value("J", cfg.users_per_rrh);
    cfg.clusters_per_domain = j.value("C", cfg.clusters_per_domain);
    if (j.contains("snr_grid_db")) {
      cfg.snr_grid_db = j["snr_grid_db"].get<std::vector<double>>();
    }
    cfg.trials = j.value("trials", cfg.trials);
    cfg.realizations = j.value("realizations", cfg.realizations);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("csi_mode")) cfg.csi_mode = parse_csi(j["csi_mode"]);
    if (j.contains("schemes")) {
      cfg.schemes.clear();
      cfg.relaxed_bound = false;
      for (const std::string s : j["schemes"]) {
        if (s == "bcd") {
          cfg.schemes.push_back(Scheme::Bcd);
        } else if (s == "random") {
          cfg.schemes.push_back(Scheme::Random);
        } else if (s == "exhaustive") {
          cfg.schemes.push_back(Scheme::Exhaustive);
        } else if (s == "relaxed_bound") {
          cfg.relaxed_bound = true;
        } else {
          throw ConfigError("unknown scheme: " + s);
        }
      }
    }
    if (j.contains("loading")) {
      const auto& jl = j["loading"];
      for (const auto& b : jl["beta"]) {
        const auto vals = b.get<std::vector<double>>();
        cfg.loading.beta.push_back(
            Eigen::Map<const Vec>(vals.data(), vals.size()));
      }
      const auto g = jl["gamma"].get<std::vector<double>>();
      cfg.loading.gamma = Eigen::Map<const Vec>(g.data(), g.size());
    }
    if (j.contains("wmmse")) {
      cfg.wmmse.max_iters = j["wmmse"].value("max_iters", cfg.wmmse.max_iters);
      cfg.wmmse.tol = j["wmmse"].value("tol", cfg.wmmse.tol);
    }
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.max_sweeps = j.value("max_sweeps", cfg.max_sweeps);
    if (j.contains("fading")) cfg.fading = parse_fading(j["fading"]);
    if (j.contains("pathloss")) {
      const auto& jp = j["pathloss"];
      cfg.pathloss.exponent = jp.value("exponent", cfg.pathloss.exponent);
      cfg.pathloss.reference_gain =
          jp.value("reference_gain", cfg.pathloss.reference_gain);
      cfg.pathloss.min_distance =
          jp.value("min_distance", cfg.pathloss.min_distance);
    }
    cfg.area_side = j.value("area_side", cfg.area_side);
    cfg.record_wall_time = j.value("record_wall_time", cfg.record_wall_time);
    cfg.exhaustive_cap = j.value("exhaustive_cap", cfg.exhaustive_cap);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  return config_from_json(is);
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["N"] = cfg.num_rrhs;
  j["A"] = cfg.num_domains;
  j["M"] = cfg.antennas;
  j["J"] = cfg.users_per_rrh;
  j["C"] = cfg.clusters_per_domain;
  j["snr_grid_db"] = cfg.snr_grid_db;
  j["trials"] = cfg.trials;
  j["realizations"] = cfg.realizations;
  j["seed"] = cfg.seed;
  j["csi_mode"] = to_string(cfg.csi_mode);
  std::vector<std::string> schemes;
  for (Scheme s : cfg.schemes) schemes.push_back(to_string(s));
  if (cfg.relaxed_bound) schemes.push_back("relaxed_bound");
  j["schemes"] = schemes;
  j["wmmse"] = {{"max_iters", cfg.wmmse.max_iters}, {"tol", cfg.wmmse.tol}};
  j["restarts"] = cfg.restarts;
  j["max_sweeps"] = cfg.max_sweeps;
  j["fading"] = cfg.fading == FadingMode::Iid ? "iid" : "iid_pathloss";
  j["pathloss"] = {{"exponent", cfg.pathloss.exponent},
                   {"reference_gain", cfg.pathloss.reference_gain},
                   {"min_distance", cfg.pathloss.min_distance}};
  j["area_side"] = cfg.area_side;
  j["record_wall_time"] = cfg.record_wall_time;
  j["exhaustive_cap"] = cfg.exhaustive_cap;
  return j.dump(2) + "\n";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Assignment solve_scheme(Scheme scheme, const Mat& psi, const LoadingSpec& loading,
                        const ExperimentConfig& cfg, std::uint64_t scheme_seed) {
  switch (scheme) {
    case Scheme::Bcd:
      return solve_bcd_restarts(psi, loading, cfg.restarts, scheme_seed,
                                cfg.max_sweeps)
          .assignment;
    case Scheme::Random:
      return random_assignment(scheme_seed, cfg.num_rrhs, loading);
    case Scheme::Exhaustive:
      return solve_exhaustive(psi, loading, cfg.exhaustive_cap).first;
  }
  throw ConfigError("unknown scheme");
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const LoadingSpec loading = cfg.effective_loading();
  DeploymentParams dparams;
  dparams.num_rrhs = cfg.num_rrhs;
  dparams.num_users = cfg.num_users();
  dparams.antennas = cfg.antennas;
  dparams.users_per_rrh = cfg.users_per_rrh;
  dparams.area_side = cfg.area_side;

  const bool statistical = cfg.csi_mode == CsiMode::Statistical;
  const int num_schemes = static_cast<int>(cfg.schemes.size());
  const int num_snr = static_cast<int>(cfg.snr_grid_db.size());

  ResultTable table;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const std::uint64_t trial_seed =
        derive_seed(cfg.seed, 0x7472ULL, static_cast<std::uint64_t>(trial));
    const Deployment dep = drop_deployment(trial_seed, dparams);
    const PathlossSet pathloss =
        compute_pathloss(dep, cfg.pathloss.exponent, cfg.pathloss.reference_gain,
                         cfg.pathloss.min_distance);

    // Statistical CSI: one coupling matrix and one assignment per deployment,
    // reused across every fading realization of the trial.
    Mat psi_static;
    std::vector<Assignment> static_assignments(num_schemes);
    std::vector<double> static_solve_ms(num_schemes, 0.0);
    double static_bound = 0.0;
    if (statistical) {
      psi_static = coupling_statistical(pathloss, dep).psi;
      for (int s = 0; s < num_schemes; ++s) {
        const auto t0 = Clock::now();
        static_assignments[s] = solve_scheme(
            cfg.schemes[s], psi_static, loading, cfg,
            derive_seed(trial_seed, 0x7363ULL, static_cast<std::uint64_t>(s)));
        static_solve_ms[s] = ms_since(t0);
      }
      if (cfg.relaxed_bound) {
        FractionalAssignment init;
        init.w = random_assignment(derive_seed(trial_seed, 0x6c62ULL),
                                   cfg.num_rrhs, loading)
                     .x;
        static_bound =
            solve_relaxed_bcd(psi_static, init, cfg.max_sweeps).f_lower_bound;
      }
    }

    // Accumulators over fading realizations.
    std::vector<double> leakage(num_schemes, 0.0);
    std::vector<double> solve_ms(num_schemes, 0.0);
    Mat rate_sum = Mat::Zero(num_schemes, num_snr);
    Mat beam_ms = Mat::Zero(num_schemes, num_snr);
    double bound_sum = 0.0;

    for (int rz = 0; rz < cfg.realizations; ++rz) {
      const ChannelSet channels =
          draw_channels(trial_seed, rz, dep, cfg.fading,
                        cfg.fading == FadingMode::IidPathloss ? &pathloss : nullptr,
                        1.0);
      Mat psi;
      std::vector<Assignment> assignments(num_schemes);
      if (statistical) {
        psi = psi_static;
        assignments = static_assignments;
        bound_sum += static_bound;
      } else {
        psi = coupling_instantaneous(channels, dep).psi;
        for (int s = 0; s < num_schemes; ++s) {
          const auto t0 = Clock::now();
          assignments[s] = solve_scheme(
              cfg.schemes[s], psi, loading, cfg,
              derive_seed(trial_seed, 0x7363ULL, static_cast<std::uint64_t>(s),
                          static_cast<std::uint64_t>(rz)));
          solve_ms[s] += ms_since(t0);
        }
        if (cfg.relaxed_bound) {
          FractionalAssignment init;
          init.w = random_assignment(
                       derive_seed(trial_seed, 0x6c62ULL,
                                   static_cast<std::uint64_t>(rz)),
                       cfg.num_rrhs, loading)
                       .x;
          bound_sum += solve_relaxed_bcd(psi, init, cfg.max_sweeps).f_lower_bound;
        }
      }

      for (int s = 0; s < num_schemes; ++s) {
        leakage[s] += leakage_report(psi, assignments[s]);
        const ClusterPlan plan =
            kmeans_clusters(assignments[s], dep.rrh_positions,
                            cfg.clusters_per_domain, trial_seed);
        for (int q = 0; q < num_snr; ++q) {
          const double power = std::pow(10.0, cfg.snr_grid_db[q] / 10.0);
          const auto t0 = Clock::now();
          ChannelSet eval_channels = channels;  // sigma^2 = 1, P_t swept
          const PrecoderSet pre =
              beamform_network(plan, eval_channels, dep, power, cfg.wmmse);
          const double rate =
              sum_rate(compute_all_sinr(pre, eval_channels, dep));
          beam_ms(s, q) += ms_since(t0);
          rate_sum(s, q) += rate;
        }
      }
    }

    const double inv_rz = 1.0 / cfg.realizations;
    for (int s = 0; s < num_schemes; ++s) {
      const double assign_ms =
          statistical ? static_solve_ms[s] : solve_ms[s];
      for (int q = 0; q < num_snr; ++q) {
        ResultRow row;
        row.scheme = to_string(cfg.schemes[s]);
        row.csi_mode = to_string(cfg.csi_mode);
        row.snr_db = cfg.snr_grid_db[q];
        row.trial = trial;
        row.sum_rate = rate_sum(s, q) * inv_rz;
        row.leakage_f = leakage[s] * inv_rz;
        if (cfg.relaxed_bound) row.f_lower_bound = bound_sum * inv_rz;
        if (cfg.record_wall_time) {
          row.wall_time_ms = beam_ms(s, q) + assign_ms / num_snr;
        }
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

std::vector<SummaryRow> summarize(const ResultTable& table) {
  if (table.rows.empty()) throw ConfigError("summarize: empty table");
  struct Acc {
    double rate = 0, leak = 0, bound = 0;
    int n = 0, n_bound = 0;
  };
  std::map<std::tuple<std::string, std::string, double>, Acc> acc;
  for (const ResultRow& r : table.rows) {
    Acc& a = acc[{r.scheme, r.csi_mode, r.snr_db}];
    a.rate += r.sum_rate;
    a.leak += r.leakage_f;
    if (r.f_lower_bound) {
      a.bound += *r.f_lower_bound;
      ++a.n_bound;
    }
    ++a.n;
  }
  std::vector<SummaryRow> rows;
  for (const auto& [key, a] : acc) {
    SummaryRow s;
    s.scheme = std::get<0>(key);
    s.csi_mode = std::get<1>(key);
    s.snr_db = std::get<2>(key);
    s.mean_sum_rate = a.rate / a.n;
    s.mean_leakage_f = a.leak / a.n;
    if (a.n_bound > 0) s.mean_f_lower_bound = a.bound / a.n_bound;
    rows.push_back(std::move(s));
  }
  // Instantaneous-vs-statistical gap, attached to the statistical row.
  for (SummaryRow& s : rows) {
    if (s.csi_mode != "statistical") continue;
    for (const SummaryRow& o : rows) {
      if (o.scheme == s.scheme && o.snr_db == s.snr_db &&
          o.csi_mode == "instantaneous" && o.mean_sum_rate != 0.0) {
        s.inst_stat_gap = (o.mean_sum_rate - s.mean_sum_rate) / o.mean_sum_rate;
      }
    }
  }
  return rows;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_result_csv(std::ostream& os, const ResultTable& table) {
  os << "scheme,csi_mode,snr_db,trial,sum_rate,leakage_f,f_lower_bound,"
        "wall_time_ms\n";
  for (const ResultRow& r : table.rows) {
    os << csv_escape(r.scheme) << ',' << csv_escape(r.csi_mode) << ','
       << format_float(r.snr_db) << ',' << r.trial << ','
       << format_float(r.sum_rate) << ',' << format_float(r.leakage_f) << ','
       << (r.f_lower_bound ? format_float(*r.f_lower_bound) : "") << ','
       << format_float(r.wall_time_ms) << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "scheme,csi_mode,snr_db,mean_sum_rate,mean_leakage_f,"
        "mean_f_lower_bound,inst_stat_gap\n";
  for (const SummaryRow& r : rows) {
    os << csv_escape(r.scheme) << ',' << csv_escape(r.csi_mode) << ','
       << format_float(r.snr_db) << ',' << format_float(r.mean_sum_rate) << ','
       << format_float(r.mean_leakage_f) << ','
       << (r.mean_f_lower_bound ? format_float(*r.mean_f_lower_bound) : "")
       << ',' << (r.inst_stat_gap ? format_float(*r.inst_stat_gap) : "")
       << '\n';
  }
}

}  // namespace cran
