#include <doctest.h>

#include <sstream>

#include "cran/harness.hpp"

using namespace cran;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.num_rrhs = 4;
  cfg.num_domains = 2;
  cfg.antennas = 2;
  cfg.users_per_rrh = 1;
  cfg.clusters_per_domain = 1;
  cfg.snr_grid_db = {0.0, 10.0};
  cfg.trials = 2;
  cfg.seed = 5;
  cfg.restarts = 4;
  cfg.area_side = 200.0;
  return cfg;
}

}  // namespace

TEST_CASE("config JSON round-trips through parse and dump") {
  const ExperimentConfig cfg = tiny_config();
  std::stringstream ss(config_to_json(cfg));
  const ExperimentConfig back = config_from_json(ss);
  CHECK(back.num_rrhs == cfg.num_rrhs);
  CHECK(back.num_domains == cfg.num_domains);
  CHECK(back.snr_grid_db == cfg.snr_grid_db);
  CHECK(back.seed == cfg.seed);
  CHECK(back.schemes.size() == cfg.schemes.size());
  CHECK(back.pathloss.exponent == cfg.pathloss.exponent);
}

TEST_CASE("config validation catches bad values") {
  ExperimentConfig cfg = tiny_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = tiny_config();
  cfg.num_rrhs = 5;  // not divisible by A
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = tiny_config();
  cfg.schemes.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  std::stringstream bad("{ not json");
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  std::stringstream unknown(R"({"schemes": ["teleport"]})");
  CHECK_THROWS_AS(config_from_json(unknown), ConfigError);
}

TEST_CASE("relaxed_bound parses as a scheme name") {
  std::stringstream ss(R"({"N":4,"A":2,"J":1,"M":2,
    "schemes":["bcd","relaxed_bound"]})");
  const ExperimentConfig cfg = config_from_json(ss);
  CHECK(cfg.relaxed_bound);
  REQUIRE(cfg.schemes.size() == 1);
  CHECK(cfg.schemes[0] == Scheme::Bcd);
}

TEST_CASE("run_experiment is deterministic and fills every row") {
  const ExperimentConfig cfg = tiny_config();
  const ResultTable a = run_experiment(cfg);
  const ResultTable b = run_experiment(cfg);
  REQUIRE(a.rows.size() ==
          cfg.schemes.size() * cfg.snr_grid_db.size() * cfg.trials);
  std::ostringstream sa, sb;
  write_result_csv(sa, a);
  write_result_csv(sb, b);
  CHECK(sa.str() == sb.str());
  for (const ResultRow& row : a.rows) {
    CHECK(row.sum_rate > 0.0);
    CHECK(row.leakage_f >= 0.0);
  }
}

TEST_CASE("statistical CSI reuses one assignment across realizations") {
  ExperimentConfig cfg = tiny_config();
  cfg.csi_mode = CsiMode::Statistical;
  cfg.realizations = 3;
  cfg.trials = 1;
  cfg.schemes = {Scheme::Bcd};
  const ResultTable t = run_experiment(cfg);
  // Leakage is averaged over realizations of a fading-invariant assignment
  // on a fading-invariant Psi, so it must equal the per-realization value;
  // determinism of the whole row set doubles as the identity check.
  ExperimentConfig one = cfg;
  one.realizations = 1;
  const ResultTable s = run_experiment(one);
  CHECK(t.rows[0].leakage_f == doctest::Approx(s.rows[0].leakage_f));
}

TEST_CASE("instantaneous leakage ordering holds on average") {
  ExperimentConfig cfg = tiny_config();
  cfg.num_rrhs = 8;
  cfg.trials = 10;
  cfg.snr_grid_db = {10.0};
  cfg.schemes = {Scheme::Bcd, Scheme::Random, Scheme::Exhaustive};
  const auto summary = summarize(run_experiment(cfg));
  double bcd = 0, rnd = 0, opt = 0;
  for (const SummaryRow& r : summary) {
    if (r.scheme == "bcd") bcd = r.mean_leakage_f;
    if (r.scheme == "random") rnd = r.mean_leakage_f;
    if (r.scheme == "exhaustive") opt = r.mean_leakage_f;
  }
  CHECK(opt <= bcd + 1e-9);
  CHECK(bcd <= rnd + 1e-9);
}

TEST_CASE("summarize averages trials and computes the csi gap") {
  ResultTable t;
  t.rows.push_back({"bcd", "instantaneous", 10.0, 0, 10.0, 1.0, {}, 0.0});
  t.rows.push_back({"bcd", "instantaneous", 10.0, 1, 20.0, 3.0, {}, 0.0});
  t.rows.push_back({"bcd", "statistical", 10.0, 0, 12.0, 2.0, {}, 0.0});
  const auto summary = summarize(t);
  REQUIRE(summary.size() == 2);
  for (const SummaryRow& r : summary) {
    if (r.csi_mode == "instantaneous") {
      CHECK(r.mean_sum_rate == doctest::Approx(15.0));
      CHECK(r.mean_leakage_f == doctest::Approx(2.0));
      CHECK(!r.inst_stat_gap);
    } else {
      REQUIRE(r.inst_stat_gap);
      CHECK(*r.inst_stat_gap == doctest::Approx((15.0 - 12.0) / 15.0));
    }
  }
  CHECK_THROWS_AS(summarize(ResultTable{}), ConfigError);
}

TEST_CASE("csv formatting rules") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(format_float(0.123456789123) == "0.123456789");
  CHECK(format_float(2.0) == "2");

  ResultTable t;
  t.rows.push_back({"bcd", "instantaneous", 0.0, 0, 1.5, 0.25, 0.125, 0.0});
  std::ostringstream os;
  write_result_csv(os, t);
  CHECK(os.str() ==
        "scheme,csi_mode,snr_db,trial,sum_rate,leakage_f,f_lower_bound,"
        "wall_time_ms\n"
        "bcd,instantaneous,0,0,1.5,0.25,0.125,0\n");
}
