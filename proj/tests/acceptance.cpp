// Acceptance suite: end-to-end checks of solver guarantees and the
// desk-scale experiment trends. Prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cran/coupling.hpp"
#include "cran/evaluation.hpp"
#include "cran/harness.hpp"

using namespace cran;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", index,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

Mat random_psi(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Mat psi = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) psi(i, j) = psi(j, i) = uni(rng);
  }
  return psi;
}

ChannelSet random_channels(const Deployment& dep, unsigned seed, double noise) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(2.0));
  ChannelSet ch;
  ch.noise_power = noise;
  ch.h.resize(dep.num_rrhs());
  for (auto& h : ch.h) {
    h.resize(dep.antennas_per_rrh, dep.num_users());
    for (int a = 0; a < h.rows(); ++a) {
      for (int u = 0; u < h.cols(); ++u) {
        h(a, u) = std::complex<double>(g(rng), g(rng));
      }
    }
  }
  return ch;
}

Deployment stub_deployment(int num_rrhs, int antennas, int users_per_rrh) {
  Deployment dep;
  dep.area_side = 100.0;
  dep.antennas_per_rrh = antennas;
  dep.users_per_rrh = users_per_rrh;
  dep.rrh_positions = Points2::Random(2, num_rrhs) * 50.0;
  const int users = num_rrhs * users_per_rrh;
  dep.user_positions = Points2::Random(2, users) * 50.0;
  dep.association.resize(users);
  for (int u = 0; u < users; ++u) dep.association[u] = u / users_per_rrh;
  return dep;
}

// ---- criterion 1: monotone descent over 1000 random instances ------------

void criterion_monotone() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(101);
  const std::vector<std::pair<int, int>> shapes = {
      {4, 2}, {6, 2}, {6, 3}, {8, 2}, {8, 4}, {9, 3},
      {12, 2}, {12, 3}, {12, 4}, {16, 2}, {16, 4}};
  int violations = 0;
  for (int instance = 0; instance < 1000; ++instance) {
    const auto [n, a] = shapes[instance % shapes.size()];
    const Mat psi = random_psi(n, rng);
    const LoadingSpec loading = LoadingSpec::equal(n, a);
    const Assignment init = random_assignment(instance, n, loading);
    const BcdResult r = solve_bcd(psi, loading, init, 50);
    for (std::size_t p = 1; p < r.trace.f_history.size(); ++p) {
      if (r.trace.f_history[p] > r.trace.f_history[p - 1] + 1e-9) ++violations;
    }
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  std::ostringstream detail;
  detail << violations << " violations, " << secs << " s";
  report(1, "monotone descent across 1000 instances",
         violations == 0 && secs < 30.0, detail.str());
}

// ---- criterion 2: per-block optimality oracle ----------------------------

double block_oracle(const Vec& r, const Vec& omega, const Vec& beta,
                    double gamma, bool* feasible) {
  const int n = static_cast<int>(r.size());
  double best = 0.0;
  *feasible = false;
  for (int mask = 0; mask < (1 << n); ++mask) {
    double load = 0.0, cost = 0.0;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) {
        if (omega(i) < 0.5) { ok = false; break; }
        load += beta(i);
        cost += r(i);
      }
    }
    if (!ok || std::abs(load - gamma) > 1e-9) continue;
    if (!*feasible || cost < best) { best = cost; *feasible = true; }
  }
  return best;
}

void criterion_block_optimality() {
  std::mt19937 rng(202);
  std::uniform_real_distribution<double> uni(-2.0, 5.0);
  int equal_checked = 0, equal_wrong = 0;
  while (equal_checked < 500) {
    const int n = 3 + static_cast<int>(rng() % 10);  // up to 12
    Vec r(n), omega(n);
    for (int i = 0; i < n; ++i) {
      r(i) = uni(rng);
      omega(i) = rng() % 4 ? 1.0 : 0.0;
    }
    const int avail = static_cast<int>(omega.sum());
    if (avail == 0) continue;
    const double gamma = static_cast<double>(rng() % (avail + 1));
    bool feasible = false;
    const double oracle = block_oracle(r, omega, Vec::Ones(n), gamma, &feasible);
    if (!feasible) continue;
    const Vec x = solve_block(r, omega, Vec::Ones(n), gamma);
    if (std::abs(r.dot(x) - oracle) > 1e-9) ++equal_wrong;
    ++equal_checked;
  }

  int weighted_checked = 0, weighted_wrong = 0;
  while (weighted_checked < 100) {
    const int n = 3 + static_cast<int>(rng() % 8);  // up to 10
    Vec r(n), beta(n);
    for (int i = 0; i < n; ++i) {
      r(i) = uni(rng);
      beta(i) = 0.25 * (1 + static_cast<int>(rng() % 6));
    }
    double gamma = 0.0;
    for (int i = 0; i < n; ++i) {
      if (rng() % 2) gamma += beta(i);
    }
    bool feasible = false;
    const double oracle = block_oracle(r, Vec::Ones(n), beta, gamma, &feasible);
    if (!feasible) continue;
    const Vec x = solve_block(r, Vec::Ones(n), beta, gamma);
    if (std::abs(r.dot(x) - oracle) > 1e-9) ++weighted_wrong;
    ++weighted_checked;
  }
  std::ostringstream detail;
  detail << equal_wrong << "/500 equal-loading and " << weighted_wrong
         << "/100 weighted mismatches";
  report(2, "per-block optimality vs subset enumeration",
         equal_wrong == 0 && weighted_wrong == 0, detail.str());
}

// ---- criterion 3: global-optimum sandwich --------------------------------

void criterion_sandwich() {
  std::mt19937 rng(303);
  const int instances = 200;
  int sandwich_bad = 0, bound_bad = 0, equal = 0;
  const LoadingSpec loading = LoadingSpec::equal(8, 2);
  for (int instance = 0; instance < instances; ++instance) {
    const Mat psi = random_psi(8, rng);
    const double f_star = solve_exhaustive(psi, loading).second;
    const BcdResult r = solve_bcd_restarts(psi, loading, 20, instance);
    const double f_bcd = r.trace.f_history.back();
    if (f_bcd < f_star - 1e-9) ++sandwich_bad;
    if (f_bcd <= f_star + 1e-9) ++equal;
    FractionalAssignment init;
    init.w = random_assignment(instance, 8, loading).x;
    if (solve_relaxed_bcd(psi, init).f_lower_bound > f_star + 1e-9) ++bound_bad;
  }
  const double rate = static_cast<double>(equal) / instances;
  std::ostringstream detail;
  detail << sandwich_bad << " sandwich violations, " << bound_bad
         << " bound violations, equality rate " << rate;
  report(3, "global-optimum sandwich (equality >= 70%)",
         sandwich_bad == 0 && bound_bad == 0 && rate >= 0.70, detail.str());
}

// ---- criteria 4-6: desk-scale experiment trends --------------------------

struct Curves {
  std::vector<double> snr;
  std::vector<double> bcd, random_, exhaustive;        // mean sum-rate
  double leak_bcd = 0, leak_random = 0, leak_exh = 0;  // mean leakage
  double leak_bound = 0;
};

Curves collect(const ResultTable& table) {
  Curves c;
  const auto summary = summarize(table);
  int leak_rows = 0;
  for (const SummaryRow& s : summary) {
    if (s.scheme == "bcd") {
      c.snr.push_back(s.snr_db);
      c.bcd.push_back(s.mean_sum_rate);
      c.leak_bcd = s.mean_leakage_f;
      if (s.mean_f_lower_bound) c.leak_bound = *s.mean_f_lower_bound;
      ++leak_rows;
    } else if (s.scheme == "random") {
      c.random_.push_back(s.mean_sum_rate);
      c.leak_random = s.mean_leakage_f;
    } else if (s.scheme == "exhaustive") {
      c.exhaustive.push_back(s.mean_sum_rate);
      c.leak_exh = s.mean_leakage_f;
    }
  }
  (void)leak_rows;
  return c;
}

ExperimentConfig paper_config() {
  ExperimentConfig cfg;  // defaults already mirror the N=16 experiment
  cfg.trials = 100;
  cfg.seed = 42;
  return cfg;
}

void criteria_trends() {
  ExperimentConfig cfg = paper_config();
  cfg.relaxed_bound = true;
  const auto t0 = std::chrono::steady_clock::now();
  const ResultTable table = run_experiment(cfg);
  const Curves c = collect(table);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();

  // criterion 4: exhaustive >= bcd > random, bcd >= 1.05 random at 20 dB
  bool order_ok = true;
  double gain20 = 0.0;
  for (std::size_t q = 0; q < c.snr.size(); ++q) {
    if (c.exhaustive[q] < c.bcd[q] - 1e-9) order_ok = false;
    if (c.bcd[q] <= c.random_[q]) order_ok = false;
    if (c.snr[q] == 20.0) gain20 = c.bcd[q] / c.random_[q] - 1.0;
  }
  {
    std::ostringstream detail;
    detail << "bcd/random gain at 20 dB = " << gain20 * 100.0 << "%, " << secs
           << " s";
    report(4, "sum-rate trend exhaustive >= bcd > random",
           order_ok && gain20 >= 0.05, detail.str());
  }

  // criterion 5: statistical bcd within 10% of instantaneous bcd everywhere,
  // and the statistical assignment is fading-invariant within a trial.
  {
    ExperimentConfig stat = paper_config();
    stat.csi_mode = CsiMode::Statistical;
    stat.schemes = {Scheme::Bcd};
    stat.realizations = 2;
    const Curves cs = collect(run_experiment(stat));
    bool within = true;
    double worst = 0.0;
    for (std::size_t q = 0; q < c.snr.size(); ++q) {
      const double gap = std::abs(c.bcd[q] - cs.bcd[q]) / c.bcd[q];
      worst = std::max(worst, gap);
      if (gap > 0.10) within = false;
    }
    // Fading invariance: the statistical assignment depends only on the
    // deployment, so re-solving the static coupling per realization must
    // reproduce it exactly.
    bool invariant = true;
    DeploymentParams dp;
    dp.num_rrhs = stat.num_rrhs;
    dp.num_users = stat.num_users();
    dp.antennas = stat.antennas;
    dp.users_per_rrh = stat.users_per_rrh;
    dp.area_side = stat.area_side;
    const LoadingSpec loading = stat.effective_loading();
    for (int trial = 0; trial < 10; ++trial) {
      const Deployment dep = drop_deployment(trial, dp);
      const PathlossSet pl = compute_pathloss(dep, stat.pathloss.exponent,
                                              stat.pathloss.reference_gain);
      const Mat psi = coupling_statistical(pl, dep).psi;
      const Assignment first =
          solve_bcd_restarts(psi, loading, stat.restarts, 7).assignment;
      for (int rz = 1; rz < 3; ++rz) {
        const Assignment again =
            solve_bcd_restarts(psi, loading, stat.restarts, 7).assignment;
        if (!(again == first)) invariant = false;
      }
    }
    std::ostringstream detail;
    detail << "worst relative gap " << worst * 100.0 << "%";
    report(5, "statistical CSI within 10% of instantaneous",
           within && invariant, detail.str());
  }

  // criterion 6: mean leakage exhaustive <= bcd < random, bound below all
  {
    const bool ok = c.leak_exh <= c.leak_bcd + 1e-9 &&
                    c.leak_bcd < c.leak_random &&
                    c.leak_bound <= c.leak_exh + 1e-9;
    std::ostringstream detail;
    detail << "bound " << c.leak_bound << " <= exhaustive " << c.leak_exh
           << " <= bcd " << c.leak_bcd << " < random " << c.leak_random;
    report(6, "leakage trend with relaxed bound below", ok, detail.str());
  }
}

// ---- criterion 7: A=2 one-sweep convergence ------------------------------

void criterion_one_sweep() {
  std::mt19937 rng(707);
  int bad = 0;
  for (int instance = 0; instance < 500; ++instance) {
    const int n = 2 * (2 + static_cast<int>(rng() % 7));
    const Mat psi = random_psi(n, rng);
    const LoadingSpec loading = LoadingSpec::equal(n, 2);
    const Assignment init = random_assignment(instance, n, loading);
    const BcdResult r = solve_bcd(psi, loading, init, 50);
    if (!r.trace.converged || r.trace.sweeps > 2) ++bad;
    // A further solve from the fixed point must change nothing.
    const BcdResult again = solve_bcd(psi, loading, r.assignment, 50);
    if (!(again.assignment == r.assignment) || again.trace.sweeps != 1) ++bad;
  }
  report(7, "A=2 converges with no change in the second sweep", bad == 0,
         std::to_string(bad) + " deviations");
}

// ---- criterion 8: WMMSE properties ---------------------------------------

void criterion_wmmse() {
  std::mt19937 rng(808);
  int monotone_bad = 0, power_bad = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const int n = 2 + static_cast<int>(rng() % 3);
    Deployment dep = stub_deployment(n, 2 + static_cast<int>(rng() % 3), 2);
    const ChannelSet ch = random_channels(dep, 9000 + instance, 1.0);
    const double power = std::pow(10.0, (rng() % 4) * 0.5);
    std::vector<int> cluster(n);
    for (int i = 0; i < n; ++i) cluster[i] = i;
    PrecoderSet pre;
    const auto trace =
        wmmse_beamform(cluster, ch, dep, power, WmmseOptions{}, pre);
    for (std::size_t p = 1; p < trace.size(); ++p) {
      if (trace[p] < trace[p - 1] - 1e-9) ++monotone_bad;
    }
    const auto served = dep.served_users();
    for (int i = 0; i < n; ++i) {
      double used = 0.0;
      for (int u : served[i]) used += pre.v[u].squaredNorm();
      if (used > power * (1.0 + 1e-6)) ++power_bad;
    }
  }

  // Single user closed form.
  int closed_bad = 0;
  for (int instance = 0; instance < 20; ++instance) {
    Deployment dep = stub_deployment(1, 4, 1);
    const ChannelSet ch = random_channels(dep, 500 + instance, 1.0);
    const double power = 10.0;
    PrecoderSet pre;
    const auto trace =
        wmmse_beamform({0}, ch, dep, power, WmmseOptions{}, pre);
    const double expected =
        std::log2(1.0 + power * ch.h[0].col(0).squaredNorm());
    if (std::abs(trace.back() - expected) > 1e-6 * expected) ++closed_bad;
  }
  std::ostringstream detail;
  detail << monotone_bad << " monotonicity, " << power_bad << " power, "
         << closed_bad << " closed-form deviations";
  report(8, "WMMSE monotone, power-feasible, matched-filter limit",
         monotone_bad == 0 && power_bad == 0 && closed_bad == 0, detail.str());
}

// ---- criterion 9: SINR oracle --------------------------------------------

double sinr_oracle(int user, const PrecoderSet& pre, const ChannelSet& ch,
                   const Deployment& dep) {
  double signal = 0.0, denom = ch.noise_power;
  for (int stream = 0; stream < dep.num_users(); ++stream) {
    const int tx = dep.association[stream];
    std::complex<double> g = 0.0;
    for (int a = 0; a < dep.antennas_per_rrh; ++a) {
      g += std::conj(ch.h[tx](a, user)) * pre.v[stream](a);
    }
    (stream == user ? signal : denom) += std::norm(g);
  }
  return signal / denom;
}

void criterion_sinr_oracle() {
  std::mt19937 rng(909);
  std::normal_distribution<double> gauss;
  int oracle_bad = 0, removal_bad = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const int n = 2 + static_cast<int>(rng() % 3);
    Deployment dep = stub_deployment(n, 2, 2);
    const ChannelSet ch = random_channels(dep, 7000 + instance, 0.5);
    PrecoderSet pre;
    pre.v.resize(dep.num_users());
    for (auto& v : pre.v) {
      v.resize(2);
      for (int a = 0; a < 2; ++a) v(a) = std::complex<double>(gauss(rng), gauss(rng));
    }
    const auto sinrs = compute_all_sinr(pre, ch, dep);
    for (int u = 0; u < dep.num_users(); ++u) {
      const double oracle = sinr_oracle(u, pre, ch, dep);
      if (std::abs(sinrs[u] - oracle) > 1e-9 * std::max(1.0, oracle)) {
        ++oracle_bad;
      }
    }
    const int removed = static_cast<int>(rng() % dep.num_users());
    PrecoderSet cut = pre;
    cut.v[removed].setZero();
    for (int u = 0; u < dep.num_users(); ++u) {
      if (u == removed) continue;
      if (compute_sinr(u, cut, ch, dep) < sinrs[u] - 1e-12) ++removal_bad;
    }
  }
  std::ostringstream detail;
  detail << oracle_bad << " oracle, " << removal_bad << " removal deviations";
  report(9, "SINR matches the per-stream oracle",
         oracle_bad == 0 && removal_bad == 0, detail.str());
}

// ---- criterion 10: byte-identical sweep output ---------------------------

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void criterion_determinism() {
  const std::string dir = "acceptance_tmp";
  if (std::system(("mkdir -p " + dir).c_str()) != 0) {
    report(10, "sweep CLI output is byte-identical across runs", false,
           "could not create scratch directory");
    return;
  }
  ExperimentConfig cfg;
  cfg.num_rrhs = 8;
  cfg.num_domains = 2;
  cfg.antennas = 2;
  cfg.users_per_rrh = 2;
  cfg.trials = 3;
  cfg.snr_grid_db = {0.0, 20.0};
  cfg.restarts = 5;
  cfg.seed = 99;
  {
    std::ofstream os(dir + "/sweep.json");
    os << config_to_json(cfg);
  }
  const std::string cli = CRAN_ADF_CLI_PATH;
  const std::string base = cli + " sweep --config " + dir + "/sweep.json --out ";
  const int rc1 = std::system((base + dir + "/a.csv").c_str());
  const int rc2 = std::system((base + dir + "/b.csv").c_str());
  const std::string a = slurp(dir + "/a.csv");
  const std::string b = slurp(dir + "/b.csv");
  const bool ok = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
  report(10, "sweep CLI output is byte-identical across runs", ok,
         ok ? "" : "outputs differ or CLI failed");
}

}  // namespace

int main() {
  criterion_monotone();
  criterion_block_optimality();
  criterion_sandwich();
  criteria_trends();
  criterion_one_sweep();
  criterion_wmmse();
  criterion_sinr_oracle();
  criterion_determinism();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
