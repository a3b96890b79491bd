#include "cran/adf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "cran/scenario.hpp"

namespace cran {

namespace {

constexpr double kTol = 1e-9;

bool is_integral(double v) { return std::abs(v - std::round(v)) < kTol; }

bool all_ones(const Vec& beta) {
  return (beta.array() == 1.0).all();
}

double monotone_slack(double f) { return kTol * std::max(1.0, std::abs(f)); }

}  // namespace

LoadingSpec LoadingSpec::equal(int num_rrhs, int num_domains) {
  if (num_domains <= 0 || num_rrhs <= 0 || num_rrhs % num_domains != 0) {
    throw ConfigError("equal loading requires A > 0 and A | N");
  }
  LoadingSpec spec;
  spec.beta.assign(num_domains, Vec::Ones(num_rrhs));
  spec.gamma = Vec::Constant(num_domains,
                             static_cast<double>(num_rrhs / num_domains));
  return spec;
}

bool LoadingSpec::is_equal_loading() const {
  for (int k = 0; k < num_domains(); ++k) {
    if (!all_ones(beta[k]) || !is_integral(gamma(k))) return false;
  }
  return true;
}

std::vector<int> Assignment::members(int k) const {
  std::vector<int> out;
  for (int i = 0; i < num_rrhs(); ++i) {
    if (x[k](i) > 0.5) out.push_back(i);
  }
  return out;
}

std::vector<int> Assignment::labels() const {
  std::vector<int> out(num_rrhs(), -1);
  for (int k = 0; k < num_domains(); ++k) {
    for (int i = 0; i < num_rrhs(); ++i) {
      if (x[k](i) > 0.5) out[i] = k;
    }
  }
  return out;
}

bool Assignment::operator==(const Assignment& other) const {
  if (x.size() != other.x.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k].size() != other.x[k].size() || x[k] != other.x[k]) return false;
  }
  return true;
}

double objective(const Mat& psi, const std::vector<Vec>& blocks) {
  if (blocks.empty()) return 0.0;
  for (const Vec& b : blocks) {
    if (b.size() != psi.rows() || psi.rows() != psi.cols()) {
      throw DimensionError("objective: block length must match Psi");
    }
  }
  Vec total = Vec::Zero(psi.rows());
  for (const Vec& b : blocks) total += b;
  double f = total.dot(psi * total);
  for (const Vec& b : blocks) f -= b.dot(psi * b);
  return f;
}

double objective(const Mat& psi, const Assignment& a) {
  return objective(psi, a.x);
}

double objective(const Mat& psi, const FractionalAssignment& a) {
  return objective(psi, a.w);
}

Vec residual(const Mat& psi, const std::vector<Vec>& blocks, int k) {
  Vec others = Vec::Zero(psi.rows());
  for (int l = 0; l < static_cast<int>(blocks.size()); ++l) {
    if (l != k) others += blocks[l];
  }
  return psi * others;
}

Vec residual_assignment(const std::vector<Vec>& blocks, int k) {
  const Eigen::Index n = blocks.at(k).size();
  Vec omega = Vec::Ones(n);
  for (int l = 0; l < static_cast<int>(blocks.size()); ++l) {
    if (l != k) omega -= blocks[l];
  }
  if (omega.minCoeff() < -kTol) {
    throw std::logic_error("residual_assignment: exclusivity violated upstream");
  }
  return omega;
}

namespace {

// Exact DFS branch-and-bound for min r^T x, beta^T x = gamma, x <= omega,
// x binary. Kept for general nonuniform beta; the equal-loading case never
// reaches it.
struct BlockBnb {
  const Vec& r;
  const Vec& beta;
  double gamma;
  std::vector<int> avail;       // indices with omega = 1
  std::vector<double> beta_suffix;  // sum of beta over avail[pos..]
  std::vector<double> neg_suffix;   // sum of min(0, r) over avail[pos..]
  std::vector<char> current;
  std::vector<char> best;
  double best_cost = std::numeric_limits<double>::infinity();
  bool found = false;

  BlockBnb(const Vec& r_in, const Vec& omega, const Vec& beta_in, double g)
      : r(r_in), beta(beta_in), gamma(g) {
    for (int i = 0; i < r.size(); ++i) {
      if (omega(i) > 0.5) avail.push_back(i);
    }
    const std::size_t m = avail.size();
    beta_suffix.assign(m + 1, 0.0);
    neg_suffix.assign(m + 1, 0.0);
    for (std::size_t p = m; p-- > 0;) {
      beta_suffix[p] = beta_suffix[p + 1] + beta(avail[p]);
      neg_suffix[p] = neg_suffix[p + 1] + std::min(0.0, r(avail[p]));
    }
    current.assign(m, 0);
  }

  void dfs(std::size_t pos, double load, double cost) {
    if (load > gamma + kTol) return;
    if (load + beta_suffix[pos] < gamma - kTol) return;
    if (cost + neg_suffix[pos] >= best_cost - kTol * 1e-3) {
      // Cannot strictly improve; keep the earlier (lexicographic) incumbent.
      if (found) return;
    }
    if (pos == current.size()) {
      if (std::abs(load - gamma) <= kTol * std::max(1.0, std::abs(gamma))) {
        if (!found || cost < best_cost - kTol * 1e-3) {
          best = current;
          best_cost = cost;
          found = true;
        }
      }
      return;
    }
    const int i = avail[pos];
    current[pos] = 0;
    dfs(pos + 1, load, cost);
    current[pos] = 1;
    dfs(pos + 1, load + beta(i), cost + r(i));
    current[pos] = 0;
  }
};

}  // namespace

Vec solve_block(const Vec& r, const Vec& omega, const Vec& beta, double gamma) {
  if (r.size() != omega.size() || r.size() != beta.size()) {
    throw DimensionError("solve_block: r, omega, beta lengths differ");
  }
  const int n = static_cast<int>(r.size());
  Vec x = Vec::Zero(n);

  if (all_ones(beta) && is_integral(gamma)) {
    // Equal loading: pick the gamma cheapest available indices.
    const int need = static_cast<int>(std::llround(gamma));
    std::vector<int> avail;
    for (int i = 0; i < n; ++i) {
      if (omega(i) > 0.5) avail.push_back(i);
    }
    if (need < 0 || need > static_cast<int>(avail.size())) {
      throw InfeasibleError("solve_block: not enough available slots for load " +
                            std::to_string(need));
    }
    std::stable_sort(avail.begin(), avail.end(),
                     [&](int a, int b) { return r(a) < r(b); });
    for (int p = 0; p < need; ++p) x(avail[p]) = 1.0;
    return x;
  }

  BlockBnb bnb(r, omega, beta, gamma);
  bnb.dfs(0, 0.0, 0.0);
  if (!bnb.found) {
    throw InfeasibleError("solve_block: no binary point meets the loading constraint");
  }
  for (std::size_t p = 0; p < bnb.avail.size(); ++p) {
    if (bnb.best[p]) x(bnb.avail[p]) = 1.0;
  }
  return x;
}

void check_feasible(const Assignment& a, const LoadingSpec& loading) {
  if (a.num_domains() != loading.num_domains()) {
    throw DimensionError("assignment and loading disagree on A");
  }
  const int n = a.num_rrhs();
  Vec total = Vec::Zero(n);
  for (int k = 0; k < a.num_domains(); ++k) {
    const Vec& xk = a.x[k];
    if (xk.size() != n) throw DimensionError("assignment blocks differ in length");
    for (int i = 0; i < n; ++i) {
      if (xk(i) != 0.0 && xk(i) != 1.0) {
        throw ConfigError("assignment entries must be binary");
      }
    }
    if (std::abs(loading.beta[k].dot(xk) - loading.gamma(k)) > kTol) {
      throw InfeasibleError("loading constraint violated for AD " +
                            std::to_string(k));
    }
    total += xk;
  }
  if (total.maxCoeff() > 1.0 + kTol) {
    throw InfeasibleError("exclusivity violated: an RRH sits in two ADs");
  }
}

BcdResult solve_bcd(const Mat& psi, const LoadingSpec& loading,
                    const Assignment& init, int max_sweeps) {
  check_feasible(init, loading);
  if (psi.rows() != psi.cols() || psi.rows() != init.num_rrhs()) {
    throw DimensionError("solve_bcd: Psi must be N x N");
  }
  const int num_domains = loading.num_domains();
  std::vector<Vec> blocks = init.x;

  BcdResult result;
  double f = objective(psi, blocks);
  result.trace.f_history.push_back(f);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (int k = 0; k < num_domains; ++k) {
      const Vec r = residual(psi, blocks, k);
      const Vec omega = residual_assignment(blocks, k);
      Vec xk;
      try {
        xk = solve_block(r, omega, loading.beta[k], loading.gamma(k));
      } catch (const InfeasibleError& e) {
        throw InfeasibleError("AD " + std::to_string(k) + ": " + e.what());
      }
      if (xk != blocks[k]) {
        blocks[k] = std::move(xk);
        changed = true;
      }
      const double f_next = objective(psi, blocks);
      if (f_next > f + monotone_slack(f)) {
        throw std::logic_error("BCD objective increased across a block update");
      }
      f = f_next;
      result.trace.f_history.push_back(f);
    }
    ++result.trace.sweeps;
    if (!changed) {
      result.trace.converged = true;
      break;
    }
  }
  result.assignment.x = std::move(blocks);
  return result;
}

Assignment random_assignment(std::uint64_t seed, int num_rrhs,
                             const LoadingSpec& loading) {
  if (!loading.is_equal_loading()) {
    throw ConfigError("random_assignment supports equal loading only");
  }
  std::vector<int> order(num_rrhs);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(derive_seed(seed, 0x72616e64ULL));
  std::shuffle(order.begin(), order.end(), rng);

  Assignment a;
  a.x.assign(loading.num_domains(), Vec::Zero(num_rrhs));
  int pos = 0;
  for (int k = 0; k < loading.num_domains(); ++k) {
    const int take = static_cast<int>(std::llround(loading.gamma(k)));
    if (pos + take > num_rrhs) {
      throw InfeasibleError("random_assignment: total load exceeds N");
    }
    for (int t = 0; t < take; ++t) a.x[k](order[pos++]) = 1.0;
  }
  return a;
}

BcdResult solve_bcd_restarts(const Mat& psi, const LoadingSpec& loading,
                             int restarts, std::uint64_t seed, int max_sweeps) {
  if (restarts <= 0) throw ConfigError("restarts must be >= 1");
  const int n = static_cast<int>(psi.rows());
  BcdResult best;
  double best_f = std::numeric_limits<double>::infinity();
  for (int run = 0; run < restarts; ++run) {
    const Assignment init = random_assignment(
        derive_seed(seed, 0x696e6974ULL, static_cast<std::uint64_t>(run)), n,
        loading);
    BcdResult r = solve_bcd(psi, loading, init, max_sweeps);
    const double f = r.trace.f_history.back();
    if (f < best_f) {
      best_f = f;
      best = std::move(r);
    }
  }
  return best;
}

namespace {

struct Enumerator {
  const Mat& psi;
  const LoadingSpec& loading;
  std::uint64_t cap;
  std::uint64_t count = 0;
  std::vector<Vec> blocks;
  std::vector<char> taken;
  Assignment best;
  double best_f = std::numeric_limits<double>::infinity();
  bool found = false;

  Enumerator(const Mat& p, const LoadingSpec& l, std::uint64_t c)
      : psi(p), loading(l), cap(c) {
    const int n = static_cast<int>(psi.rows());
    blocks.assign(loading.num_domains(), Vec::Zero(n));
    taken.assign(n, 0);
  }

  // Branch 0 before 1 so the first minimizer found is the
  // lexicographically smallest assignment.
  void enumerate(int k, int i, double load) {
    const int n = static_cast<int>(psi.rows());
    const double gamma = loading.gamma(k);
    if (i == n) {
      if (std::abs(load - gamma) > kTol * std::max(1.0, std::abs(gamma))) return;
      if (k + 1 < loading.num_domains()) {
        enumerate(k + 1, 0, 0.0);
      } else {
        if (++count > cap) {
          throw ConfigError("solve_exhaustive: enumeration cap exceeded");
        }
        const double f = objective(psi, blocks);
        if (!found || f < best_f - kTol * 1e-3) {
          best.x = blocks;
          best_f = f;
          found = true;
        }
      }
      return;
    }
    // Feasibility pruning on the remaining beta mass.
    double remaining = 0.0;
    for (int j = i; j < n; ++j) {
      if (!taken[j]) remaining += loading.beta[k](j);
    }
    if (load > gamma + kTol || load + remaining < gamma - kTol) return;

    enumerate(k, i + 1, load);
    if (!taken[i]) {
      taken[i] = 1;
      blocks[k](i) = 1.0;
      enumerate(k, i + 1, load + loading.beta[k](i));
      blocks[k](i) = 0.0;
      taken[i] = 0;
    }
  }
};

}  // namespace

std::pair<Assignment, double> solve_exhaustive(const Mat& psi,
                                               const LoadingSpec& loading,
                                               std::uint64_t cap) {
  if (psi.rows() != psi.cols()) {
    throw DimensionError("solve_exhaustive: Psi must be square");
  }
  Enumerator e(psi, loading, cap);
  e.enumerate(0, 0, 0.0);
  if (!e.found) {
    throw InfeasibleError("solve_exhaustive: no feasible assignment exists");
  }
  return {e.best, e.best_f};
}

RelaxedResult solve_relaxed_bcd(const Mat& psi, const FractionalAssignment& init,
                                int max_sweeps) {
  const int num_domains = init.num_domains();
  std::vector<Vec> blocks = init.w;
  for (const Vec& b : blocks) {
    if (b.size() != psi.rows() || b.minCoeff() < -kTol || b.maxCoeff() > 1.0 + kTol) {
      throw ConfigError("solve_relaxed_bcd: init entries must lie in [0,1]");
    }
  }
  double f = objective(psi, blocks);
  RelaxedResult result;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (int k = 0; k < num_domains; ++k) {
      const Vec r = residual(psi, blocks, k);
      const Vec omega = residual_assignment(blocks, k);
      Vec wk = blocks[k];
      for (int i = 0; i < wk.size(); ++i) {
        const double ub = std::clamp(std::min(1.0, omega(i)), 0.0, 1.0);
        if (r(i) < -kTol) {
          wk(i) = ub;
        } else if (r(i) > kTol) {
          wk(i) = 0.0;
        } else {
          wk(i) = std::clamp(wk(i), 0.0, ub);  // hold rule at zero cost
        }
      }
      if ((wk - blocks[k]).lpNorm<Eigen::Infinity>() > kTol) changed = true;
      blocks[k] = std::move(wk);
      const double f_next = objective(psi, blocks);
      if (f_next > f + monotone_slack(f)) {
        throw std::logic_error("relaxed BCD objective increased");
      }
      f = f_next;
    }
    ++result.sweeps;
    if (!changed) break;
  }
  result.w.w = std::move(blocks);
  result.f_lower_bound = f;
  return result;
}

Vec project_to_feasible(const Vec& w, const Vec& beta, double gamma) {
  if (!all_ones(beta) || !is_integral(gamma)) {
    throw ConfigError("project_to_feasible supports equal loading only");
  }
  const int need = static_cast<int>(std::llround(gamma));
  const int n = static_cast<int>(w.size());
  if (need < 0 || need > n) {
    throw InfeasibleError("project_to_feasible: load outside [0, N]");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return w(a) > w(b); });
  Vec x = Vec::Zero(n);
  for (int p = 0; p < need; ++p) x(order[p]) = 1.0;
  return x;
}

}  // namespace cran
