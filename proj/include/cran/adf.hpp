#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cran/types.hpp"

namespace cran {

/// Per-AD load profile: beta_k^T x_k = gamma_k.
struct LoadingSpec {
  std::vector<Vec> beta;  // A vectors of length N, nonnegative
  Vec gamma;              // A nonnegative loads

  int num_domains() const { return static_cast<int>(beta.size()); }

  /// beta_k = 1_N for all k, gamma_k = N / A (requires A | N).
  static LoadingSpec equal(int num_rrhs, int num_domains);

  /// True when every beta_k is all-ones and every gamma_k is integral.
  bool is_equal_loading() const;
};

/// Binary AD membership vectors; x[k](i) = 1 iff RRH i belongs to AD k.
/// Entries are stored as 0.0 / 1.0 doubles so they compose with Psi directly.
struct Assignment {
  std::vector<Vec> x;

  int num_domains() const { return static_cast<int>(x.size()); }
  int num_rrhs() const { return x.empty() ? 0 : static_cast<int>(x[0].size()); }

  /// RRH indices of AD k, ascending.
  std::vector<int> members(int k) const;
  /// AD label per RRH, -1 when unassigned.
  std::vector<int> labels() const;

  bool operator==(const Assignment& other) const;
};

/// Relaxed membership, entries in [0, 1].
struct FractionalAssignment {
  std::vector<Vec> w;

  int num_domains() const { return static_cast<int>(w.size()); }
  int num_rrhs() const { return w.empty() ? 0 : static_cast<int>(w[0].size()); }
};

/// Objective values after every single block update.
struct SolveTrace {
  std::vector<double> f_history;
  int sweeps = 0;
  bool converged = false;
};

struct BcdResult {
  Assignment assignment;
  SolveTrace trace;
};

/// f = sum_k sum_{l != k} x_k^T Psi x_l.
double objective(const Mat& psi, const std::vector<Vec>& blocks);
double objective(const Mat& psi, const Assignment& a);
double objective(const Mat& psi, const FractionalAssignment& a);

/// r_k = Psi * (sum of all blocks except k, at their current iterates).
Vec residual(const Mat& psi, const std::vector<Vec>& blocks, int k);

/// omega_k = 1_N - (sum of all blocks except k).
Vec residual_assignment(const std::vector<Vec>& blocks, int k);

/// Global minimizer of r^T x over {x binary, x <= omega, beta^T x = gamma}.
/// All-ones beta with integral gamma uses the sorted-selection fast path;
/// general beta runs an exact depth-first branch-and-bound.
/// Throws InfeasibleError when the feasible set is empty.
Vec solve_block(const Vec& r, const Vec& omega, const Vec& beta, double gamma);

/// Gauss-Seidel block-coordinate descent, ascending block order per sweep.
/// Stops after a sweep that changes no block, or after max_sweeps.
/// The objective is asserted non-increasing across every block update.
BcdResult solve_bcd(const Mat& psi, const LoadingSpec& loading,
                    const Assignment& init, int max_sweeps = 50);

/// Best-of-R random restarts of solve_bcd; deterministic in seed.
BcdResult solve_bcd_restarts(const Mat& psi, const LoadingSpec& loading,
                             int restarts, std::uint64_t seed,
                             int max_sweeps = 50);

/// Exact enumeration of every feasible assignment; lexicographically
/// smallest minimizer. Refuses instances above the enumeration cap.
std::pair<Assignment, double> solve_exhaustive(const Mat& psi,
                                               const LoadingSpec& loading,
                                               std::uint64_t cap = 10'000'000);

/// Uniformly random feasible partition under equal loading.
Assignment random_assignment(std::uint64_t seed, int num_rrhs,
                             const LoadingSpec& loading);

struct RelaxedResult {
  FractionalAssignment w;
  double f_lower_bound = 0.0;
  int sweeps = 0;
};

/// BCD on the continuous relaxation (binary and loading constraints dropped).
/// Per-block closed form: an entry moves to its upper bound where its
/// residual cost is negative, to 0 where positive, and holds where zero.
RelaxedResult solve_relaxed_bcd(const Mat& psi, const FractionalAssignment& init,
                                int max_sweeps = 50);

/// Euclidean projection onto {binary, beta^T x = gamma}; equal-loading only.
/// Picks the gamma largest entries, ties to the lowest index.
Vec project_to_feasible(const Vec& w, const Vec& beta, double gamma);

/// Throws unless the assignment satisfies exclusivity, loading, and binarity.
void check_feasible(const Assignment& a, const LoadingSpec& loading);

}  // namespace cran
