#include "cran/coordination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

namespace cran {

namespace {

int nearest_centroid(const Eigen::Vector2d& p, const Points2& centroids) {
  int best = 0;
  double best_d = (p - centroids.col(0)).squaredNorm();
  for (int m = 1; m < centroids.cols(); ++m) {
    const double d = (p - centroids.col(m)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

// Move the member farthest from its centroid out of the largest cluster.
void repair_empty_cluster(std::vector<int>& membership, const Points2& pts,
                          const Points2& centroids, int empty) {
  const int num_clusters = static_cast<int>(centroids.cols());
  std::vector<int> sizes(num_clusters, 0);
  for (int m : membership) ++sizes[m];
  int donor = 0;
  for (int m = 1; m < num_clusters; ++m) {
    if (sizes[m] > sizes[donor]) donor = m;
  }
  int victim = -1;
  double worst = -1.0;
  for (int p = 0; p < static_cast<int>(membership.size()); ++p) {
    if (membership[p] != donor) continue;
    const double d = (pts.col(p) - centroids.col(donor)).squaredNorm();
    if (d > worst) {
      worst = d;
      victim = p;
    }
  }
  membership[victim] = empty;
}

}  // namespace

ClusterPlan kmeans_clusters(const Assignment& ads, const Points2& rrh_positions,
                            int num_clusters, std::uint64_t seed) {
  ClusterPlan plan;
  plan.clusters.resize(ads.num_domains());
  plan.centroids.resize(ads.num_domains());

  for (int ad = 0; ad < ads.num_domains(); ++ad) {
    const std::vector<int> members = ads.members(ad);
    const int count = static_cast<int>(members.size());
    if (num_clusters <= 0 || num_clusters > count) {
      throw ConfigError("kmeans_clusters: C must be in [1, |AD|]");
    }
    Points2 pts(2, count);
    for (int p = 0; p < count; ++p) pts.col(p) = rrh_positions.col(members[p]);

    // Seed centroids from distinct random member positions.
    std::mt19937_64 rng(derive_seed(seed, 0x6b6d6e73ULL,
                                    static_cast<std::uint64_t>(ad)));
    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Points2 centroids(2, num_clusters);
    for (int m = 0; m < num_clusters; ++m) centroids.col(m) = pts.col(order[m]);

    std::vector<int> membership(count, 0);
    for (int iter = 0; iter < 100; ++iter) {
      bool changed = false;
      for (int p = 0; p < count; ++p) {
        const int m = nearest_centroid(pts.col(p), centroids);
        if (m != membership[p]) {
          membership[p] = m;
          changed = true;
        }
      }
      for (int m = 0; m < num_clusters; ++m) {
        if (std::count(membership.begin(), membership.end(), m) == 0) {
          repair_empty_cluster(membership, pts, centroids, m);
          changed = true;
        }
      }
      for (int m = 0; m < num_clusters; ++m) {
        Eigen::Vector2d mean = Eigen::Vector2d::Zero();
        int sz = 0;
        for (int p = 0; p < count; ++p) {
          if (membership[p] == m) {
            mean += pts.col(p);
            ++sz;
          }
        }
        centroids.col(m) = mean / sz;
      }
      if (!changed && iter > 0) break;
    }

    plan.clusters[ad].assign(num_clusters, {});
    for (int p = 0; p < count; ++p) {
      plan.clusters[ad][membership[p]].push_back(members[p]);
    }
    plan.centroids[ad] = centroids;
  }
  return plan;
}

namespace {

std::vector<int> cluster_users(const std::vector<int>& cluster_rrhs,
                               const Deployment& dep) {
  std::vector<int> users;
  const auto served = dep.served_users();
  for (int i : cluster_rrhs) {
    users.insert(users.end(), served[i].begin(), served[i].end());
  }
  std::sort(users.begin(), users.end());
  return users;
}

}  // namespace

void initialize_precoders(const std::vector<int>& cluster_rrhs,
                          const ChannelSet& channels, const Deployment& dep,
                          double power_budget, PrecoderSet& out) {
  const int m = dep.antennas_per_rrh;
  if (static_cast<int>(out.v.size()) != dep.num_users()) {
    out.v.assign(dep.num_users(), CVec::Zero(m));
  }
  out.power_budget = power_budget;
  const auto served = dep.served_users();
  for (int i : cluster_rrhs) {
    std::vector<int> live;
    for (int u : served[i]) {
      if (channels.h[i].col(u).norm() > 0.0) {
        live.push_back(u);
      } else {
        out.v[u] = CVec::Zero(m);
      }
    }
    const double per_user = live.empty() ? 0.0 : power_budget / live.size();
    for (int u : live) {
      const CVec h = channels.h[i].col(u);
      out.v[u] = std::sqrt(per_user) * h / h.norm();
    }
  }
}

namespace {

// Power transmitted toward user u by all of the cluster's streams plus noise.
double received_total(int u, const std::vector<int>& users,
                      const ChannelSet& channels, const Deployment& dep,
                      const PrecoderSet& pre) {
  double total = channels.noise_power;
  for (int j : users) {
    const int p = dep.association[j];
    const std::complex<double> g =
        channels.h[p].col(u).adjoint() * pre.v[j];
    total += std::norm(g);
  }
  return total;
}

double cluster_rate(const std::vector<int>& users, const ChannelSet& channels,
                    const Deployment& dep, const PrecoderSet& pre) {
  double rate = 0.0;
  for (int u : users) {
    const int s = dep.association[u];
    const std::complex<double> g = channels.h[s].col(u).adjoint() * pre.v[u];
    const double sig = std::norm(g);
    const double denom = received_total(u, users, channels, dep, pre) - sig;
    rate += std::log2(1.0 + sig / denom);
  }
  return rate;
}

}  // namespace

std::vector<double> wmmse_beamform(const std::vector<int>& cluster_rrhs,
                                   const ChannelSet& channels,
                                   const Deployment& dep, double power_budget,
                                   const WmmseOptions& opts, PrecoderSet& out) {
  if (channels.noise_power <= 0.0) {
    throw ConfigError("wmmse_beamform: noise power must be positive");
  }
  const int m = dep.antennas_per_rrh;
  const std::vector<int> users = cluster_users(cluster_rrhs, dep);
  if (static_cast<int>(out.v.size()) != dep.num_users()) {
    out.v.assign(dep.num_users(), CVec::Zero(m));
  }
  out.power_budget = power_budget;
  initialize_precoders(cluster_rrhs, channels, dep, power_budget, out);
  if (power_budget <= 0.0) return {0.0};

  const auto served = dep.served_users();
  std::vector<double> trace;
  trace.push_back(cluster_rate(users, channels, dep, out));

  std::vector<std::complex<double>> rx(dep.num_users());
  std::vector<double> weight(dep.num_users());

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    // (1) scalar MMSE receive coefficient, (2) inverse-MSE weight
    for (int u : users) {
      const int s = dep.association[u];
      const std::complex<double> g = channels.h[s].col(u).adjoint() * out.v[u];
      const double total = received_total(u, users, channels, dep, out);
      rx[u] = g / total;
      const double mse = 1.0 - std::norm(g) / total;
      weight[u] = 1.0 / mse;
    }

    // (3) per-RRH regularized least-squares precoder with bisected power
    // multiplier
    for (int p : cluster_rrhs) {
      CMat gram = CMat::Zero(m, m);
      for (int u : users) {
        const CVec h = channels.h[p].col(u);
        gram += weight[u] * std::norm(rx[u]) * (h * h.adjoint());
      }
      Eigen::SelfAdjointEigenSolver<CMat> eig(gram);
      const Vec lambda = eig.eigenvalues().cwiseMax(0.0);
      const CMat& q = eig.eigenvectors();

      std::vector<int> mine = served[p];
      std::vector<CVec> coeff;  // rotated right-hand sides
      coeff.reserve(mine.size());
      for (int u : mine) {
        coeff.push_back(q.adjoint() *
                        (channels.h[p].col(u) * (weight[u] * rx[u])));
      }
      auto power_at = [&](double mu) {
        double pw = 0.0;
        for (const CVec& c : coeff) {
          for (int a = 0; a < m; ++a) {
            const double den = lambda(a) + mu;
            if (den <= 0.0) {
              if (std::norm(c(a)) > 0.0) return std::numeric_limits<double>::infinity();
              continue;
            }
            pw += std::norm(c(a)) / (den * den);
          }
        }
        return pw;
      };

      double mu = 0.0;
      if (power_at(0.0) > power_budget) {
        double total_c = 0.0;
        for (const CVec& c : coeff) total_c += c.squaredNorm();
        double lo = 0.0;
        double hi = std::sqrt(total_c / power_budget);
        for (int b = 0; b < 200; ++b) {
          mu = 0.5 * (lo + hi);
          if (power_at(mu) > power_budget) {
            lo = mu;
          } else {
            hi = mu;
          }
          if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
        }
        mu = hi;
      }
      for (std::size_t t = 0; t < mine.size(); ++t) {
        CVec scaled = coeff[t];
        for (int a = 0; a < m; ++a) {
          const double den = lambda(a) + mu;
          scaled(a) = den > 0.0 ? scaled(a) / den : std::complex<double>(0.0);
        }
        out.v[mine[t]] = q * scaled;
      }
    }

    trace.push_back(cluster_rate(users, channels, dep, out));
    if (trace.back() - trace[trace.size() - 2] < opts.tol) break;
  }
  return trace;
}

PrecoderSet beamform_network(const ClusterPlan& plan, const ChannelSet& channels,
                             const Deployment& dep, double power_budget,
                             const WmmseOptions& opts) {
  PrecoderSet pre;
  pre.v.assign(dep.num_users(), CVec::Zero(dep.antennas_per_rrh));
  pre.power_budget = power_budget;
  for (const auto& ad : plan.clusters) {
    for (const auto& cluster : ad) {
      wmmse_beamform(cluster, channels, dep, power_budget, opts, pre);
    }
  }
  return pre;
}

}  // namespace cran
