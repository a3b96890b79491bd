#pragma once

#include <cstdint>
#include <vector>

#include "cran/adf.hpp"
#include "cran/scenario.hpp"
#include "cran/types.hpp"

namespace cran {

/// Per-AD geographic clustering of RRHs.
struct ClusterPlan {
  // clusters[ad][m] -> RRH indices of cluster m inside that AD
  std::vector<std::vector<std::vector<int>>> clusters;
  std::vector<Points2> centroids;  // centroids[ad] is 2 x C
};

/// Transmit precoders for the whole network, one column per user.
struct PrecoderSet {
  std::vector<CVec> v;  // v[u] has length M; zero vector when not yet set
  double power_budget = 1.0;  // P_t per RRH
};

/// Lloyd's k-means on RRH positions, run independently per AD.
/// Centroids seed from C distinct random member positions; empty clusters
/// are repaired by stealing the farthest point from the largest cluster.
ClusterPlan kmeans_clusters(const Assignment& ads, const Points2& rrh_positions,
                            int num_clusters, std::uint64_t seed);

struct WmmseOptions {
  int max_iters = 100;
  double tol = 1e-4;  // absolute improvement of the cluster sum-rate surrogate
};

/// Matched-filter precoders for the cluster's users, each RRH at full power
/// split uniformly over its served users (zero-channel users are skipped and
/// their share goes to the RRH's remaining users).
void initialize_precoders(const std::vector<int>& cluster_rrhs,
                          const ChannelSet& channels, const Deployment& dep,
                          double power_budget, PrecoderSet& out);

/// MISO weighted-MMSE coordinated beamforming over one cluster: MMSE receive
/// coefficient, inverse-MSE weight, then regularized least-squares precoders
/// with a bisected per-RRH power multiplier. Only the cluster's users are
/// read or written in `out`. Returns the per-iteration surrogate trace
/// (cluster-scope sum-rate), which is non-decreasing.
std::vector<double> wmmse_beamform(const std::vector<int>& cluster_rrhs,
                                   const ChannelSet& channels,
                                   const Deployment& dep, double power_budget,
                                   const WmmseOptions& opts, PrecoderSet& out);

/// Runs initialize + WMMSE for every cluster of the plan, filling a
/// network-wide PrecoderSet.
PrecoderSet beamform_network(const ClusterPlan& plan, const ChannelSet& channels,
                             const Deployment& dep, double power_budget,
                             const WmmseOptions& opts);

}  // namespace cran
