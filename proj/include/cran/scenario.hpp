#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cran/types.hpp"

namespace cran {

struct DeploymentParams {
  int num_rrhs = 16;      // N
  int num_users = 32;     // K
  int antennas = 4;       // M, uniform across RRHs
  int users_per_rrh = 2;  // J
  double area_side = 1000.0;  // meters
};

/// Static physical layout: positions plus the user-to-RRH association.
struct Deployment {
  double area_side = 0.0;
  Points2 rrh_positions;   // 2 x N
  Points2 user_positions;  // 2 x K
  int antennas_per_rrh = 0;
  int users_per_rrh = 0;
  std::vector<int> association;  // user index -> serving RRH index

  int num_rrhs() const { return static_cast<int>(rrh_positions.cols()); }
  int num_users() const { return static_cast<int>(user_positions.cols()); }

  /// Users served by each RRH, in ascending user order.
  std::vector<std::vector<int>> served_users() const;
};

/// One fast-fading realization of all RRH-to-user channels.
struct ChannelSet {
  std::vector<CMat> h;  // h[i] is M x K; column u is the channel RRH i -> user u
  double noise_power = 1.0;  // sigma^2, linear
  int realization_index = 0;
};

/// Large-scale amplitude gains, deterministic given positions.
struct PathlossSet {
  Mat g;  // N x K
};

enum class FadingMode { Iid, IidPathloss };

Deployment drop_deployment(std::uint64_t seed, const DeploymentParams& params);

/// Greedy quota-constrained association from an N x K energy matrix.
/// Users are attached in descending order of their best available energy;
/// ties go to the lowest RRH index, then the lowest user index.
std::vector<int> associate_users(const Mat& energy, int users_per_rrh);

PathlossSet compute_pathloss(const Deployment& dep, double exponent,
                             double reference_gain, double min_distance = 1.0);

/// Draws i.i.d. circularly-symmetric complex Gaussian channels, optionally
/// scaled by sqrt(g). Deterministic in (seed, realization_index).
ChannelSet draw_channels(std::uint64_t seed, int realization_index,
                         const Deployment& dep, FadingMode mode,
                         const PathlossSet* pathloss, double noise_power);

/// Structured text dump of a deployment for debugging.
void dump_deployment(std::ostream& os, const Deployment& dep);
void dump_channels(std::ostream& os, const ChannelSet& ch);

/// Deterministic per-purpose stream seed (splitmix64 over the inputs).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

}  // namespace cran
