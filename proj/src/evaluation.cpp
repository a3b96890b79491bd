#include "cran/evaluation.hpp"

#include <cmath>

namespace cran {

double compute_sinr(int user, const PrecoderSet& precoders,
                    const ChannelSet& channels, const Deployment& dep) {
  if (channels.noise_power <= 0.0) {
    throw ConfigError("compute_sinr: noise power must be positive");
  }
  if (static_cast<int>(precoders.v.size()) != dep.num_users()) {
    throw ConfigError("compute_sinr: missing precoders");
  }
  const int serving = dep.association[user];
  const std::complex<double> own =
      channels.h[serving].col(user).adjoint() * precoders.v[user];
  double interference = 0.0;
  for (int stream = 0; stream < dep.num_users(); ++stream) {
    if (stream == user) continue;
    const int tx = dep.association[stream];
    const std::complex<double> g =
        channels.h[tx].col(user).adjoint() * precoders.v[stream];
    interference += std::norm(g);
  }
  return std::norm(own) / (interference + channels.noise_power);
}

std::vector<double> compute_all_sinr(const PrecoderSet& precoders,
                                     const ChannelSet& channels,
                                     const Deployment& dep) {
  std::vector<double> sinrs(dep.num_users());
  for (int u = 0; u < dep.num_users(); ++u) {
    sinrs[u] = compute_sinr(u, precoders, channels, dep);
  }
  return sinrs;
}

double sum_rate(const std::vector<double>& sinrs) {
  double rate = 0.0;
  for (double s : sinrs) rate += std::log2(1.0 + s);
  return rate;
}

double leakage_report(const Mat& psi, const Assignment& a) {
  return objective(psi, a);
}

}  // namespace cran
