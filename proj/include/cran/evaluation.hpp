#pragma once

#include <string>
#include <vector>

#include "cran/adf.hpp"
#include "cran/coordination.hpp"
#include "cran/scenario.hpp"
#include "cran/types.hpp"

namespace cran {

struct MetricsReport {
  std::vector<double> per_user_sinr;  // linear
  double sum_rate = 0.0;              // bits/s/Hz
  double leakage_f = 0.0;
  std::string scheme_label;
  double snr_db = 0.0;
  int realization_index = 0;
};

/// SINR of one user: own-stream power over the summed power of every other
/// stream in the network plus noise. Power scale is carried inside the
/// precoders. Requires noise_power > 0.
double compute_sinr(int user, const PrecoderSet& precoders,
                    const ChannelSet& channels, const Deployment& dep);

std::vector<double> compute_all_sinr(const PrecoderSet& precoders,
                                     const ChannelSet& channels,
                                     const Deployment& dep);

/// sum over users of log2(1 + SINR).
double sum_rate(const std::vector<double>& sinrs);

/// The ADF leakage objective of an assignment, for reporting.
double leakage_report(const Mat& psi, const Assignment& a);

}  // namespace cran
