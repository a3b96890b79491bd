#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cran/scenario.hpp"
#include "cran/types.hpp"

namespace cran {

enum class CouplingMode { Instantaneous, Statistical, PrecoderAware };

/// Symmetric nonnegative matrix of pairwise RRH interference coupling.
/// Invariants: psi = psi^T, zero diagonal, psi >= 0.
struct CouplingMatrix {
  Mat psi;  // N x N
  CouplingMode mode = CouplingMode::Instantaneous;
};

/// psi(i,j) = ||H_ij||_F^2 + ||H_ji||_F^2 where H_ij stacks the channels
/// from RRH i's antennas to the users served by RRH j.
CouplingMatrix coupling_instantaneous(const ChannelSet& channels,
                                      const Deployment& dep);

/// Pathloss-only coupling: each pathloss factor is replicated across the M
/// antenna columns, so ||H~_ij||_F^2 = M * sum_{u in U_j} g(i,u)^2.
/// Independent of fast fading.
CouplingMatrix coupling_statistical(const PathlossSet& pathloss,
                                    const Deployment& dep);

/// psi(i,j) = ||H_ij W_j||_F^2 + ||H_ji W_i||_F^2 with W_j the M x |U_j|
/// precoder of RRH j (columns ordered as served_users()).
CouplingMatrix coupling_precoder_aware(const ChannelSet& channels,
                                       const std::vector<CMat>& precoders,
                                       const Deployment& dep);

void write_psi_csv(std::ostream& os, const Mat& psi);
Mat read_psi_csv(std::istream& is);
Mat read_psi_csv_file(const std::string& path);

}  // namespace cran
