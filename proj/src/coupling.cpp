#include "cran/coupling.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace cran {

namespace {

// ||H_ij||_F^2 with H_ij the stack of channels RRH i -> users of RRH j.
double channel_block_energy(const ChannelSet& channels, int i,
                            const std::vector<int>& users_of_j) {
  double e = 0.0;
  for (int u : users_of_j) e += channels.h[i].col(u).squaredNorm();
  return e;
}

}  // namespace

CouplingMatrix coupling_instantaneous(const ChannelSet& channels,
                                      const Deployment& dep) {
  const int n = dep.num_rrhs();
  const auto users = dep.served_users();
  CouplingMatrix cm;
  cm.mode = CouplingMode::Instantaneous;
  cm.psi = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double c = channel_block_energy(channels, i, users[j]) +
                       channel_block_energy(channels, j, users[i]);
      cm.psi(i, j) = c;
      cm.psi(j, i) = c;
    }
  }
  return cm;
}

CouplingMatrix coupling_statistical(const PathlossSet& pathloss,
                                    const Deployment& dep) {
  const int n = dep.num_rrhs();
  const int m = dep.antennas_per_rrh;
  const auto users = dep.served_users();
  CouplingMatrix cm;
  cm.mode = CouplingMode::Statistical;
  cm.psi = Mat::Zero(n, n);
  // Pathloss replicated over the M antenna columns:
  // ||H~_ij||_F^2 = M * sum_{u in U_j} g(i,u)^2.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double c = 0.0;
      for (int u : users[j]) c += pathloss.g(i, u) * pathloss.g(i, u);
      for (int u : users[i]) c += pathloss.g(j, u) * pathloss.g(j, u);
      c *= m;
      cm.psi(i, j) = c;
      cm.psi(j, i) = c;
    }
  }
  return cm;
}

CouplingMatrix coupling_precoder_aware(const ChannelSet& channels,
                                       const std::vector<CMat>& precoders,
                                       const Deployment& dep) {
  const int n = dep.num_rrhs();
  const int m = dep.antennas_per_rrh;
  const auto users = dep.served_users();
  if (static_cast<int>(precoders.size()) != n) {
    throw DimensionError("coupling_precoder_aware: one precoder per RRH required");
  }
  for (int j = 0; j < n; ++j) {
    if (precoders[j].rows() != m ||
        precoders[j].cols() != static_cast<Eigen::Index>(users[j].size())) {
      throw DimensionError("coupling_precoder_aware: precoder " +
                           std::to_string(j) + " must be M x |U_j|");
    }
  }
  // ||H_ij W_j||_F^2; rows of H_ij are the conjugated channels RRH i -> U_j.
  auto leak = [&](int i, int j) {
    double e = 0.0;
    for (int u : users[j]) {
      e += (channels.h[i].col(u).adjoint() * precoders[j]).squaredNorm();
    }
    return e;
  };
  CouplingMatrix cm;
  cm.mode = CouplingMode::PrecoderAware;
  cm.psi = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double c = leak(i, j) + leak(j, i);
      cm.psi(i, j) = c;
      cm.psi(j, i) = c;
    }
  }
  return cm;
}

void write_psi_csv(std::ostream& os, const Mat& psi) {
  os.precision(17);
  for (Eigen::Index i = 0; i < psi.rows(); ++i) {
    for (Eigen::Index j = 0; j < psi.cols(); ++j) {
      if (j > 0) os << ',';
      os << psi(i, j);
    }
    os << '\n';
  }
}

Mat read_psi_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("read_psi_csv: non-numeric cell '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("read_psi_csv: empty input");
  const std::size_t n = rows.size();
  Mat psi(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw ConfigError("read_psi_csv: matrix must be square");
    }
    for (std::size_t j = 0; j < n; ++j) psi(i, j) = rows[i][j];
  }
  return psi;
}

Mat read_psi_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open coupling matrix file: " + path);
  return read_psi_csv(is);
}

}  // namespace cran
