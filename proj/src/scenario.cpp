#include "cran/scenario.hpp"

#include <algorithm>
#include <ostream>
#include <random>

namespace cran {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b, std::uint64_t c) {
  // splitmix64 over a running mix of the inputs
  std::uint64_t z = master;
  for (std::uint64_t w : {a, b, c}) {
    z += 0x9e3779b97f4a7c15ULL + w;
    std::uint64_t x = z;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    z ^= x ^ (x >> 31);
  }
  return z;
}

std::vector<std::vector<int>> Deployment::served_users() const {
  std::vector<std::vector<int>> users(num_rrhs());
  for (int u = 0; u < num_users(); ++u) {
    users.at(association.at(u)).push_back(u);
  }
  return users;
}

std::vector<int> associate_users(const Mat& energy, int users_per_rrh) {
  const int n = static_cast<int>(energy.rows());
  const int k = static_cast<int>(energy.cols());
  std::vector<int> association(k, -1);
  std::vector<int> slots(n, users_per_rrh);
  // Repeatedly attach the user with the strongest available link.
  for (int assigned = 0; assigned < k; ++assigned) {
    int best_user = -1;
    int best_rrh = -1;
    double best_energy = 0.0;
    for (int u = 0; u < k; ++u) {
      if (association[u] >= 0) continue;
      for (int i = 0; i < n; ++i) {
        if (slots[i] == 0) continue;
        if (best_user < 0 || energy(i, u) > best_energy ||
            (energy(i, u) == best_energy &&
             (i < best_rrh || (i == best_rrh && u < best_user)))) {
          best_user = u;
          best_rrh = i;
          best_energy = energy(i, u);
        }
      }
    }
    if (best_user < 0) {
      throw ConfigError("associate_users: no RRH slot left for a user");
    }
    association[best_user] = best_rrh;
    --slots[best_rrh];
  }
  return association;
}

Deployment drop_deployment(std::uint64_t seed, const DeploymentParams& params) {
  if (params.num_rrhs <= 0 || params.num_users <= 0 || params.antennas <= 0 ||
      params.users_per_rrh <= 0 || params.area_side <= 0.0) {
    throw ConfigError("drop_deployment: all parameters must be positive");
  }
  if (params.num_rrhs * params.users_per_rrh != params.num_users) {
    throw ConfigError("drop_deployment: K must equal N*J under quota association");
  }
  Deployment dep;
  dep.area_side = params.area_side;
  dep.antennas_per_rrh = params.antennas;
  dep.users_per_rrh = params.users_per_rrh;
  dep.rrh_positions.resize(2, params.num_rrhs);
  dep.user_positions.resize(2, params.num_users);

  std::mt19937_64 rng(derive_seed(seed, 0x6465706cULL));
  std::uniform_real_distribution<double> uni(0.0, params.area_side);
  for (int i = 0; i < params.num_rrhs; ++i) {
    dep.rrh_positions(0, i) = uni(rng);
    dep.rrh_positions(1, i) = uni(rng);
  }
  for (int u = 0; u < params.num_users; ++u) {
    dep.user_positions(0, u) = uni(rng);
    dep.user_positions(1, u) = uni(rng);
  }

  // Associate by proximity: negative squared distance orders like any
  // monotone-decreasing pathloss gain.
  Mat energy(params.num_rrhs, params.num_users);
  for (int i = 0; i < params.num_rrhs; ++i) {
    for (int u = 0; u < params.num_users; ++u) {
      energy(i, u) =
          -(dep.rrh_positions.col(i) - dep.user_positions.col(u)).squaredNorm();
    }
  }
  dep.association = associate_users(energy, params.users_per_rrh);
  return dep;
}

PathlossSet compute_pathloss(const Deployment& dep, double exponent,
                             double reference_gain, double min_distance) {
  if (exponent <= 0.0) {
    throw ConfigError("compute_pathloss: exponent must be positive");
  }
  PathlossSet pl;
  pl.g.resize(dep.num_rrhs(), dep.num_users());
  for (int i = 0; i < dep.num_rrhs(); ++i) {
    for (int u = 0; u < dep.num_users(); ++u) {
      const double d = std::max(
          (dep.rrh_positions.col(i) - dep.user_positions.col(u)).norm(),
          min_distance);
      pl.g(i, u) = reference_gain * std::pow(d, -exponent);
    }
  }
  return pl;
}

ChannelSet draw_channels(std::uint64_t seed, int realization_index,
                         const Deployment& dep, FadingMode mode,
                         const PathlossSet* pathloss, double noise_power) {
  if (mode == FadingMode::IidPathloss && pathloss == nullptr) {
    throw ConfigError("draw_channels: pathloss mode needs a PathlossSet");
  }
  ChannelSet ch;
  ch.noise_power = noise_power;
  ch.realization_index = realization_index;
  ch.h.resize(dep.num_rrhs());

  std::mt19937_64 rng(derive_seed(seed, 0x6368616eULL,
                                  static_cast<std::uint64_t>(realization_index)));
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
  const int m = dep.antennas_per_rrh;
  for (int i = 0; i < dep.num_rrhs(); ++i) {
    ch.h[i].resize(m, dep.num_users());
    for (int u = 0; u < dep.num_users(); ++u) {
      const double scale =
          mode == FadingMode::IidPathloss ? std::sqrt(pathloss->g(i, u)) : 1.0;
      for (int a = 0; a < m; ++a) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        ch.h[i](a, u) = scale * std::complex<double>(re, im);
      }
    }
  }
  return ch;
}

void dump_deployment(std::ostream& os, const Deployment& dep) {
  os << "area_side " << dep.area_side << "\n"
     << "antennas_per_rrh " << dep.antennas_per_rrh << "\n"
     << "users_per_rrh " << dep.users_per_rrh << "\n";
  os << "rrh_positions\n" << dep.rrh_positions.transpose() << "\n";
  os << "user_positions\n" << dep.user_positions.transpose() << "\n";
  os << "association";
  for (int a : dep.association) os << ' ' << a;
  os << "\n";
}

void dump_channels(std::ostream& os, const ChannelSet& ch) {
  os << "noise_power " << ch.noise_power << "\n"
     << "realization_index " << ch.realization_index << "\n";
  for (std::size_t i = 0; i < ch.h.size(); ++i) {
    os << "h[" << i << "]\n" << ch.h[i] << "\n";
  }
}

}  // namespace cran
