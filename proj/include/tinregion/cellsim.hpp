#pragma once

#include "conditions.hpp"
#include "model.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace tin {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }
};

// Uniform doubles for one (seed, stream) pair; each block yields two 53-bit draws.
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

  double uniform() {
    if (have_ == 0) {
      auto out = Philox4x32::block({static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32),
                                    static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32)},
                                   key_);
      ++counter_;
      buf_[0] = (std::uint64_t{out[0]} << 32) | out[1];
      buf_[1] = (std::uint64_t{out[2]} << 32) | out[3];
      have_ = 2;
    }
    std::uint64_t bits = buf_[2 - have_--];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int have_ = 0;
};

enum class Geometry { linear_sectorized, circular };

struct ScenarioParams {
  Geometry geometry = Geometry::linear_sectorized;
  int circular_cells = 4;
  double site_radius_m = 243;
  double exclusion_m = 35;
  int users_per_cell = 1;
  double tx_power_dbm = 23;
  double noise_floor_dbm = -102;
  double pathloss_a = 148.1;
  double pathloss_b = 37.6;
  double reference_db = 60;  // dB above noise that maps to level 1
  long trials = 1000;
  std::uint64_t seed = 1;

  int cells() const { return geometry == Geometry::linear_sectorized ? 2 : circular_cells; }
};

inline double path_loss_db(double d_km, double a = 148.1, double b = 37.6) {
  if (!(d_km > 0)) throw PreconditionError("distance must be positive");
  return a + b * std::log10(d_km);
}

inline void validate_scenario(const ScenarioParams& p) {
  if (!(p.site_radius_m > 0)) throw PreconditionError("site radius must be positive");
  if (!(p.exclusion_m >= 0) || !(p.exclusion_m < p.site_radius_m))
    throw PreconditionError("exclusion must satisfy 0 <= r0 < r");
  if (p.users_per_cell < 1) throw PreconditionError("need at least one user per cell");
  if (p.geometry == Geometry::circular && p.circular_cells < 2) throw PreconditionError("ring needs at least 2 cells");
  if (!(p.reference_db > 0)) throw PreconditionError("reference must be positive");
  if (p.trials < 1) throw PreconditionError("need at least one trial");
}

// Distance in meters from every user (flat, input slot order) to every site; infinity marks links that
// do not interfere (non-adjacent cells, or behind a sector antenna).
inline std::vector<std::vector<double>> sample_distances(const ScenarioParams& p, std::uint64_t trial_index) {
  validate_scenario(p);
  TrialStream rng(p.seed, trial_index);
  const int K = p.cells();
  const int L = p.users_per_cell;
  const double r = p.site_radius_m, r0 = p.exclusion_m;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dist(K * L, std::vector<double>(K, inf));
  if (p.geometry == Geometry::linear_sectorized) {
    // Sector of site 1 covers [0, r] looking right, sector of site 2 covers [r, 2r] looking left.
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < L; ++l) {
        double own = r0 + (r - r0) * rng.uniform();
        dist[k * L + l][k] = own;
        dist[k * L + l][1 - k] = 2 * r - own;
      }
    return dist;
  }
  const double circumference = 2 * r * K;
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < L; ++l) {
      double u = 2 * (r - r0) * rng.uniform();
      double offset = u < r - r0 ? r0 + u : -(r0 + u - (r - r0));
      double pos = 2 * r * k + offset;
      for (int j = 0; j < K; ++j) {
        int hop = (j - k + K) % K;
        if (j != k && hop != 1 && hop != K - 1) continue;
        double delta = std::fmod(std::fabs(pos - 2 * r * j), circumference);
        dist[k * L + l][j] = std::min(delta, circumference - delta);
      }
    }
  return dist;
}

inline double level_from_distance(const ScenarioParams& p, double d_m) {
  if (!std::isfinite(d_m)) return 0;
  double snr_db = p.tx_power_dbm - path_loss_db(d_m / 1000.0, p.pathloss_a, p.pathloss_b) - p.noise_floor_dbm;
  return std::max(0.0, snr_db) / p.reference_db;
}

inline NetworkSpec sample_network(const ScenarioParams& p, std::uint64_t trial_index) {
  auto dist = sample_distances(p, trial_index);
  std::vector<std::vector<Rational>> alpha(dist.size(), std::vector<Rational>(p.cells()));
  for (std::size_t u = 0; u < dist.size(); ++u)
    for (int i = 0; i < p.cells(); ++i) alpha[u][i] = rationalize(level_from_distance(p, dist[u][i]));
  return NetworkSpec(std::vector<int>(p.cells(), p.users_per_cell), alpha);
}

struct ProbabilityPoint {
  double r_m = 0;
  int users_per_cell = 0;
  double p_convexity = 0;
  double p_optimality = 0;
  long trials = 0;
  double ci95_convexity = 0;  // normal-approximation half-widths
  double ci95_optimality = 0;
  long implication_violations = 0;  // trials with optimality but not convexity
};

inline double ci95_halfwidth(double p, long n) { return 1.96 * std::sqrt(p * (1 - p) / static_cast<double>(n)); }

inline ProbabilityPoint estimate_probabilities(const ScenarioParams& p) {
  validate_scenario(p);
  long convex = 0, optimal = 0, violations = 0;
  for (long t = 0; t < p.trials; ++t) {
    auto rep = check_conditions(sample_network(p, static_cast<std::uint64_t>(t)));
    convex += rep.convexity_holds;
    optimal += rep.optimality_holds;
    violations += rep.optimality_holds && !rep.convexity_holds;
  }
  ProbabilityPoint pt;
  pt.r_m = p.site_radius_m;
  pt.users_per_cell = p.users_per_cell;
  pt.trials = p.trials;
  pt.p_convexity = static_cast<double>(convex) / p.trials;
  pt.p_optimality = static_cast<double>(optimal) / p.trials;
  pt.ci95_convexity = ci95_halfwidth(pt.p_convexity, p.trials);
  pt.ci95_optimality = ci95_halfwidth(pt.p_optimality, p.trials);
  pt.implication_violations = violations;
  return pt;
}

}  // namespace tin
