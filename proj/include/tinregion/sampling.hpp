#pragma once

#include "conditions.hpp"
#include "model.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

namespace tin {

// Uniform over the grid points k/denominator inside [lo, hi].
inline Rational random_grid(std::mt19937_64& rng, const Rational& lo, const Rational& hi, int denominator) {
  mpz_class a, b;
  Rational slo = lo * denominator, shi = hi * denominator;
  mpz_cdiv_q(a.get_mpz_t(), slo.get_num_mpz_t(), slo.get_den_mpz_t());
  mpz_fdiv_q(b.get_mpz_t(), shi.get_num_mpz_t(), shi.get_den_mpz_t());
  if (b < a) throw PreconditionError("empty grid interval");
  std::uniform_int_distribution<long> pick(a.get_si(), b.get_si());
  Rational q(pick(rng), denominator);
  q.canonicalize();
  return q;
}

inline std::vector<int> random_users_per_cell(std::mt19937_64& rng, int max_cells, int max_users) {
  int K = std::uniform_int_distribution<int>(1, max_cells)(rng);
  std::vector<int> L(K);
  for (auto& l : L) l = std::uniform_int_distribution<int>(1, max_users)(rng);
  return L;
}

// Every level drawn independently from the grid on [0, max_alpha].
inline NetworkSpec random_network(std::mt19937_64& rng, const std::vector<int>& L, int denominator = 20,
                                  const Rational& max_alpha = 2) {
  int n = 0;
  for (int l : L) n += l;
  std::vector<std::vector<Rational>> alpha(n, std::vector<Rational>(L.size()));
  for (auto& row : alpha)
    for (auto& a : row) a = random_grid(rng, 0, max_alpha, denominator);
  return NetworkSpec(L, alpha);
}

// Constructive sampler for the optimality conditions: directs first, then every cross level below
// both the interference slack of its cells and the same-cell ordering cap.
inline NetworkSpec sample_optimal_network(std::mt19937_64& rng, const std::vector<int>& L, int denominator = 20,
                                          const Rational& max_alpha = 2) {
  const int K = static_cast<int>(L.size());
  std::vector<std::vector<Rational>> direct(K);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L[k]; ++l) direct[k].push_back(random_grid(rng, Rational(1, 4), max_alpha, denominator));
    std::sort(direct[k].begin(), direct[k].end());
  }
  // incoming[k]: cap on interference received at cell k; outgoing slack is direct - incoming[k].
  std::vector<Rational> incoming(K);
  for (int k = 0; k < K; ++k) incoming[k] = random_grid(rng, 0, direct[k][0], denominator);

  int n = 0;
  for (int l : L) n += l;
  std::vector<std::vector<Rational>> alpha(n, std::vector<Rational>(K));
  int base = 0;
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L[k]; ++l) alpha[base + l][k] = direct[k][l];
    for (int j = 0; j < K; ++j) {
      if (j == k) continue;
      for (int l = 0; l < L[k]; ++l) {
        Rational cap = direct[k][l] - incoming[k];
        if (incoming[j] < cap) cap = incoming[j];
        for (int lp = 0; lp < l; ++lp) {
          Rational gap = direct[k][l] - direct[k][lp];
          Rational relaxed = (gap + alpha[base + lp][j]) / 2;
          Rational allowed = gap > relaxed ? gap : relaxed;
          if (allowed < cap) cap = allowed;
        }
        alpha[base + l][j] = cap > 0 ? random_grid(rng, 0, cap, denominator) : Rational(0);
      }
    }
    base += L[k];
  }
  NetworkSpec net(L, alpha);
  if (!check_optimality(net).optimality_holds) throw std::logic_error("constructive sampler produced a violation");
  return net;
}

// Rejection sampler for the convexity conditions with cross levels drawn from [0, cross_scale * max_alpha].
inline NetworkSpec sample_convex_network(std::mt19937_64& rng, const std::vector<int>& L, int denominator = 20,
                                         const Rational& max_alpha = 2, const Rational& cross_scale = Rational(1, 2),
                                         int max_tries = 100000) {
  const int K = static_cast<int>(L.size());
  int n = 0;
  for (int l : L) n += l;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    std::vector<std::vector<Rational>> alpha(n, std::vector<Rational>(K));
    int base = 0;
    for (int k = 0; k < K; ++k) {
      for (int l = 0; l < L[k]; ++l)
        for (int j = 0; j < K; ++j)
          alpha[base + l][j] = j == k ? random_grid(rng, 0, max_alpha, denominator)
                                      : random_grid(rng, 0, cross_scale * max_alpha, denominator);
      base += L[k];
    }
    NetworkSpec net(L, alpha);
    if (check_conditions(net).convexity_holds) return net;
  }
  throw std::runtime_error("no convex instance found within the attempt budget");
}

inline DecodingOrder random_order(std::mt19937_64& rng, const NetworkSpec& net, const Subnetwork& s) {
  DecodingOrder o = DecodingOrder::identity(net, s);
  for (auto& seq : o.per_cell) std::shuffle(seq.begin(), seq.end(), rng);
  return o;
}

inline Subnetwork random_subnetwork(std::mt19937_64& rng, const NetworkSpec& net) {
  Subnetwork s = Subnetwork::none(net);
  for (int u = 0; u < net.user_count(); ++u) s.active[u] = std::bernoulli_distribution(0.75)(rng);
  return s;
}

// Tuple on the grid with d_u in [0, spread * direct level], zero outside s.
inline GdofTuple random_gdof(std::mt19937_64& rng, const NetworkSpec& net, const Subnetwork& s, int denominator = 20,
                             const Rational& spread = Rational(3, 4)) {
  GdofTuple d(net.user_count(), 0);
  for (int u = 0; u < net.user_count(); ++u)
    if (s.contains(u)) d[u] = random_grid(rng, 0, spread * net.direct(u), denominator);
  return d;
}

}  // namespace tin
