#pragma once

#include "rational.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace tin {

// Transmitter (l, k): cell k in 1..K, slot l in 1..L_k.
struct UserId {
  int cell = 1;
  int slot = 1;
  friend auto operator<=>(const UserId&, const UserId&) = default;
};

inline std::string to_string(UserId u) {
  return std::to_string(u.cell) + ":" + std::to_string(u.slot);
}

// Users are addressed by a flat index: cell 1 slots first, then cell 2, ...
class NetworkSpec {
 public:
  NetworkSpec() = default;

  // alpha[u][i] is the level from flat user u (input slot order) to receiver cell i+1.
  // Negative levels are clipped to zero with a warning; slots are then stably sorted by direct level.
  NetworkSpec(std::vector<int> users_per_cell, std::vector<std::vector<Rational>> alpha)
      : users_per_cell_(std::move(users_per_cell)) {
    if (users_per_cell_.empty()) throw PreconditionError("network needs at least one cell");
    for (int l : users_per_cell_)
      if (l < 1) throw PreconditionError("every cell needs at least one user");
    offset_.assign(users_per_cell_.size() + 1, 0);
    for (std::size_t k = 0; k < users_per_cell_.size(); ++k) offset_[k + 1] = offset_[k] + users_per_cell_[k];
    const int n = offset_.back();
    const int K = cells();
    if (static_cast<int>(alpha.size()) != n)
      throw PreconditionError("alpha has " + std::to_string(alpha.size()) + " transmitter rows, expected " +
                              std::to_string(n));
    for (int u = 0; u < n; ++u) {
      if (static_cast<int>(alpha[u].size()) != K)
        throw PreconditionError("alpha row for user " + to_string(user(u)) + " has " +
                                std::to_string(alpha[u].size()) + " receiver entries, expected " +
                                std::to_string(K));
      for (int i = 0; i < K; ++i) {
        if (alpha[u][i] < 0) {
          warnings_.push_back("alpha" + to_string(user(u)) + "->" + std::to_string(i + 1) + " = " +
                              to_string(alpha[u][i]) + " clipped to 0");
          alpha[u][i] = 0;
        }
      }
    }
    alpha_.resize(n);
    original_slot_.resize(n);
    for (int k = 1; k <= K; ++k) {
      std::vector<int> perm(users_in(k));
      std::iota(perm.begin(), perm.end(), 0);
      const int base = first_index(k);
      std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
        return alpha[base + a][k - 1] < alpha[base + b][k - 1];
      });
      for (int s = 0; s < users_in(k); ++s) {
        alpha_[base + s] = std::move(alpha[base + perm[s]]);
        original_slot_[base + s] = perm[s] + 1;
        if (perm[s] != s)
          warnings_.push_back("cell " + std::to_string(k) + ": input slot " + std::to_string(perm[s] + 1) +
                              " stored as slot " + std::to_string(s + 1));
      }
    }
  }

  int cells() const { return static_cast<int>(users_per_cell_.size()); }
  int users_in(int cell) const { return users_per_cell_.at(cell - 1); }
  int user_count() const { return offset_.empty() ? 0 : offset_.back(); }
  const std::vector<int>& users_per_cell() const { return users_per_cell_; }
  int first_index(int cell) const { return offset_.at(cell - 1); }

  bool contains(UserId u) const {
    return u.cell >= 1 && u.cell <= cells() && u.slot >= 1 && u.slot <= users_in(u.cell);
  }
  int index(UserId u) const {
    if (!contains(u)) throw PreconditionError("no user " + to_string(u) + " in network");
    return offset_[u.cell - 1] + u.slot - 1;
  }
  UserId user(int index) const {
    auto it = std::upper_bound(offset_.begin(), offset_.end(), index);
    int cell = static_cast<int>(it - offset_.begin());
    return UserId{cell, index - offset_[cell - 1] + 1};
  }
  int cell_of(int index) const { return user(index).cell; }

  const Rational& alpha(int tx_index, int rx_cell) const { return alpha_.at(tx_index).at(rx_cell - 1); }
  const Rational& alpha(UserId tx, int rx_cell) const { return alpha(index(tx), rx_cell); }
  const Rational& direct(int tx_index) const { return alpha(tx_index, cell_of(tx_index)); }

  // Input slot label of a stored (sorted) slot.
  int original_slot(UserId stored) const { return original_slot_.at(index(stored)); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  NetworkSpec scaled(const Rational& c) const {
    if (c <= 0) throw PreconditionError("scale factor must be positive");
    NetworkSpec out = *this;
    for (auto& row : out.alpha_)
      for (auto& a : row) a *= c;
    return out;
  }

 private:
  std::vector<int> users_per_cell_;
  std::vector<int> offset_;
  std::vector<std::vector<Rational>> alpha_;
  std::vector<int> original_slot_;
  std::vector<std::string> warnings_;
};

using GdofTuple = std::vector<Rational>;  // indexed by flat user

struct Subnetwork {
  std::vector<bool> active;  // indexed by flat user

  static Subnetwork full(const NetworkSpec& net) { return {std::vector<bool>(net.user_count(), true)}; }
  static Subnetwork none(const NetworkSpec& net) { return {std::vector<bool>(net.user_count(), false)}; }
  static Subnetwork support(const GdofTuple& d) {
    Subnetwork s{std::vector<bool>(d.size(), false)};
    for (std::size_t u = 0; u < d.size(); ++u) s.active[u] = d[u] != 0;
    return s;
  }
  static Subnetwork from_mask(const NetworkSpec& net, unsigned long long mask) {
    Subnetwork s = none(net);
    for (int u = 0; u < net.user_count(); ++u) s.active[u] = (mask >> u) & 1ULL;
    return s;
  }

  bool contains(int index) const { return active.at(index); }
  int size() const { return static_cast<int>(std::count(active.begin(), active.end(), true)); }
  std::vector<int> slots_in(const NetworkSpec& net, int cell) const {
    std::vector<int> out;
    for (int l = 1; l <= net.users_in(cell); ++l)
      if (active.at(net.index({cell, l}))) out.push_back(l);
    return out;
  }
  friend bool operator==(const Subnetwork&, const Subnetwork&) = default;
};

// per_cell[k-1][p-1] is the slot at decoding position p of cell k. The highest position is decoded
// (and cancelled) first. For a subnetwork only its active slots appear.
struct DecodingOrder {
  std::vector<std::vector<int>> per_cell;

  static DecodingOrder identity(const NetworkSpec& net, const Subnetwork& s) {
    DecodingOrder o;
    for (int k = 1; k <= net.cells(); ++k) o.per_cell.push_back(s.slots_in(net, k));
    return o;
  }
  static DecodingOrder identity(const NetworkSpec& net) { return identity(net, Subnetwork::full(net)); }
  static DecodingOrder reversed(const NetworkSpec& net) {
    DecodingOrder o = identity(net);
    for (auto& c : o.per_cell) std::reverse(c.begin(), c.end());
    return o;
  }
  friend bool operator==(const DecodingOrder&, const DecodingOrder&) = default;
};

// Throws unless each cell's sequence is a bijection onto the active slots of s in that cell.
inline void validate_order(const NetworkSpec& net, const DecodingOrder& order, const Subnetwork& s) {
  if (static_cast<int>(s.active.size()) != net.user_count())
    throw PreconditionError("subnetwork size does not match the network");
  if (static_cast<int>(order.per_cell.size()) != net.cells())
    throw PreconditionError("decoding order has " + std::to_string(order.per_cell.size()) + " cells, expected " +
                            std::to_string(net.cells()));
  for (int k = 1; k <= net.cells(); ++k) {
    std::vector<int> seq = order.per_cell[k - 1];
    std::sort(seq.begin(), seq.end());
    if (seq != s.slots_in(net, k))
      throw PreconditionError("decoding order of cell " + std::to_string(k) +
                              " is not a permutation of the active slots");
  }
}

inline std::string to_string(const DecodingOrder& order) {
  std::string out;
  for (std::size_t k = 0; k < order.per_cell.size(); ++k) {
    if (k) out += ';';
    for (std::size_t p = 0; p < order.per_cell[k].size(); ++p) {
      if (p) out += ',';
      out += std::to_string(order.per_cell[k][p]);
    }
  }
  return out;
}

// All orders over the active users of s: the product of per-cell permutations, identity first.
inline std::vector<DecodingOrder> enumerate_orders(const NetworkSpec& net, const Subnetwork& s) {
  std::vector<std::vector<std::vector<int>>> choices(net.cells());
  for (int k = 1; k <= net.cells(); ++k) {
    std::vector<int> slots = s.slots_in(net, k);
    do {
      choices[k - 1].push_back(slots);
    } while (std::next_permutation(slots.begin(), slots.end()));
  }
  std::vector<DecodingOrder> out;
  std::vector<std::size_t> pick(net.cells(), 0);
  while (true) {
    DecodingOrder o;
    for (int k = 0; k < net.cells(); ++k) o.per_cell.push_back(choices[k][pick[k]]);
    out.push_back(std::move(o));
    int k = net.cells() - 1;
    while (k >= 0 && ++pick[k] == choices[k].size()) pick[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

// Transmit power exponents; an empty optional marks a deactivated user (r = -infinity).
struct PowerAllocation {
  std::vector<std::optional<Rational>> r;  // indexed by flat user
};

// Finite-SNR description in input slot order; gains are magnitudes |h| per (user, receiver cell).
struct FiniteSnrSpec {
  double nominal_power = 0;
  std::vector<int> users_per_cell;
  std::vector<std::vector<double>> gain;  // [flat user][rx cell - 1]
  std::vector<double> tx_power;           // [flat user]
};

inline void validate_finite_snr(const FiniteSnrSpec& fs) {
  if (!(fs.nominal_power > 1)) throw PreconditionError("nominal power must exceed 1");
  int n = std::accumulate(fs.users_per_cell.begin(), fs.users_per_cell.end(), 0);
  if (static_cast<int>(fs.gain.size()) != n || static_cast<int>(fs.tx_power.size()) != n)
    throw PreconditionError("finite-SNR block dimensions do not match users_per_cell");
  for (int u = 0; u < n; ++u) {
    if (!(fs.tx_power[u] > 0)) throw PreconditionError("transmit powers must be positive");
    if (fs.gain[u].size() != fs.users_per_cell.size())
      throw PreconditionError("gain row has wrong number of receiver cells");
    for (double h : fs.gain[u])
      if (!(h > 0) || !std::isfinite(h)) throw PreconditionError("channel gains must be positive");
  }
}

// Finite-SNR data aligned with the sorted slots of strength_levels().
struct FiniteSnrModel {
  NetworkSpec net;
  double power = 0;
  std::vector<std::vector<double>> link;   // |h|^2 * P_tx, [sorted flat][rx cell - 1]
  std::vector<std::vector<double>> level;  // unrounded strength levels, same indexing
};

inline FiniteSnrModel finite_snr_model(const FiniteSnrSpec& fs, double precision = kDefaultPrecision) {
  validate_finite_snr(fs);
  const int n = static_cast<int>(fs.gain.size());
  const int K = static_cast<int>(fs.users_per_cell.size());
  const double logP = std::log(fs.nominal_power);
  std::vector<std::vector<double>> link(n, std::vector<double>(K)), level(n, std::vector<double>(K));
  std::vector<std::vector<Rational>> alpha(n, std::vector<Rational>(K));
  for (int u = 0; u < n; ++u)
    for (int i = 0; i < K; ++i) {
      link[u][i] = fs.gain[u][i] * fs.gain[u][i] * fs.tx_power[u];
      level[u][i] = std::log(std::max(1.0, link[u][i])) / logP;
      alpha[u][i] = rationalize(level[u][i], precision);
    }
  FiniteSnrModel m;
  m.net = NetworkSpec(fs.users_per_cell, alpha);
  m.power = fs.nominal_power;
  m.link.resize(n);
  m.level.resize(n);
  for (int u = 0; u < n; ++u) {
    UserId stored = m.net.user(u);
    int src = m.net.first_index(stored.cell) + m.net.original_slot(stored) - 1;
    m.link[u] = link[src];
    m.level[u] = level[src];
  }
  return m;
}

inline NetworkSpec strength_levels(const FiniteSnrSpec& fs, double precision = kDefaultPrecision) {
  return finite_snr_model(fs, precision).net;
}

// Finite-SNR instance whose levels equal alpha at nominal power P (unit transmit powers).
inline FiniteSnrSpec finite_snr_from_levels(const NetworkSpec& net, double P) {
  if (!(P > 1)) throw PreconditionError("nominal power must exceed 1");
  FiniteSnrSpec fs;
  fs.nominal_power = P;
  fs.users_per_cell = net.users_per_cell();
  for (int u = 0; u < net.user_count(); ++u) {
    std::vector<double> row;
    for (int i = 1; i <= net.cells(); ++i) row.push_back(std::sqrt(std::pow(P, to_double(net.alpha(u, i)))));
    fs.gain.push_back(row);
    fs.tx_power.push_back(1.0);
  }
  return fs;
}

}  // namespace tin
