#pragma once

#include "model.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace tin {

// Ordered distinct cells modulo rotation, stored with the smallest cell first.
struct CyclicSequence {
  std::vector<int> cells;

  static CyclicSequence canonical(std::vector<int> cells) {
    if (cells.empty()) throw PreconditionError("cyclic sequence must be nonempty");
    std::vector<int> sorted = cells;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw PreconditionError("cyclic sequence entries must be distinct");
    std::rotate(cells.begin(), std::min_element(cells.begin(), cells.end()), cells.end());
    return {std::move(cells)};
  }
  int size() const { return static_cast<int>(cells.size()); }
  // Predecessor of position j, wrapping so that position 0 is preceded by the last entry.
  int before(int j) const { return cells[(j + size() - 1) % size()]; }
  friend auto operator<=>(const CyclicSequence&, const CyclicSequence&) = default;
};

inline std::string to_string(const CyclicSequence& c) {
  std::string out = "(";
  for (std::size_t j = 0; j < c.cells.size(); ++j) out += (j ? "," : "") + std::to_string(c.cells[j]);
  return out + ")";
}

// Every cyclic sequence over nonempty subsets of `cells` with at least min_len entries,
// ordered by length, then lexicographically.
inline std::vector<CyclicSequence> enumerate_cyclic_sequences(std::vector<int> cells, int min_len = 1) {
  if (cells.empty()) throw PreconditionError("cell set must be nonempty");
  if (min_len < 1) throw PreconditionError("minimum length must be at least 1");
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  const int n = static_cast<int>(cells.size());
  std::vector<CyclicSequence> out;
  for (int m = min_len; m <= n; ++m) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + m, true);
    do {
      std::vector<int> chosen;
      for (int t = 0; t < n; ++t)
        if (pick[t]) chosen.push_back(cells[t]);
      do {
        out.push_back({chosen});
      } while (std::next_permutation(chosen.begin() + 1, chosen.end()));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  std::stable_sort(out.begin(), out.end(), [](const CyclicSequence& a, const CyclicSequence& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.cells < b.cells;
  });
  return out;
}

// +/- alpha(tx -> rx_cell), tx a flat user index.
struct AlphaTerm {
  int sign = 1;
  int tx = 0;
  int rx_cell = 1;
  friend auto operator<=>(const AlphaTerm&, const AlphaTerm&) = default;
};

// sum_{u in users} d_u <= rhs. rhs_terms keep the symbolic form of rhs.
struct LinearInequality {
  std::vector<int> users;  // flat indices with coefficient 1, ascending
  Rational rhs;
  std::vector<AlphaTerm> rhs_terms;
  std::vector<int> cycle;   // cells of the bound; a single entry for same-cell bounds
  std::vector<int> depths;  // prefix depth used in each entry of cycle
};

struct PolyRegion {
  std::vector<UserId> dim_users;  // coordinate u is user dim_users[u]
  std::vector<LinearInequality> inequalities;
  std::vector<bool> forced_zero;
  int dimension() const { return static_cast<int>(dim_users.size()); }
};

inline Rational evaluate_terms(const NetworkSpec& net, const std::vector<AlphaTerm>& terms) {
  Rational sum = 0;
  for (const auto& t : terms) sum += t.sign > 0 ? net.alpha(t.tx, t.rx_cell) : Rational(-net.alpha(t.tx, t.rx_cell));
  return sum;
}

inline std::vector<UserId> all_users(const NetworkSpec& net) {
  std::vector<UserId> out;
  for (int u = 0; u < net.user_count(); ++u) out.push_back(net.user(u));
  return out;
}

// Flat indices of the first `depth` decoding positions of a cell (decoded last).
inline std::vector<int> prefix_users(const NetworkSpec& net, const DecodingOrder& order, int cell, int depth) {
  std::vector<int> out;
  for (int p = 0; p < depth; ++p) out.push_back(net.index({cell, order.per_cell[cell - 1][p]}));
  return out;
}

// Bounds of the polyhedral region for `order` over subnetwork s; users outside s are forced to zero.
inline PolyRegion polyhedral_region(const NetworkSpec& net, const DecodingOrder& order, const Subnetwork& s) {
  validate_order(net, order, s);
  PolyRegion region;
  region.dim_users = all_users(net);
  region.forced_zero.resize(net.user_count());
  for (int u = 0; u < net.user_count(); ++u) region.forced_zero[u] = !s.contains(u);

  std::vector<int> active_cells;
  for (int i = 1; i <= net.cells(); ++i) {
    const auto& seq = order.per_cell[i - 1];
    if (seq.empty()) continue;
    active_cells.push_back(i);
    for (int l = 1; l <= static_cast<int>(seq.size()); ++l) {
      LinearInequality ineq;
      ineq.users = prefix_users(net, order, i, l);
      std::sort(ineq.users.begin(), ineq.users.end());
      int top = net.index({i, seq[l - 1]});
      ineq.rhs_terms = {{+1, top, i}};
      ineq.rhs = net.alpha(top, i);
      ineq.cycle = {i};
      ineq.depths = {l};
      region.inequalities.push_back(std::move(ineq));
    }
  }
  if (active_cells.size() < 2) return region;

  for (const auto& cyc : enumerate_cyclic_sequences(active_cells, 2)) {
    const int m = cyc.size();
    std::vector<int> depth(m, 1);
    while (true) {
      LinearInequality ineq;
      ineq.cycle = cyc.cells;
      ineq.depths = depth;
      for (int j = 0; j < m; ++j) {
        int cell = cyc.cells[j];
        auto pre = prefix_users(net, order, cell, depth[j]);
        ineq.users.insert(ineq.users.end(), pre.begin(), pre.end());
        int top = pre.back();
        ineq.rhs_terms.push_back({+1, top, cell});
        ineq.rhs_terms.push_back({-1, top, cyc.before(j)});
      }
      std::sort(ineq.users.begin(), ineq.users.end());
      ineq.rhs = evaluate_terms(net, ineq.rhs_terms);
      region.inequalities.push_back(std::move(ineq));
      int j = m - 1;
      while (j >= 0 && depth[j] == static_cast<int>(order.per_cell[cyc.cells[j] - 1].size())) depth[j--] = 1;
      if (j < 0) break;
      ++depth[j];
    }
  }
  return region;
}

inline PolyRegion polyhedral_region(const NetworkSpec& net, const DecodingOrder& order) {
  return polyhedral_region(net, order, Subnetwork::full(net));
}

// Set function over decode-first-last prefix sets: f(empty) = 0; otherwise the minimum, over cyclic
// sequences covering all participating cells, of the cyclic bound value (a single cell gives its level).
inline Rational set_function_f(const NetworkSpec& net, const DecodingOrder& order, std::vector<int> subset) {
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  if (subset.empty()) return 0;
  if (static_cast<int>(order.per_cell.size()) != net.cells())
    throw PreconditionError("decoding order does not match the network");
  std::vector<int> depth(net.cells() + 1, 0);
  std::vector<int> cells;
  for (int u : subset) {
    if (u < 0 || u >= net.user_count()) throw PreconditionError("user index out of range");
    ++depth[net.cell_of(u)];
  }
  for (int i = 1; i <= net.cells(); ++i) {
    if (depth[i] == 0) continue;
    if (depth[i] > static_cast<int>(order.per_cell[i - 1].size()))
      throw PreconditionError("subset is not a prefix set of the decoding order");
    auto pre = prefix_users(net, order, i, depth[i]);
    std::sort(pre.begin(), pre.end());
    for (int u : pre)
      if (!std::binary_search(subset.begin(), subset.end(), u))
        throw PreconditionError("subset is not a prefix set of the decoding order in cell " + std::to_string(i));
    cells.push_back(i);
  }
  auto top = [&](int cell) { return net.index({cell, order.per_cell[cell - 1][depth[cell] - 1]}); };
  if (cells.size() == 1) return net.alpha(top(cells[0]), cells[0]);
  std::optional<Rational> best;
  for (const auto& cyc : enumerate_cyclic_sequences(cells, static_cast<int>(cells.size()))) {
    Rational sum = 0;
    for (int j = 0; j < cyc.size(); ++j) {
      int cell = cyc.cells[j];
      sum += net.alpha(top(cell), cell) - net.alpha(top(cell), cyc.before(j));
    }
    if (!best || sum < *best) best = sum;
  }
  return *best;
}

inline Rational lhs_value(const LinearInequality& ineq, const GdofTuple& d) {
  Rational sum = 0;
  for (int u : ineq.users) sum += d[u];
  return sum;
}

struct RegionMembership {
  enum class Failure { none, negative, forced_zero, inequality };
  bool member = true;
  Failure failure = Failure::none;
  int index = -1;  // user for negative/forced_zero, inequality position otherwise
};

inline RegionMembership membership(const PolyRegion& region, const GdofTuple& d) {
  if (static_cast<int>(d.size()) != region.dimension())
    throw PreconditionError("GDoF tuple has " + std::to_string(d.size()) + " entries, region has " +
                            std::to_string(region.dimension()));
  for (int u = 0; u < region.dimension(); ++u) {
    if (d[u] < 0) return {false, RegionMembership::Failure::negative, u};
    if (region.forced_zero[u] && d[u] != 0) return {false, RegionMembership::Failure::forced_zero, u};
  }
  for (std::size_t t = 0; t < region.inequalities.size(); ++t)
    if (lhs_value(region.inequalities[t], d) > region.inequalities[t].rhs)
      return {false, RegionMembership::Failure::inequality, static_cast<int>(t)};
  return {};
}

}  // namespace tin
