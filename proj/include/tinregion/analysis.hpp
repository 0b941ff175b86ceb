#pragma once

#include "conditions.hpp"
#include "polytope.hpp"
#include "potential.hpp"
#include "regions.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

namespace tin {

// GDoF achieved by (order, r): the level above the strongest of the not-yet-cancelled same-cell
// signals and all other-cell signals, floored at zero. Users without a power exponent are off.
inline GdofTuple gdof_from_allocation(const NetworkSpec& net, const DecodingOrder& order, const PowerAllocation& alloc) {
  if (static_cast<int>(alloc.r.size()) != net.user_count()) throw PreconditionError("allocation size mismatch");
  if (static_cast<int>(order.per_cell.size()) != net.cells()) throw PreconditionError("order does not match network");
  std::vector<int> position(net.user_count(), -1);
  for (int k = 1; k <= net.cells(); ++k)
    for (std::size_t p = 0; p < order.per_cell[k - 1].size(); ++p) position[net.index({k, order.per_cell[k - 1][p]})] = static_cast<int>(p);
  for (int u = 0; u < net.user_count(); ++u) {
    if (!alloc.r[u]) continue;
    if (position[u] < 0) throw PreconditionError("user " + to_string(net.user(u)) + " is on but not in the order");
    if (*alloc.r[u] > 0) throw PreconditionError("power exponents must be <= 0");
  }
  GdofTuple d(net.user_count(), 0);
  for (int u = 0; u < net.user_count(); ++u) {
    if (!alloc.r[u]) continue;
    const int k = net.cell_of(u);
    std::optional<Rational> interference;
    for (int v = 0; v < net.user_count(); ++v) {
      if (v == u || !alloc.r[v]) continue;
      bool counts = net.cell_of(v) != k || position[v] < position[u];
      if (!counts) continue;
      Rational level = *alloc.r[v] + net.alpha(v, k);
      if (!interference || level > *interference) interference = level;
    }
    Rational noise_floor = interference && *interference > 0 ? *interference : Rational(0);
    Rational value = *alloc.r[u] + net.alpha(u, k) - noise_floor;
    d[u] = value > 0 ? value : Rational(0);
  }
  return d;
}

struct MembershipWitness {
  DecodingOrder order;
  Subnetwork subnetwork;
  PowerAllocation allocation;
};

struct GeneralMembership {
  bool member = false;
  std::optional<MembershipWitness> witness;
  int orders_tested = 0;
};

// Union membership: deactivate the zero coordinates and try every order of the remaining users.
inline GeneralMembership general_membership(const NetworkSpec& net, const GdofTuple& d) {
  if (static_cast<int>(d.size()) != net.user_count()) throw PreconditionError("GDoF tuple size mismatch");
  for (const auto& x : d)
    if (x < 0) throw PreconditionError("GDoF tuple must be nonnegative");
  Subnetwork s = Subnetwork::support(d);
  GeneralMembership out;
  for (const auto& order : enumerate_orders(net, s)) {
    ++out.orders_tested;
    PotentialGraph g = build_potential_graph(net, order, s, d);
    auto res = feasible_by_negative_cycle(g);
    if (!res.feasible) continue;
    PowerAllocation alloc;
    alloc.r.assign(net.user_count(), std::nullopt);
    for (std::size_t v = 0; v < g.vertex_user.size(); ++v) alloc.r[g.vertex_user[v]] = res.distance[v + 1];
    out.member = true;
    out.witness = MembershipWitness{order, s, std::move(alloc)};
    return out;
  }
  return out;
}

// Active coordinates of a region as an LP system; `empty` when a bound on forced users alone is negative.
struct RegionSystem {
  LinearSystem system;
  std::vector<int> coords;  // region coordinate of each LP variable
  bool empty = false;
};

inline RegionSystem region_system(const PolyRegion& region) {
  RegionSystem rs;
  std::vector<int> var(region.dimension(), -1);
  for (int u = 0; u < region.dimension(); ++u)
    if (!region.forced_zero[u]) {
      var[u] = static_cast<int>(rs.coords.size());
      rs.coords.push_back(u);
    }
  rs.system.n = static_cast<int>(rs.coords.size());
  for (const auto& ineq : region.inequalities) {
    std::vector<int> row(rs.system.n, 0);
    bool any = false;
    for (int u : ineq.users)
      if (var[u] >= 0) row[var[u]] = 1, any = true;
    if (!any) {
      if (ineq.rhs < 0) rs.empty = true;
      continue;
    }
    rs.system.A.push_back(std::move(row));
    rs.system.b.push_back(ineq.rhs);
  }
  return rs;
}

inline constexpr int kVertexDimensionGuard = 8;

// Exact vertex list of the region, sorted lexicographically; empty when the region is empty.
inline std::vector<GdofTuple> vertices(const PolyRegion& region) {
  RegionSystem rs = region_system(region);
  if (rs.system.n > kVertexDimensionGuard)
    throw GuardExceeded("vertex enumeration limited to " + std::to_string(kVertexDimensionGuard) + " active users");
  if (rs.empty) return {};
  std::vector<GdofTuple> out;
  for (auto& x : enumerate_vertices(rs.system)) {
    GdofTuple d(region.dimension(), 0);
    for (std::size_t j = 0; j < x.size(); ++j) d[rs.coords[j]] = x[j];
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct WeightedOptimum {
  Rational value;
  GdofTuple argmax;
};

inline WeightedOptimum max_weighted_gdof(const PolyRegion& region, const std::vector<Rational>& weights) {
  if (static_cast<int>(weights.size()) != region.dimension()) throw PreconditionError("weight vector size mismatch");
  for (const auto& w : weights)
    if (w < 0) throw PreconditionError("weights must be nonnegative");
  RegionSystem rs = region_system(region);
  if (rs.empty) throw PreconditionError("region is infeasible at zero");
  std::vector<Rational> c;
  for (int u : rs.coords) c.push_back(weights[u]);
  LpSolution sol = simplex_max(rs.system, c);
  if (sol.status == LpStatus::infeasible) throw PreconditionError("region is infeasible at zero");
  if (sol.status == LpStatus::unbounded) throw std::logic_error("weighted GDoF program is unbounded");
  WeightedOptimum out{sol.value, GdofTuple(region.dimension(), 0)};
  for (std::size_t j = 0; j < sol.x.size(); ++j) out.argmax[rs.coords[j]] = sol.x[j];
  return out;
}

// True when every vertex of inner satisfies all of outer's constraints.
inline bool region_includes(const PolyRegion& outer, const PolyRegion& inner) {
  if (outer.dimension() != inner.dimension()) throw PreconditionError("regions index different user sets");
  for (const auto& v : vertices(inner))
    if (!membership(outer, v).member) return false;
  return true;
}

// Limit of the finite-SNR outer bound divided by log P, built from the bound formulas directly.
inline PolyRegion gdof_outer_bound(const NetworkSpec& net) {
  if (!check_optimality(net).optimality_holds)
    throw PreconditionError("optimality conditions fail; the outer bound does not apply");
  PolyRegion region;
  region.dim_users = all_users(net);
  region.forced_zero.assign(net.user_count(), false);
  auto flat = [&](int cell, int slot) { return net.index({cell, slot}); };
  for (int i = 1; i <= net.cells(); ++i)
    for (int l = 1; l <= net.users_in(i); ++l) {
      LinearInequality b;
      for (int s = 1; s <= l; ++s) b.users.push_back(flat(i, s));
      b.rhs = net.alpha(flat(i, l), i);
      b.rhs_terms = {{+1, flat(i, l), i}};
      b.cycle = {i};
      b.depths = {l};
      region.inequalities.push_back(std::move(b));
    }
  if (net.cells() < 2) return region;
  std::vector<int> all_cells(net.cells());
  std::iota(all_cells.begin(), all_cells.end(), 1);
  for (const auto& cyc : enumerate_cyclic_sequences(all_cells, 2)) {
    const int m = cyc.size();
    std::vector<int> depth(m, 1);
    while (true) {
      LinearInequality b;
      b.cycle = cyc.cells;
      b.depths = depth;
      b.rhs = 0;
      for (int j = 0; j < m; ++j) {
        const int cell = cyc.cells[j];
        for (int s = 1; s <= depth[j]; ++s) b.users.push_back(flat(cell, s));
        Rational exponent = net.alpha(flat(cell, depth[j]), cell) - net.alpha(flat(cell, depth[j]), cyc.before(j));
        if (exponent < 0) throw std::logic_error("negative outer-bound exponent under the optimality conditions");
        b.rhs += exponent;
        b.rhs_terms.push_back({+1, flat(cell, depth[j]), cell});
        b.rhs_terms.push_back({-1, flat(cell, depth[j]), cyc.before(j)});
      }
      std::sort(b.users.begin(), b.users.end());
      region.inequalities.push_back(std::move(b));
      int j = m - 1;
      while (j >= 0 && depth[j] == net.users_in(cyc.cells[j])) depth[j--] = 1;
      if (j < 0) break;
      ++depth[j];
    }
  }
  return region;
}

struct RateBound {
  std::vector<int> users;  // flat indices in the sorted labelling
  double rhs_bits = 0;
  std::vector<int> cycle;
  std::vector<int> depths;
};

// Finite-SNR sum-rate bounds in bits, valid when the optimality conditions hold and no link is below
// the noise level.
inline std::vector<RateBound> outer_bound_rates(const FiniteSnrModel& m) {
  const NetworkSpec& net = m.net;
  if (!check_optimality(net).optimality_holds)
    throw PreconditionError("optimality conditions fail; the outer bound does not apply");
  // Every link enters some bound: direct links in the same-cell bounds, cross links in the two-cell cycles.
  for (int u = 0; u < net.user_count(); ++u)
    for (int i = 1; i <= net.cells(); ++i)
      if (m.link[u][i - 1] < 1)
        throw PreconditionError("link " + to_string(net.user(u)) + "->" + std::to_string(i) +
                                " is below the noise level (|h|^2 P < 1)");
  auto flat = [&](int cell, int slot) { return net.index({cell, slot}); };
  std::vector<RateBound> out;
  for (int i = 1; i <= net.cells(); ++i)
    for (int l = 1; l <= net.users_in(i); ++l) {
      RateBound b;
      for (int s = 1; s <= l; ++s) b.users.push_back(flat(i, s));
      b.rhs_bits = std::log2(1.0 + l * m.link[flat(i, l)][i - 1]);
      b.cycle = {i};
      b.depths = {l};
      out.push_back(std::move(b));
    }
  if (net.cells() < 2) return out;
  std::vector<int> all_cells(net.cells());
  std::iota(all_cells.begin(), all_cells.end(), 1);
  for (const auto& cyc : enumerate_cyclic_sequences(all_cells, 2)) {
    const int mm = cyc.size();
    std::vector<int> depth(mm, 1);
    while (true) {
      RateBound b;
      b.cycle = cyc.cells;
      b.depths = depth;
      double rhs = 0;
      for (int j = 0; j < mm; ++j) {
        const int cell = cyc.cells[j];
        const int l = depth[j];
        const int l_next = depth[(j + 1) % mm];
        for (int s = 1; s <= l; ++s) b.users.push_back(flat(cell, s));
        const int top = flat(cell, l);
        rhs += (l - 1) * std::log2(static_cast<double>(l));
        rhs += std::log2(1.0 + (l_next + l) * (m.link[top][cell - 1] / m.link[top][cyc.before(j) - 1]));
      }
      std::sort(b.users.begin(), b.users.end());
      b.rhs_bits = rhs;
      out.push_back(std::move(b));
      int j = mm - 1;
      while (j >= 0 && depth[j] == net.users_in(cyc.cells[j])) depth[j--] = 1;
      if (j < 0) break;
      ++depth[j];
    }
  }
  return out;
}

inline std::vector<RateBound> outer_bound_rates(const FiniteSnrSpec& fs) { return outer_bound_rates(finite_snr_model(fs)); }

// Per-user rates in bits of successive decoding with the given order and power exponents,
// treating other-cell signals as noise.
inline std::vector<double> achievable_rates(const FiniteSnrModel& m, const DecodingOrder& order, const PowerAllocation& alloc) {
  const NetworkSpec& net = m.net;
  if (static_cast<int>(alloc.r.size()) != net.user_count()) throw PreconditionError("allocation size mismatch");
  if (static_cast<int>(order.per_cell.size()) != net.cells()) throw PreconditionError("order does not match network");
  std::vector<int> position(net.user_count(), -1);
  for (int k = 1; k <= net.cells(); ++k)
    for (std::size_t p = 0; p < order.per_cell[k - 1].size(); ++p) position[net.index({k, order.per_cell[k - 1][p]})] = static_cast<int>(p);
  const double lnP = std::log(m.power);
  std::vector<double> r(net.user_count(), 0);
  for (int u = 0; u < net.user_count(); ++u) {
    if (!alloc.r[u]) continue;
    if (*alloc.r[u] > 0) throw PreconditionError("power exponents must be <= 0");
    if (position[u] < 0) throw PreconditionError("user " + to_string(net.user(u)) + " is on but not in the order");
    r[u] = to_double(*alloc.r[u]);
  }
  auto received = [&](int tx, int rx_cell) { return std::exp((r[tx] + m.level[tx][rx_cell - 1]) * lnP); };
  std::vector<double> rate(net.user_count(), 0.0);
  for (int u = 0; u < net.user_count(); ++u) {
    if (!alloc.r[u]) continue;
    const int k = net.cell_of(u);
    double noise = 1.0;
    for (int v = 0; v < net.user_count(); ++v) {
      if (v == u || !alloc.r[v]) continue;
      if (net.cell_of(v) != k || position[v] < position[u]) noise += received(v, k);
    }
    rate[u] = std::log2(1.0 + received(u, k) / noise);
  }
  return rate;
}

inline std::vector<double> achievable_rates(const FiniteSnrSpec& fs, const DecodingOrder& order, const PowerAllocation& alloc) {
  return achievable_rates(finite_snr_model(fs), order, alloc);
}

struct GapEntry {
  int corner = 0;  // index into GapReport::corners
  int bound = 0;   // index into GapReport::bounds
  double achieved_sum = 0;
  double gap_bits = 0;
  bool tight = false;  // the corner meets this bound with equality at the GDoF level
};

struct GapReport {
  double log2_power = 0;
  std::vector<RateBound> bounds;
  std::vector<GdofTuple> corners;
  std::vector<GapEntry> per_bound;
  double min_gap_bits = 0;
  double max_gap_bits = 0;        // over all (corner, bound) pairs
  double max_tight_gap_bits = 0;  // over pairs tight at the GDoF level
};

// Realizes sampled vertices of the identity-order region with recovered power exponents and compares
// the resulting finite-SNR sum rates with every outer bound. sample_vertices <= 0 uses all vertices.
inline GapReport gap_report(const FiniteSnrModel& m, int sample_vertices = 0) {
  const NetworkSpec& net = m.net;
  GapReport rep;
  rep.log2_power = std::log2(m.power);
  rep.bounds = outer_bound_rates(m);
  PolyRegion gdof = gdof_outer_bound(net);
  auto all = vertices(polyhedral_region(net, DecodingOrder::identity(net)));
  if (sample_vertices <= 0 || sample_vertices >= static_cast<int>(all.size())) {
    rep.corners = all;
  } else if (sample_vertices == 1) {
    rep.corners = {all.back()};
  } else {
    for (int t = 0; t < sample_vertices; ++t) {
      std::size_t idx = static_cast<std::size_t>(std::llround(static_cast<double>(t) * (all.size() - 1) / (sample_vertices - 1)));
      rep.corners.push_back(all[idx]);
    }
  }
  bool first = true;
  bool first_tight = true;
  for (std::size_t c = 0; c < rep.corners.size(); ++c) {
    const GdofTuple& d = rep.corners[c];
    auto gm = general_membership(net, d);
    if (!gm.member) throw std::logic_error("identity-order vertex is not achievable");
    auto rates = achievable_rates(m, gm.witness->order, gm.witness->allocation);
    for (std::size_t b = 0; b < rep.bounds.size(); ++b) {
      GapEntry e;
      e.corner = static_cast<int>(c);
      e.bound = static_cast<int>(b);
      for (int u : rep.bounds[b].users) e.achieved_sum += rates[u];
      e.gap_bits = rep.bounds[b].rhs_bits - e.achieved_sum;
      e.tight = lhs_value(gdof.inequalities[b], d) == gdof.inequalities[b].rhs;
      if (first || e.gap_bits < rep.min_gap_bits) rep.min_gap_bits = e.gap_bits;
      if (first || e.gap_bits > rep.max_gap_bits) rep.max_gap_bits = e.gap_bits;
      first = false;
      if (e.tight && (first_tight || e.gap_bits > rep.max_tight_gap_bits)) {
        rep.max_tight_gap_bits = e.gap_bits;
        first_tight = false;
      }
      rep.per_bound.push_back(e);
    }
  }
  return rep;
}

inline GapReport gap_report(const FiniteSnrSpec& fs, int sample_vertices = 0) {
  return gap_report(finite_snr_model(fs), sample_vertices);
}

}  // namespace tin
