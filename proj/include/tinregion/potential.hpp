#pragma once

#include "model.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace tin {

enum class EdgeFamily {
  intra_weaker_to_stronger,  // decoded later -> decoded earlier within a cell (w = 0)
  intra_stronger_to_weaker,
  cross_cell,
  ground_to_user,
  user_to_ground,
};

struct PotentialEdge {
  int from = 0;
  int to = 0;
  Rational length;
  EdgeFamily family = EdgeFamily::cross_cell;
};

// Vertex 0 is the ground node; vertex v >= 1 stands for flat user vertex_user[v - 1].
struct PotentialGraph {
  std::vector<int> vertex_user;
  std::vector<PotentialEdge> edges;
  int user_count = 0;  // users in the whole network

  int vertex_count() const { return static_cast<int>(vertex_user.size()) + 1; }
};

inline PotentialGraph build_potential_graph(const NetworkSpec& net, const DecodingOrder& order, const Subnetwork& s,
                                            const GdofTuple& d) {
  validate_order(net, order, s);
  if (static_cast<int>(d.size()) != net.user_count()) throw PreconditionError("GDoF tuple size mismatch");
  for (int u = 0; u < net.user_count(); ++u)
    if (!s.contains(u) && d[u] != 0) throw PreconditionError("GDoF tuple is nonzero outside the subnetwork");

  PotentialGraph g;
  g.user_count = net.user_count();
  std::vector<int> vertex_of(net.user_count(), 0);
  for (int u = 0; u < net.user_count(); ++u)
    if (s.contains(u)) {
      g.vertex_user.push_back(u);
      vertex_of[u] = static_cast<int>(g.vertex_user.size());
    }

  for (int k = 1; k <= net.cells(); ++k) {
    const auto& seq = order.per_cell[k - 1];
    for (std::size_t lo = 0; lo < seq.size(); ++lo)
      for (std::size_t hi = lo + 1; hi < seq.size(); ++hi) {
        int weak = net.index({k, seq[lo]});
        int strong = net.index({k, seq[hi]});
        g.edges.push_back({vertex_of[weak], vertex_of[strong], net.alpha(weak, k) - d[weak],
                           EdgeFamily::intra_weaker_to_stronger});
        g.edges.push_back({vertex_of[strong], vertex_of[weak], net.alpha(strong, k) - net.alpha(weak, k) - d[strong],
                           EdgeFamily::intra_stronger_to_weaker});
      }
  }
  for (int u : g.vertex_user)
    for (int v : g.vertex_user) {
      int k = net.cell_of(u);
      if (net.cell_of(v) == k) continue;
      g.edges.push_back({vertex_of[u], vertex_of[v], net.alpha(u, k) - net.alpha(v, k) - d[u], EdgeFamily::cross_cell});
    }
  for (int u : g.vertex_user) {
    g.edges.push_back({0, vertex_of[u], Rational(0), EdgeFamily::ground_to_user});
    g.edges.push_back({vertex_of[u], 0, net.direct(u) - d[u], EdgeFamily::user_to_ground});
  }
  return g;
}

// Closed walk through `vertices` (back to the first); edges[t] leaves vertices[t].
struct Circuit {
  std::vector<int> vertices;
  std::vector<int> edges;
  Rational length;
};

struct FeasibilityResult {
  bool feasible = true;
  std::optional<Circuit> witness;
  std::vector<Rational> distance;  // shortest distances from ground when feasible
};

inline FeasibilityResult feasible_by_negative_cycle(const PotentialGraph& g) {
  const int V = g.vertex_count();
  std::vector<Rational> dist(V);
  std::vector<bool> reached(V, false);
  std::vector<int> pred(V, -1);
  reached[0] = true;
  int updated = -1;
  for (int pass = 0; pass < V; ++pass) {
    updated = -1;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto& edge = g.edges[e];
      if (!reached[edge.from]) continue;
      Rational cand = dist[edge.from] + edge.length;
      if (!reached[edge.to] || cand < dist[edge.to]) {
        dist[edge.to] = cand;
        reached[edge.to] = true;
        pred[edge.to] = static_cast<int>(e);
        updated = edge.to;
      }
    }
    if (updated < 0) break;
  }
  FeasibilityResult result;
  if (updated < 0) {
    result.distance = std::move(dist);
    return result;
  }
  // An update in pass V means a negative circuit; walking predecessors V times lands on it.
  int x = updated;
  for (int t = 0; t < V; ++t) x = g.edges[pred[x]].from;
  Circuit c;
  int y = x;
  do {
    c.edges.push_back(pred[y]);
    y = g.edges[pred[y]].from;
  } while (y != x);
  std::reverse(c.edges.begin(), c.edges.end());
  c.length = 0;
  for (int e : c.edges) {
    c.vertices.push_back(g.edges[e].from);
    c.length += g.edges[e].length;
  }
  if (c.length >= 0) throw std::logic_error("predecessor circuit is not negative");
  result.feasible = false;
  result.witness = std::move(c);
  return result;
}

inline PowerAllocation recover_power_allocation(const PotentialGraph& g) {
  auto res = feasible_by_negative_cycle(g);
  if (!res.feasible) throw PreconditionError("potential graph has a negative circuit");
  PowerAllocation r;
  r.r.assign(g.user_count, std::nullopt);
  for (std::size_t v = 0; v < g.vertex_user.size(); ++v) r.r[g.vertex_user[v]] = res.distance[v + 1];
  return r;
}

inline constexpr int kCircuitOracleMaxVertices = 9;

// Checks every directed simple circuit of the potential graph for nonnegative length.
inline bool all_circuits_region_oracle(const NetworkSpec& net, const DecodingOrder& order, const Subnetwork& s,
                                       const GdofTuple& d) {
  if (s.size() + 1 > kCircuitOracleMaxVertices)
    throw GuardExceeded("circuit enumeration limited to " + std::to_string(kCircuitOracleMaxVertices) + " vertices");
  PotentialGraph g = build_potential_graph(net, order, s, d);
  const int V = g.vertex_count();
  std::vector<std::vector<std::optional<Rational>>> len(V, std::vector<std::optional<Rational>>(V));
  for (const auto& e : g.edges) len[e.from][e.to] = e.length;

  std::vector<bool> on_path(V, false);
  std::vector<int> path;
  bool ok = true;
  // Circuits are enumerated once each by rooting them at their smallest vertex.
  auto dfs = [&](auto&& self, int start, int v, const Rational& acc) -> void {
    for (int w = start; w < V && ok; ++w) {
      if (!len[v][w]) continue;
      if (w == start) {
        if (path.size() >= 2 && acc + *len[v][w] < 0) ok = false;
        continue;
      }
      if (on_path[w]) continue;
      on_path[w] = true;
      path.push_back(w);
      self(self, start, w, acc + *len[v][w]);
      path.pop_back();
      on_path[w] = false;
    }
  };
  for (int start = 0; start < V && ok; ++start) {
    on_path[start] = true;
    path.assign(1, start);
    dfs(dfs, start, start, Rational(0));
    on_path[start] = false;
  }
  return ok;
}

inline bool all_circuits_region_oracle(const NetworkSpec& net, const DecodingOrder& order, const GdofTuple& d) {
  return all_circuits_region_oracle(net, order, Subnetwork::full(net), d);
}

}  // namespace tin
