// Two-cell example: a 2-user MAC next to a point-to-point link. Shows the regions for both decoding
// orders, a tuple that only the reversed order achieves, and what happens once the conditions hold.
#include "tinregion/analysis.hpp"
#include "tinregion/conditions.hpp"
#include "tinregion/potential.hpp"

#include <iostream>

using namespace tin;

namespace {

void print_region(const NetworkSpec& net, const PolyRegion& r) {
  for (const auto& ineq : r.inequalities) {
    std::cout << "    ";
    for (std::size_t k = 0; k < ineq.users.size(); ++k)
      std::cout << (k ? " + " : "") << "d[" << to_string(net.user(ineq.users[k])) << "]";
    std::cout << " <= " << to_string(ineq.rhs) << "\n";
  }
}

}  // namespace

int main() {
  auto q = [](const char* s) { return parse_rational(s); };
  // rows: users 1:1, 1:2, 2:1 (cell:slot); columns: level at receiver 1, receiver 2
  NetworkSpec net({2, 1}, {{q("1"), q("1/10")}, {q("6/5"), q("1/2")}, {q("1/5"), q("1")}});
  auto rep = check_conditions(net);
  std::cout << "convexity " << (rep.convexity_holds ? "holds" : "fails") << ", optimality "
            << (rep.optimality_holds ? "holds" : "fails") << "\n";

  for (const auto& order : {DecodingOrder::identity(net), DecodingOrder::reversed(net)}) {
    std::cout << "order " << to_string(order) << ":\n";
    print_region(net, polyhedral_region(net, order));
  }

  GdofTuple d = {q("1/5"), q("1/2"), q("1")};
  for (const auto& order : {DecodingOrder::identity(net), DecodingOrder::reversed(net)}) {
    auto g = build_potential_graph(net, order, Subnetwork::full(net), d);
    auto fr = feasible_by_negative_cycle(g);
    std::cout << "d = (1/5, 1/2, 1) under " << to_string(order) << ": ";
    if (fr.feasible) {
      auto a = recover_power_allocation(g);
      std::cout << "achievable with r =";
      for (const auto& r : a.r) std::cout << " " << to_string(*r);
      std::cout << "\n";
    } else {
      std::cout << "blocked by a circuit of length " << to_string(fr.witness->length) << "\n";
    }
  }

  auto gm = general_membership(net, d);
  std::cout << "general region: " << (gm.member ? "member" : "non-member") << " after " << gm.orders_tested
            << " orders\n";

  NetworkSpec good({2, 1}, {{q("1"), q("3/10")}, {q("3/2"), q("2/5")}, {q("1/5"), q("1")}});
  auto id = polyhedral_region(good, DecodingOrder::identity(good));
  std::cout << "\nwith weaker interference the conditions "
            << (check_conditions(good).optimality_holds ? "hold" : "fail") << "; sum GDoF "
            << to_string(max_weighted_gdof(id, {1, 1, 1}).value) << ", reversed order contained: "
            << (region_includes(id, polyhedral_region(good, DecodingOrder::reversed(good))) ? "yes" : "no") << "\n";
  auto gap = gap_report(finite_snr_from_levels(good, 1e4));
  std::cout << "at P = 1e4: " << gap.corners.size() << " corners, none above the outer bound (min gap "
            << gap.min_gap_bits << " bits), at most " << gap.max_tight_gap_bits << " bits below it where tight\n";
}
