#include "oracles.hpp"
#include "tinregion/analysis.hpp"
#include "tinregion/regions.hpp"
#include "tinregion/sampling.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace tin;
using oracle::q;

namespace {

// Symbolic inequality: user set and signed alpha terms, both keyed by stored labels.
struct Sym {
  std::set<std::pair<int, int>> users;
  std::multiset<std::tuple<int, int, int, int>> terms;  // sign, tx cell, tx slot, rx cell
  friend auto operator<=>(const Sym&, const Sym&) = default;
};

// Term +/- alpha_ij^[l]: from transmitter (l, i) to receiver j.
std::tuple<int, int, int, int> A(int sign, int i, int j, int l) { return {sign, i, l, j}; }

std::multiset<Sym> symbolic(const NetworkSpec& net, const PolyRegion& r) {
  std::multiset<Sym> out;
  for (const auto& ineq : r.inequalities) {
    Sym s;
    for (int u : ineq.users) s.users.insert({net.user(u).cell, net.user(u).slot});
    for (const auto& t : ineq.rhs_terms) s.terms.insert({t.sign, net.user(t.tx).cell, net.user(t.tx).slot, t.rx_cell});
    out.insert(s);
  }
  return out;
}

}  // namespace

TEST(Cyclic, NotationExample) {
  auto seqs = enumerate_cyclic_sequences({1, 2, 3});
  std::vector<std::vector<int>> got;
  for (const auto& c : seqs) got.push_back(c.cells);
  std::vector<std::vector<int>> want = {{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}, {1, 3, 2}};
  EXPECT_EQ(got, want);
}

TEST(Cyclic, SingletonAndFourCells) {
  auto one = enumerate_cyclic_sequences({1});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].cells, std::vector<int>{1});

  auto four = enumerate_cyclic_sequences({1, 2, 3, 4}, 2);
  auto brute = oracle::cyclic_sequences({1, 2, 3, 4}, 2);
  EXPECT_EQ(brute.size(), 20u);
  std::set<std::vector<int>> got;
  for (const auto& c : four) got.insert(c.cells);
  EXPECT_EQ(four.size(), 20u);
  EXPECT_EQ(got, brute);
}

TEST(Cyclic, CanonicalRotation) {
  EXPECT_EQ(CyclicSequence::canonical({3, 1, 2}).cells, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(CyclicSequence::canonical({2, 1, 3}), CyclicSequence::canonical({1, 3, 2}));
  EXPECT_NE(CyclicSequence::canonical({1, 2, 3}), CyclicSequence::canonical({1, 3, 2}));
  EXPECT_THROW(CyclicSequence::canonical({1, 1}), PreconditionError);
  EXPECT_EQ(CyclicSequence::canonical({2, 3, 1}).before(0), 3);
}

TEST(Cyclic, MatchesBruteForceForSmallSets) {
  for (int n = 1; n <= 6; ++n) {
    std::vector<int> cells;
    for (int c = 1; c <= n; ++c) cells.push_back(c);
    for (int m = 1; m <= n; ++m) {
      std::set<std::vector<int>> got;
      auto seqs = enumerate_cyclic_sequences(cells, m);
      for (const auto& c : seqs) got.insert(c.cells);
      EXPECT_EQ(got.size(), seqs.size());
      EXPECT_EQ(got, oracle::cyclic_sequences(cells, m));
    }
  }
}

TEST(Regions, TwoByTwoWorkedExample) {
  auto net = oracle::make_net({2, 2}, {{1, 1, {"4/5", "1/10"}},
                                       {1, 2, {"7/5", "3/10"}},
                                       {2, 1, {"1/5", "9/10"}},
                                       {2, 2, {"1/4", "3/2"}}});
  auto r = polyhedral_region(net, DecodingOrder::identity(net));
  std::multiset<Sym> want = {
      {{{1, 1}}, {A(1, 1, 1, 1)}},
      {{{2, 1}}, {A(1, 2, 2, 1)}},
      {{{1, 1}, {1, 2}}, {A(1, 1, 1, 2)}},
      {{{2, 1}, {2, 2}}, {A(1, 2, 2, 2)}},
      {{{1, 1}, {2, 1}}, {A(1, 1, 1, 1), A(-1, 2, 1, 1), A(1, 2, 2, 1), A(-1, 1, 2, 1)}},
      {{{1, 1}, {1, 2}, {2, 1}}, {A(1, 1, 1, 2), A(-1, 2, 1, 1), A(1, 2, 2, 1), A(-1, 1, 2, 2)}},
      {{{1, 1}, {2, 1}, {2, 2}}, {A(1, 1, 1, 1), A(-1, 2, 1, 2), A(1, 2, 2, 2), A(-1, 1, 2, 1)}},
      {{{1, 1}, {1, 2}, {2, 1}, {2, 2}}, {A(1, 1, 1, 2), A(-1, 2, 1, 2), A(1, 2, 2, 2), A(-1, 1, 2, 2)}},
  };
  EXPECT_EQ(r.inequalities.size(), 8u);
  EXPECT_EQ(symbolic(net, r), want);
}

TEST(Regions, PimacBothOrders) {
  auto net = oracle::pimac("1", "6/5", "1/10", "1/2", "1/5", "1");
  std::multiset<Sym> id = {
      {{{1, 1}}, {A(1, 1, 1, 1)}},
      {{{1, 1}, {1, 2}}, {A(1, 1, 1, 2)}},
      {{{2, 1}}, {A(1, 2, 2, 1)}},
      {{{1, 1}, {2, 1}}, {A(1, 1, 1, 1), A(-1, 1, 2, 1), A(1, 2, 2, 1), A(-1, 2, 1, 1)}},
      {{{1, 1}, {1, 2}, {2, 1}}, {A(1, 1, 1, 2), A(-1, 1, 2, 2), A(1, 2, 2, 1), A(-1, 2, 1, 1)}},
  };
  std::multiset<Sym> bar = {
      {{{1, 2}}, {A(1, 1, 1, 2)}},
      {{{1, 1}, {1, 2}}, {A(1, 1, 1, 1)}},
      {{{2, 1}}, {A(1, 2, 2, 1)}},
      {{{1, 2}, {2, 1}}, {A(1, 1, 1, 2), A(-1, 1, 2, 2), A(1, 2, 2, 1), A(-1, 2, 1, 1)}},
      {{{1, 1}, {1, 2}, {2, 1}}, {A(1, 1, 1, 1), A(-1, 1, 2, 1), A(1, 2, 2, 1), A(-1, 2, 1, 1)}},
  };
  EXPECT_EQ(symbolic(net, polyhedral_region(net, DecodingOrder::identity(net))), id);
  EXPECT_EQ(symbolic(net, polyhedral_region(net, DecodingOrder::reversed(net))), bar);
}

TEST(Regions, SingleMacHasOnlyPrefixBounds) {
  auto net = oracle::make_net({3}, {{1, 1, {"1/2"}}, {1, 2, {"1"}}, {1, 3, {"2"}}});
  auto r = polyhedral_region(net, DecodingOrder::identity(net));
  ASSERT_EQ(r.inequalities.size(), 3u);
  for (int l = 1; l <= 3; ++l) {
    EXPECT_EQ(static_cast<int>(r.inequalities[l - 1].users.size()), l);
    EXPECT_EQ(r.inequalities[l - 1].rhs, net.alpha(UserId{1, l}, 1));
  }
}

TEST(Regions, EqualityViolationExample) {
  auto net = oracle::pimac("1", "6/5", "1/10", "1/2", "1/5", "1");
  GdofTuple d = {q("1/5"), q("1/2"), Rational(1)};
  auto id = polyhedral_region(net, DecodingOrder::identity(net));
  auto m = membership(id, d);
  EXPECT_FALSE(m.member);
  ASSERT_EQ(m.failure, RegionMembership::Failure::inequality);
  EXPECT_EQ(id.inequalities[m.index].users.size(), 3u);
  EXPECT_EQ(lhs_value(id.inequalities[m.index], d), q("17/10"));
  EXPECT_EQ(id.inequalities[m.index].rhs, q("3/2"));
  EXPECT_TRUE(membership(polyhedral_region(net, DecodingOrder::reversed(net)), d).member);
  EXPECT_TRUE(membership(id, GdofTuple(3, 0)).member);
}

TEST(Regions, SetFunction) {
  auto net = oracle::pimac("1", "6/5", "1/10", "1/2", "1/5", "1");
  auto id = DecodingOrder::identity(net);
  EXPECT_EQ(set_function_f(net, id, {}), 0);
  EXPECT_EQ(set_function_f(net, id, {0}), 1);
  EXPECT_EQ(set_function_f(net, id, {0, 1}), q("6/5"));
  // Single two-cycle: (6/5 - 1/2) + (1 - 1/5).
  Rational expect = (q("6/5") - q("1/2")) + (Rational(1) - q("1/5"));
  EXPECT_EQ(set_function_f(net, id, {0, 1, 2}), expect);
  EXPECT_EQ(expect, q("3/2"));
  EXPECT_THROW(set_function_f(net, id, {1}), PreconditionError);
}

TEST(Regions, SetFunctionMatchesTightestCyclicBound) {
  // Over three cells the minimum must range over both orientations.
  std::mt19937_64 rng(9);
  for (int t = 0; t < 200; ++t) {
    auto net = random_network(rng, {1, 1, 1});
    auto id = DecodingOrder::identity(net);
    auto a = [&](int tx, int rx) { return net.alpha(UserId{tx, 1}, rx); };
    Rational c123 = a(1, 1) - a(1, 3) + a(2, 2) - a(2, 1) + a(3, 3) - a(3, 2);
    Rational c132 = a(1, 1) - a(1, 2) + a(3, 3) - a(3, 1) + a(2, 2) - a(2, 3);
    EXPECT_EQ(set_function_f(net, id, {0, 1, 2}), std::min(c123, c132));
  }
}

TEST(RegionsProperty, InequalityCountFormula) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    auto L = random_users_per_cell(rng, 4, 3);
    auto net = random_network(rng, L);
    auto r = polyhedral_region(net, random_order(rng, net, Subnetwork::full(net)), Subnetwork::full(net));
    std::size_t expect = 0;
    for (int l : L) expect += l;
    std::vector<int> cells;
    for (std::size_t k = 1; k <= L.size(); ++k) cells.push_back(static_cast<int>(k));
    for (const auto& c : oracle::cyclic_sequences(cells, 2)) {
      std::size_t prod = 1;
      for (int k : c) prod *= L[k - 1];
      expect += prod;
    }
    EXPECT_EQ(r.inequalities.size(), expect);
  }
}

TEST(RegionsProperty, PrefixClosedUserSets) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 200; ++t) {
    auto net = random_network(rng, random_users_per_cell(rng, 3, 3));
    auto s = random_subnetwork(rng, net);
    auto o = random_order(rng, net, s);
    for (const auto& ineq : polyhedral_region(net, o, s).inequalities) {
      ASSERT_FALSE(ineq.users.empty());
      for (int k = 1; k <= net.cells(); ++k) {
        const auto& seq = o.per_cell[k - 1];
        bool missing = false;
        for (int slot : seq) {
          bool in = std::binary_search(ineq.users.begin(), ineq.users.end(), net.index({k, slot}));
          if (in) EXPECT_FALSE(missing) << "user set is not prefix-closed";
          missing |= !in;
        }
      }
    }
  }
}

TEST(RegionsProperty, MembershipMatchesFormulaOracle) {
  std::mt19937_64 rng(23);
  int members = 0;
  for (int t = 0; t < 2000; ++t) {
    auto net = random_network(rng, random_users_per_cell(rng, 3, 3));
    auto s = random_subnetwork(rng, net);
    auto o = random_order(rng, net, s);
    auto d = random_gdof(rng, net, s);
    bool got = membership(polyhedral_region(net, o, s), d).member;
    members += got;
    EXPECT_EQ(got, oracle::region_member(net, o, s, d));
  }
  EXPECT_GT(members, 100);
  EXPECT_LT(members, 1900);
}

TEST(RegionsProperty, Homogeneity) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 300; ++t) {
    auto net = random_network(rng, random_users_per_cell(rng, 3, 2));
    Rational c = random_grid(rng, Rational(1, 10), 3, 10);
    auto s = random_subnetwork(rng, net);
    auto o = random_order(rng, net, s);
    auto d = random_gdof(rng, net, s);
    auto r1 = polyhedral_region(net, o, s);
    auto r2 = polyhedral_region(net.scaled(c), o, s);
    ASSERT_EQ(r1.inequalities.size(), r2.inequalities.size());
    for (std::size_t k = 0; k < r1.inequalities.size(); ++k) EXPECT_EQ(r2.inequalities[k].rhs, c * r1.inequalities[k].rhs);
    GdofTuple cd = d;
    for (auto& x : cd) x *= c;
    EXPECT_EQ(membership(r1, d).member, membership(r2, cd).member);
  }
}

TEST(RegionsProperty, SetFunctionMonotoneInPrefixDepth) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 200; ++t) {
    auto net = random_network(rng, random_users_per_cell(rng, 3, 3));
    auto id = DecodingOrder::identity(net);
    for (int k = 1; k <= net.cells(); ++k)
      for (int l = 2; l <= net.users_in(k); ++l)
        EXPECT_LE(set_function_f(net, id, prefix_users(net, id, k, l - 1)), set_function_f(net, id, prefix_users(net, id, k, l)));
  }
}

TEST(RegionsProperty, IdentityDominatesForSingleMac) {
  std::mt19937_64 rng(26);
  for (int t = 0; t < 100; ++t) {
    auto net = random_network(rng, {std::uniform_int_distribution<int>(1, 4)(rng)});
    auto id = polyhedral_region(net, DecodingOrder::identity(net));
    for (const auto& o : enumerate_orders(net, Subnetwork::full(net)))
      EXPECT_TRUE(region_includes(id, polyhedral_region(net, o)));
  }
}

TEST(RegionsProperty, ForcedZeroUsers) {
  auto net = oracle::pimac("1", "6/5", "1/10", "1/2", "1/5", "1");
  Subnetwork s = Subnetwork::full(net);
  s.active[0] = false;
  auto r = polyhedral_region(net, DecodingOrder::identity(net, s), s);
  EXPECT_TRUE(r.forced_zero[0]);
  EXPECT_FALSE(membership(r, {q("1/10"), 0, 0}).member);
  EXPECT_TRUE(membership(r, {0, q("1/10"), 0}).member);
  for (const auto& v : vertices(r)) EXPECT_EQ(v[0], 0);
}
