#include "oracles.hpp"
#include "tinregion/io.hpp"
#include "tinregion/model.hpp"
#include "tinregion/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace tin;
using oracle::q;

TEST(Rational, ParsesDecimalsExactly) {
  EXPECT_EQ(parse_rational("0.2"), q("1/5"));
  EXPECT_EQ(parse_rational("1.25e-2"), q("1/80"));
  EXPECT_EQ(parse_rational("-3/6"), q("-1/2"));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational(" 2.5E1 "), Rational(25));
  EXPECT_THROW(parse_rational("abc"), ParseError);
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("1.2.3"), ParseError);
  EXPECT_THROW(parse_rational(""), ParseError);
}

TEST(Rational, RationalizeWithinTolerance) {
  EXPECT_EQ(rationalize(0.5), q("1/2"));
  EXPECT_EQ(rationalize(1.0 / 3.0), q("1/3"));
  double x = std::log(10.0) / std::log(100.0);
  EXPECT_EQ(rationalize(x), q("1/2"));
  double pi = 3.14159265358979;
  EXPECT_LE(std::fabs(to_double(rationalize(pi, 1e-3)) - pi), 1e-3);
  EXPECT_EQ(rationalize(pi, 1e-2), q("22/7"));
  EXPECT_THROW(rationalize(std::nan("")), ParseError);
}

TEST(Model, SortsSlotsByDirectLevelAndRecordsProvenance) {
  auto net = oracle::make_net({2, 1}, {{1, 1, {"3/2", "1/10"}}, {1, 2, {"1", "1/5"}}, {2, 1, {"0", "1"}}});
  EXPECT_EQ(net.alpha(UserId{1, 1}, 1), q("1"));
  EXPECT_EQ(net.alpha(UserId{1, 2}, 1), q("3/2"));
  EXPECT_EQ(net.alpha(UserId{1, 1}, 2), q("1/5"));
  EXPECT_EQ(net.original_slot(UserId{1, 1}), 2);
  EXPECT_EQ(net.original_slot(UserId{1, 2}), 1);
  EXPECT_EQ(net.warnings().size(), 2u);
}

TEST(Model, TiesKeepInputOrder) {
  auto net = oracle::make_net({2}, {{1, 1, {"1"}}, {1, 2, {"1"}}});
  EXPECT_EQ(net.original_slot(UserId{1, 1}), 1);
  EXPECT_TRUE(net.warnings().empty());
}

TEST(Model, ClipsNegativeLevels) {
  auto net = oracle::make_net({1, 1}, {{1, 1, {"-3/10", "0"}}, {2, 1, {"0", "1"}}});
  EXPECT_EQ(net.alpha(UserId{1, 1}, 1), 0);
  ASSERT_EQ(net.warnings().size(), 1u);
  EXPECT_NE(net.warnings()[0].find("clipped"), std::string::npos);
}

TEST(Model, RejectsMalformedShapes) {
  EXPECT_THROW(NetworkSpec({}, {}), PreconditionError);
  EXPECT_THROW(NetworkSpec({0}, {}), PreconditionError);
  EXPECT_THROW(NetworkSpec({2}, {{Rational(1)}}), PreconditionError);
  EXPECT_THROW(NetworkSpec({1}, {{Rational(1), Rational(0)}}), PreconditionError);
}

TEST(Model, StrengthLevelDefinition) {
  FiniteSnrSpec fs{100, {1}, {{10.0}}, {1.0}};  // |h|^2 P = 100
  EXPECT_EQ(strength_levels(fs).alpha(0, 1), 1);
  fs.gain = {{std::sqrt(0.5)}};
  EXPECT_EQ(strength_levels(fs).alpha(0, 1), 0);
  fs.gain = {{std::sqrt(10.0)}};
  EXPECT_EQ(strength_levels(fs).alpha(0, 1), q("1/2"));
  fs.nominal_power = 1;
  EXPECT_THROW(strength_levels(fs), PreconditionError);
}

TEST(Model, StrengthLevelsShiftUnderPowerScaling) {
  // Multiplying every link by P^c moves every unclipped level by c.
  FiniteSnrSpec fs{1000, {1, 1}, {{std::sqrt(1000.0), 3.0}, {2.0, std::sqrt(31622.7766)}}, {1.0, 1.0}};
  auto before = strength_levels(fs);
  const double c = 0.25;
  FiniteSnrSpec scaled = fs;
  for (auto& p : scaled.tx_power) p *= std::pow(1000.0, c);
  auto after = strength_levels(scaled);
  for (int u = 0; u < 2; ++u)
    for (int i = 1; i <= 2; ++i) EXPECT_NEAR(to_double(after.alpha(u, i) - before.alpha(u, i)), c, 1e-8);
}

TEST(Model, OrderEnumerationCounts) {
  auto pim = oracle::pimac("1", "3/2", "3/10", "2/5", "1/5", "1");
  auto orders = enumerate_orders(pim, Subnetwork::full(pim));
  ASSERT_EQ(orders.size(), 2u);
  EXPECT_EQ(orders[0], DecodingOrder::identity(pim));
  EXPECT_EQ(orders[1], DecodingOrder::reversed(pim));
  EXPECT_EQ(enumerate_orders(pim, Subnetwork::none(pim)).size(), 1u);

  std::mt19937_64 rng(3);
  auto big = random_network(rng, {2, 2, 3});
  EXPECT_EQ(enumerate_orders(big, Subnetwork::full(big)).size(), 24u);
}

TEST(Model, OrderValidation) {
  auto pim = oracle::pimac("1", "3/2", "3/10", "2/5", "1/5", "1");
  auto s = Subnetwork::full(pim);
  EXPECT_NO_THROW(validate_order(pim, DecodingOrder{{{2, 1}, {1}}}, s));
  EXPECT_THROW(validate_order(pim, DecodingOrder{{{1, 1}, {1}}}, s), PreconditionError);
  EXPECT_THROW(validate_order(pim, DecodingOrder{{{1, 2}}}, s), PreconditionError);
  s.active[0] = false;
  EXPECT_NO_THROW(validate_order(pim, DecodingOrder{{{2}, {1}}}, s));
  EXPECT_EQ(to_string(DecodingOrder{{{2, 1}, {1}}}), "2,1;1");
}

TEST(Model, PropertySortedAndNonnegativeAfterConstruction) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    auto L = random_users_per_cell(rng, 4, 3);
    int n = 0;
    for (int l : L) n += l;
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(L.size()));
    for (auto& row : a)
      for (auto& x : row) x = random_grid(rng, -1, 2, 10);
    NetworkSpec net(L, a);
    for (int k = 1; k <= net.cells(); ++k)
      for (int l = 1; l <= net.users_in(k); ++l) {
        for (int i = 1; i <= net.cells(); ++i) EXPECT_GE(net.alpha(UserId{k, l}, i), 0);
        if (l > 1) EXPECT_LE(net.alpha(UserId{k, l - 1}, k), net.alpha(UserId{k, l}, k));
      }
  }
}

TEST(Io, ParsesNetworkFile) {
  auto doc = parse_network(R"({"cells": 2, "users_per_cell": [2, 1], "alpha": [
    {"tx_cell": 1, "tx_slot": 1, "rx_cell": 1, "value": 1.5},
    {"tx_cell": 1, "tx_slot": 1, "rx_cell": 2, "value": "1/10"},
    {"tx_cell": 1, "tx_slot": 2, "rx_cell": 1, "value": 1.0},
    {"tx_cell": 1, "tx_slot": 2, "rx_cell": 2, "value": 0.2},
    {"tx_cell": 2, "tx_slot": 1, "rx_cell": 1, "value": -0.3},
    {"tx_cell": 2, "tx_slot": 1, "rx_cell": 2, "value": 1}]})");
  const auto& net = doc.net;
  EXPECT_EQ(net.user_count(), 3);
  EXPECT_EQ(net.alpha(UserId{1, 1}, 1), 1);
  EXPECT_EQ(net.alpha(UserId{1, 1}, 2), q("1/5"));
  EXPECT_EQ(net.alpha(UserId{1, 2}, 1), q("3/2"));
  EXPECT_EQ(net.alpha(UserId{2, 1}, 1), 0);
  EXPECT_EQ(net.original_slot(UserId{1, 1}), 2);
}

TEST(Io, ReportsSchemaErrorsWithLocation) {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    try {
      parse_network(text);
    } catch (const ParseError& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
  };
  EXPECT_TRUE(fails_with("{", "invalid JSON"));
  EXPECT_TRUE(fails_with(R"({"users_per_cell": [1]})", "cells"));
  EXPECT_TRUE(fails_with(R"({"cells": 1, "users_per_cell": [1, 2]})", "/users_per_cell"));
  EXPECT_TRUE(fails_with(R"({"cells": 1, "users_per_cell": [1], "alpha": []})", "missing level"));
  EXPECT_TRUE(fails_with(
      R"({"cells": 1, "users_per_cell": [1], "alpha": [{"tx_cell": 1, "tx_slot": 2, "rx_cell": 1, "value": 1}]})",
      "/alpha/0/tx_slot"));
  EXPECT_TRUE(fails_with(
      R"({"cells": 1, "users_per_cell": [1], "alpha": [{"tx_cell": 1, "tx_slot": 1, "rx_cell": 1, "value": "x"}]})",
      "/alpha/0/value"));
  EXPECT_TRUE(fails_with(R"({"cells": 1, "users_per_cell": [1]})", "finite_snr"));
}

TEST(Io, DerivesLevelsFromFiniteSnrBlock) {
  auto doc = parse_network(R"({"cells": 1, "users_per_cell": [2], "finite_snr": {"nominal_power": 100,
    "gains": [{"tx_cell": 1, "tx_slot": 1, "rx_cell": 1, "magnitude": 10},
              {"tx_cell": 1, "tx_slot": 2, "rx_cell": 1, "re": 3, "im": 1}],
    "tx_powers": [{"tx_cell": 1, "tx_slot": 2, "power": 1}]}})");
  ASSERT_TRUE(doc.finite_snr.has_value());
  EXPECT_EQ(doc.net.alpha(UserId{1, 1}, 1), q("1/2"));  // |3+i|^2 = 10 sorts first
  EXPECT_EQ(doc.net.alpha(UserId{1, 2}, 1), 1);
}

TEST(Io, NetworkJsonRoundTrip) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    auto net = random_network(rng, random_users_per_cell(rng, 3, 3));
    auto back = parse_network(network_json(net)).net;
    ASSERT_EQ(back.users_per_cell(), net.users_per_cell());
    for (int u = 0; u < net.user_count(); ++u)
      for (int i = 1; i <= net.cells(); ++i) EXPECT_EQ(back.alpha(u, i), net.alpha(u, i));
  }
}

TEST(Io, CommandLineForms) {
  auto pim = oracle::pimac("1", "3/2", "3/10", "2/5", "1/5", "1");
  auto all = Subnetwork::full(pim);
  EXPECT_EQ(parse_order("id", pim, all), DecodingOrder::identity(pim));
  EXPECT_EQ(parse_order("reverse", pim, all), DecodingOrder::reversed(pim));
  EXPECT_EQ(parse_order("2,1;1", pim, all), DecodingOrder::reversed(pim));
  EXPECT_THROW(parse_order("1,1;1", pim, all), ParseError);
  auto s = parse_subnetwork("1:2,2:1", pim);
  EXPECT_EQ(s.active, (std::vector<bool>{false, true, true}));
  EXPECT_EQ(parse_order("2;1", pim, s).per_cell, (std::vector<std::vector<int>>{{2}, {1}}));
  EXPECT_EQ(parse_order("2;", pim, parse_subnetwork("1:2", pim)).per_cell, (std::vector<std::vector<int>>{{2}, {}}));
  EXPECT_THROW(parse_subnetwork("3:1", pim), ParseError);
  EXPECT_EQ(parse_subnetwork("none", pim).size(), 0);
}
