#pragma once

#include "analysis.hpp"
#include "cellsim.hpp"
#include "conditions.hpp"
#include "model.hpp"
#include "regions.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tin {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "tinregion/1";

struct NetworkDocument {
  NetworkSpec net;
  std::optional<FiniteSnrSpec> finite_snr;
  double precision = kDefaultPrecision;
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

inline const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing field '") + key + "'");
  return *it;
}

inline int require_int(const Json& obj, const char* key, const std::string& where) {
  const Json& v = require(obj, key, where);
  if (!v.is_number_integer()) schema_error(where + "/" + key, "expected an integer");
  return v.get<int>();
}

inline double require_number(const Json& obj, const char* key, const std::string& where) {
  const Json& v = require(obj, key, where);
  if (!v.is_number()) schema_error(where + "/" + key, "expected a number");
  return v.get<double>();
}

// Numbers are read through their shortest decimal form, so 0.2 becomes 1/5 exactly.
inline Rational json_rational(const Json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number_float()) {
      double x = v.get<double>();
      if (!std::isfinite(x)) schema_error(where, "value must be finite");
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, x);
      return parse_rational(std::string_view(buf, res.ptr - buf));
    }
  } catch (const ParseError& e) {
    schema_error(where, e.what());
  }
  schema_error(where, "expected a number or a rational string such as \"3/5\"");
}

inline Json rational_json(const Rational& q) { return to_string(q); }

}  // namespace detail

inline NetworkDocument parse_network(const Json& doc) {
  using detail::require;
  using detail::require_int;
  using detail::schema_error;
  NetworkDocument out;
  if (!doc.is_object()) schema_error("", "network document must be an object");
  const int K = require_int(doc, "cells", "");
  if (K < 1) schema_error("/cells", "need at least one cell");
  const Json& upc = require(doc, "users_per_cell", "");
  if (!upc.is_array() || static_cast<int>(upc.size()) != K)
    schema_error("/users_per_cell", "expected an array with one entry per cell");
  std::vector<int> L;
  for (std::size_t k = 0; k < upc.size(); ++k) {
    if (!upc[k].is_number_integer() || upc[k].get<int>() < 1)
      schema_error("/users_per_cell/" + std::to_string(k), "expected a positive integer");
    L.push_back(upc[k].get<int>());
  }
  std::vector<int> offset(K + 1, 0);
  for (int k = 0; k < K; ++k) offset[k + 1] = offset[k] + L[k];
  const int n = offset[K];

  if (auto it = doc.find("precision"); it != doc.end()) {
    if (!it->is_number() || !(it->get<double>() > 0)) schema_error("/precision", "expected a positive number");
    out.precision = it->get<double>();
  }

  auto user_slot = [&](const Json& rec, const std::string& where) {
    int c = require_int(rec, "tx_cell", where);
    int s = require_int(rec, "tx_slot", where);
    if (c < 1 || c > K) schema_error(where + "/tx_cell", "cell out of range");
    if (s < 1 || s > L[c - 1]) schema_error(where + "/tx_slot", "slot out of range");
    return offset[c - 1] + s - 1;
  };
  auto rx_cell = [&](const Json& rec, const std::string& where) {
    int r = require_int(rec, "rx_cell", where);
    if (r < 1 || r > K) schema_error(where + "/rx_cell", "cell out of range");
    return r - 1;
  };

  if (auto it = doc.find("finite_snr"); it != doc.end()) {
    const std::string base = "/finite_snr";
    FiniteSnrSpec fs;
    fs.users_per_cell = L;
    fs.nominal_power = detail::require_number(*it, "nominal_power", base);
    fs.gain.assign(n, std::vector<double>(K, std::nan("")));
    fs.tx_power.assign(n, 1.0);
    const Json& gains = require(*it, "gains", base);
    if (!gains.is_array()) schema_error(base + "/gains", "expected an array");
    for (std::size_t t = 0; t < gains.size(); ++t) {
      const std::string where = base + "/gains/" + std::to_string(t);
      int u = user_slot(gains[t], where);
      int i = rx_cell(gains[t], where);
      if (!std::isnan(fs.gain[u][i])) schema_error(where, "duplicate gain record");
      if (gains[t].contains("magnitude")) {
        fs.gain[u][i] = detail::require_number(gains[t], "magnitude", where);
      } else {
        double re = detail::require_number(gains[t], "re", where);
        double im = gains[t].contains("im") ? detail::require_number(gains[t], "im", where) : 0.0;
        fs.gain[u][i] = std::hypot(re, im);
      }
    }
    for (int u = 0; u < n; ++u)
      for (int i = 0; i < K; ++i)
        if (std::isnan(fs.gain[u][i])) schema_error(base + "/gains", "every (tx, rx) pair needs a gain record");
    if (auto tp = it->find("tx_powers"); tp != it->end()) {
      if (!tp->is_array()) schema_error(base + "/tx_powers", "expected an array");
      for (std::size_t t = 0; t < tp->size(); ++t) {
        const std::string where = base + "/tx_powers/" + std::to_string(t);
        fs.tx_power[user_slot((*tp)[t], where)] = detail::require_number((*tp)[t], "power", where);
      }
    }
    try {
      validate_finite_snr(fs);
    } catch (const PreconditionError& e) {
      schema_error(base, e.what());
    }
    out.finite_snr = std::move(fs);
  }

  if (auto it = doc.find("alpha"); it != doc.end()) {
    if (!it->is_array()) schema_error("/alpha", "expected an array of records");
    std::vector<std::vector<std::optional<Rational>>> alpha(n, std::vector<std::optional<Rational>>(K));
    for (std::size_t t = 0; t < it->size(); ++t) {
      const std::string where = "/alpha/" + std::to_string(t);
      const Json& rec = (*it)[t];
      int u = user_slot(rec, where);
      int i = rx_cell(rec, where);
      if (alpha[u][i]) schema_error(where, "duplicate alpha record");
      alpha[u][i] = detail::json_rational(require(rec, "value", where), where + "/value");
    }
    std::vector<std::vector<Rational>> full(n, std::vector<Rational>(K));
    for (int u = 0; u < n; ++u)
      for (int i = 0; i < K; ++i) {
        if (!alpha[u][i]) {
          int c = 0;
          while (offset[c + 1] <= u) ++c;
          schema_error("/alpha", "missing level for tx (" + std::to_string(c + 1) + "," +
                                     std::to_string(u - offset[c] + 1) + ") at rx " + std::to_string(i + 1));
        }
        full[u][i] = *alpha[u][i];
      }
    out.net = NetworkSpec(L, std::move(full));
  } else if (out.finite_snr) {
    out.net = strength_levels(*out.finite_snr, out.precision);
  } else {
    schema_error("", "need 'alpha' or a 'finite_snr' block");
  }
  return out;
}

inline NetworkDocument parse_network(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_network(doc);
}
inline NetworkDocument parse_network(const char* text) { return parse_network(std::string(text)); }

inline NetworkDocument load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open network file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_network(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline Json network_json(const NetworkSpec& net) {
  Json alpha = Json::array();
  for (int u = 0; u < net.user_count(); ++u) {
    UserId id = net.user(u);
    for (int i = 1; i <= net.cells(); ++i)
      alpha.push_back({{"tx_cell", id.cell}, {"tx_slot", id.slot}, {"rx_cell", i}, {"value", to_string(net.alpha(u, i))}});
  }
  return {{"cells", net.cells()}, {"users_per_cell", net.users_per_cell()}, {"alpha", alpha}};
}

// Parsers for the compact command-line forms.

// "id", "reverse" or per-cell lists "2,1;1" (positions first to last; the last is decoded first).
inline DecodingOrder parse_order(const std::string& text, const NetworkSpec& net, const Subnetwork& s) {
  if (text == "id" || text.empty()) return DecodingOrder::identity(net, s);
  if (text == "reverse") {
    DecodingOrder o = DecodingOrder::identity(net, s);
    for (auto& seq : o.per_cell) std::reverse(seq.begin(), seq.end());
    return o;
  }
  DecodingOrder o;
  std::stringstream cells(text);
  std::string part;
  while (std::getline(cells, part, ';')) {
    std::vector<int> seq;
    std::stringstream items(part);
    std::string item;
    while (std::getline(items, item, ',')) {
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        seq.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ParseError("bad slot '" + item + "' in order '" + text + "'");
      }
    }
    o.per_cell.push_back(std::move(seq));
  }
  if (!text.empty() && text.back() == ';') o.per_cell.emplace_back();
  try {
    validate_order(net, o, s);
  } catch (const PreconditionError& e) {
    throw ParseError("order '" + text + "': " + e.what());
  }
  return o;
}

// "all", "none" or "1:1,2:1" (cell:slot pairs of the active users).
inline Subnetwork parse_subnetwork(const std::string& text, const NetworkSpec& net) {
  if (text == "all" || text.empty()) return Subnetwork::full(net);
  Subnetwork s = Subnetwork::none(net);
  if (text == "none") return s;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw ParseError("subnetwork entry '" + item + "' is not cell:slot");
    UserId u{};
    try {
      u = {std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))};
    } catch (const std::exception&) {
      throw ParseError("subnetwork entry '" + item + "' is not cell:slot");
    }
    if (!net.contains(u)) throw ParseError("subnetwork entry '" + item + "' is not a user of the network");
    s.active[net.index(u)] = true;
  }
  return s;
}

inline std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
  return out;
}

// Serializers. Users appear with their stored (sorted) labels and their input slot.

inline Json user_json(const NetworkSpec& net, int flat) {
  UserId u = net.user(flat);
  return {{"cell", u.cell}, {"slot", u.slot}, {"input_slot", net.original_slot(u)}};
}

inline Json tuple_json(const GdofTuple& d) {
  Json out = Json::array();
  for (const auto& x : d) out.push_back(to_string(x));
  return out;
}

inline Json order_json(const DecodingOrder& o) { return o.per_cell; }

inline Json subnetwork_json(const NetworkSpec& net, const Subnetwork& s) {
  Json out = Json::array();
  for (int u = 0; u < net.user_count(); ++u)
    if (s.contains(u)) out.push_back({net.user(u).cell, net.user(u).slot});
  return out;
}

inline Json allocation_json(const PowerAllocation& a) {
  Json out = Json::array();
  for (const auto& r : a.r) out.push_back(r ? Json(to_string(*r)) : Json(nullptr));
  return out;
}

inline Json violation_json(const ConditionViolation& v) {
  return {{"condition", to_string(v.condition)}, {"i", v.i},   {"j", v.j},
          {"k", v.k},                           {"l", v.l},   {"l_prime", v.l_prime},
          {"lhs", to_string(v.lhs)},            {"rhs", to_string(v.rhs)}};
}

inline Json condition_report_json(const ConditionReport& rep) {
  Json v = Json::array();
  for (const auto& x : rep.violations) v.push_back(violation_json(x));
  return {{"convexity_holds", rep.convexity_holds}, {"optimality_holds", rep.optimality_holds}, {"violations", v}};
}

inline Json inequality_json(const NetworkSpec& net, const LinearInequality& ineq) {
  Json users = Json::array();
  for (int u : ineq.users) users.push_back({net.user(u).cell, net.user(u).slot});
  Json terms = Json::array();
  for (const auto& t : ineq.rhs_terms)
    terms.push_back({{"sign", t.sign}, {"tx", {net.user(t.tx).cell, net.user(t.tx).slot}}, {"rx_cell", t.rx_cell}});
  return {{"users", users},
          {"rhs", to_string(ineq.rhs)},
          {"rhs_decimal", to_double(ineq.rhs)},
          {"cycle", ineq.cycle},
          {"depths", ineq.depths},
          {"rhs_terms", terms}};
}

inline Json region_json(const NetworkSpec& net, const PolyRegion& region) {
  Json ineqs = Json::array();
  for (const auto& q : region.inequalities) ineqs.push_back(inequality_json(net, q));
  Json forced = Json::array();
  for (int u = 0; u < region.dimension(); ++u)
    if (region.forced_zero[u]) forced.push_back({region.dim_users[u].cell, region.dim_users[u].slot});
  return {{"inequalities", ineqs}, {"forced_zero", forced}};
}

// CSV: one row per inequality, users as "c:s" joined by spaces.
inline std::string region_csv(const NetworkSpec& net, const PolyRegion& region) {
  std::ostringstream out;
  out << "index,users,rhs,rhs_decimal,cycle,depths\n";
  auto join = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t t = 0; t < v.size(); ++t) s += (t ? " " : "") + std::to_string(v[t]);
    return s;
  };
  for (std::size_t t = 0; t < region.inequalities.size(); ++t) {
    const auto& q = region.inequalities[t];
    std::string users;
    for (std::size_t a = 0; a < q.users.size(); ++a) {
      UserId u = net.user(q.users[a]);
      users += (a ? " " : "") + std::to_string(u.cell) + ":" + std::to_string(u.slot);
    }
    out << t << "," << users << "," << to_string(q.rhs) << "," << to_double(q.rhs) << "," << join(q.cycle) << ","
        << join(q.depths) << "\n";
  }
  return out.str();
}

inline Json circuit_json(const PotentialGraph& g, const NetworkSpec& net, const Circuit& c) {
  Json verts = Json::array();
  for (int v : c.vertices)
    verts.push_back(v == 0 ? Json("ground") : Json({net.user(g.vertex_user[v - 1]).cell, net.user(g.vertex_user[v - 1]).slot}));
  return {{"vertices", verts}, {"length", to_string(c.length)}};
}

inline std::string vertices_csv(const NetworkSpec& net, const std::vector<GdofTuple>& verts) {
  std::ostringstream out;
  out << "index";
  for (int u = 0; u < net.user_count(); ++u) out << ",d_" << net.user(u).cell << "_" << net.user(u).slot;
  for (int u = 0; u < net.user_count(); ++u) out << ",x_" << net.user(u).cell << "_" << net.user(u).slot;
  out << "\n";
  for (std::size_t t = 0; t < verts.size(); ++t) {
    out << t;
    for (const auto& x : verts[t]) out << "," << to_string(x);
    for (const auto& x : verts[t]) out << "," << to_double(x);
    out << "\n";
  }
  return out.str();
}

inline Json rate_bound_json(const NetworkSpec& net, const RateBound& b) {
  Json users = Json::array();
  for (int u : b.users) users.push_back({net.user(u).cell, net.user(u).slot});
  return {{"users", users}, {"rhs_bits", b.rhs_bits}, {"cycle", b.cycle}, {"depths", b.depths}};
}

inline Json gap_report_json(const NetworkSpec& net, const GapReport& rep) {
  Json bounds = Json::array();
  for (const auto& b : rep.bounds) bounds.push_back(rate_bound_json(net, b));
  Json corners = Json::array();
  for (const auto& c : rep.corners) corners.push_back(tuple_json(c));
  Json entries = Json::array();
  for (const auto& e : rep.per_bound)
    entries.push_back({{"corner", e.corner},
                       {"bound", e.bound},
                       {"achieved_sum_bits", e.achieved_sum},
                       {"gap_bits", e.gap_bits},
                       {"tight", e.tight}});
  return {{"log2_power", rep.log2_power},
          {"min_gap_bits", rep.min_gap_bits},
          {"max_gap_bits", rep.max_gap_bits},
          {"max_tight_gap_bits", rep.max_tight_gap_bits},
          {"bounds", bounds},
          {"corners", corners},
          {"entries", entries}};
}

inline std::string probability_csv_header() { return "r_m,L,p_convexity,p_optimality,trials,ci95\n"; }

inline std::string probability_csv_row(const ProbabilityPoint& p) {
  std::ostringstream out;
  out << p.r_m << "," << p.users_per_cell << "," << p.p_convexity << "," << p.p_optimality << "," << p.trials << ","
      << std::max(p.ci95_convexity, p.ci95_optimality) << "\n";
  return out.str();
}

inline Json probability_json(const ProbabilityPoint& p) {
  return {{"r_m", p.r_m},
          {"L", p.users_per_cell},
          {"p_convexity", p.p_convexity},
          {"p_optimality", p.p_optimality},
          {"trials", p.trials},
          {"ci95_convexity", p.ci95_convexity},
          {"ci95_optimality", p.ci95_optimality},
          {"implication_violations", p.implication_violations}};
}

}  // namespace tin
