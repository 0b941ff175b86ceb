#pragma once

#include "analysis.hpp"
#include "cellsim.hpp"
#include "io.hpp"
#include "sampling.hpp"

#include <CLI11.hpp>

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace tin {

struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

struct OracleVerification {
  long instances = 0;
  long members = 0;
  long negative_cycle_mismatches = 0;  // Bellman-Ford vs inequality membership
  long circuit_checked = 0;
  long circuit_mismatches = 0;  // exhaustive circuit check vs inequality membership
  long reproduction_failures = 0;  // recovered powers that do not reach d
};

// Random (network, order, subnetwork, d) instances with K <= 3 and L <= 2.
inline OracleVerification oracle_verify(long instances, std::uint64_t seed, bool with_circuits = true) {
  std::mt19937_64 rng(seed);
  OracleVerification v;
  for (long t = 0; t < instances; ++t) {
    NetworkSpec net = random_network(rng, random_users_per_cell(rng, 3, 2));
    Subnetwork s = random_subnetwork(rng, net);
    DecodingOrder order = random_order(rng, net, s);
    GdofTuple d = random_gdof(rng, net, s);
    bool by_ineq = membership(polyhedral_region(net, order, s), d).member;
    PotentialGraph g = build_potential_graph(net, order, s, d);
    auto res = feasible_by_negative_cycle(g);
    ++v.instances;
    v.members += by_ineq;
    v.negative_cycle_mismatches += res.feasible != by_ineq;
    if (res.feasible) {
      GdofTuple got = gdof_from_allocation(net, order, recover_power_allocation(g));
      for (int u = 0; u < net.user_count(); ++u)
        if (got[u] < d[u]) {
          ++v.reproduction_failures;
          break;
        }
    }
    if (with_circuits && s.size() + 1 <= kCircuitOracleMaxVertices) {
      ++v.circuit_checked;
      v.circuit_mismatches += all_circuits_region_oracle(net, order, s, d) != by_ineq;
    }
  }
  return v;
}

namespace detail {

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json envelope(const std::string& command, const std::string& status) {
  return {{"schema", kSchemaVersion}, {"command", command}, {"status", status}};
}

inline std::string warnings_text(const NetworkSpec& net) {
  std::string out;
  for (const auto& w : net.warnings()) out += "warning: " + w + "\n";
  return out;
}

inline std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("bad number '" + item + "'");
    }
  }
  return out;
}

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double x : parse_double_list(text)) {
    if (x != std::floor(x)) throw ParseError("expected integers in '" + text + "'");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

inline GdofTuple parse_tuple(const std::string& text, const NetworkSpec& net) {
  GdofTuple d = parse_rational_list(text);
  if (static_cast<int>(d.size()) != net.user_count())
    throw ParseError("--d has " + std::to_string(d.size()) + " entries, the network has " +
                     std::to_string(net.user_count()) + " users");
  return d;
}

// Finite-SNR view of a document: the file's block, or unit-power gains realizing alpha at --snr.
inline FiniteSnrModel finite_view(const NetworkDocument& doc, double snr) {
  if (snr > 0) {
    if (doc.finite_snr) {
      FiniteSnrSpec fs = *doc.finite_snr;
      fs.nominal_power = snr;
      return finite_snr_model(fs, doc.precision);
    }
    return finite_snr_model(finite_snr_from_levels(doc.net, snr), doc.precision);
  }
  if (!doc.finite_snr) throw PreconditionError("no finite_snr block in the network file; pass --snr");
  return finite_snr_model(*doc.finite_snr, doc.precision);
}

}  // namespace detail

// Runs one command line (without the program name). Never throws.
inline CommandResult run(std::vector<std::string> args) {
  CommandResult res;
  CLI::App app{"TIN GDoF region toolkit for interfering multiple-access channels", "tinregion"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string network, order_text, sub_text, format = "json", d_text, weights_text;
  double snr = 0;
  int sample_vertices = 0;
  std::string geometry = "linear", r_text = "243", L_text = "1";
  long trials = 1000, instances = 1000;
  std::uint64_t seed = 1;
  int ring_cells = 4;
  double r0 = 35;

  auto add_network = [&](CLI::App* sub) {
    sub->add_option("--network", network, "Network file (JSON)")->required()->check(CLI::ExistingFile);
  };
  auto add_order = [&](CLI::App* sub) {
    sub->add_option("--order", order_text, "Decoding order: id, reverse or per-cell lists such as \"2,1;1\"");
    sub->add_option("--subnetwork", sub_text, "Active users: all, none or \"1:1,2:1\"");
  };

  auto* check = app.add_subcommand("check", "Evaluate the convexity and optimality conditions");
  add_network(check);

  auto* region = app.add_subcommand("region", "List the inequalities of a polyhedral region");
  add_network(region);
  add_order(region);
  region->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* member = app.add_subcommand("membership", "Test a GDoF tuple for achievability");
  add_network(member);
  add_order(member);
  member->add_option("--d", d_text, "GDoF tuple, comma separated, flat user order")->required();

  auto* sumgdof = app.add_subcommand("sumgdof", "Maximize a weighted GDoF sum over a polyhedral region");
  add_network(sumgdof);
  add_order(sumgdof);
  sumgdof->add_option("--weights", weights_text, "Nonnegative weights, comma separated (default all ones)");

  auto* verts = app.add_subcommand("vertices", "Enumerate the vertices of a polyhedral region");
  add_network(verts);
  add_order(verts);
  verts->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* outer = app.add_subcommand("outer-bound", "GDoF outer bound and, with SNR data, the finite-SNR rate bounds");
  add_network(outer);
  outer->add_option("--snr", snr, "Nominal power P (linear) for the finite-SNR bounds")->check(CLI::PositiveNumber);

  auto* gap = app.add_subcommand("gap-report", "Compare achievable corner rates with the finite-SNR outer bound");
  add_network(gap);
  gap->add_option("--snr", snr, "Nominal power P (linear)")->check(CLI::PositiveNumber);
  gap->add_option("--vertices", sample_vertices, "Number of sampled corners (0 = all)")->check(CLI::NonNegativeNumber);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo probability of the conditions in a cellular layout");
  sim->add_option("--geometry", geometry, "linear or circular")->check(CLI::IsMember({"linear", "circular"}));
  sim->add_option("--r", r_text, "Site radius in meters, comma separated list");
  sim->add_option("--L", L_text, "Users per cell, comma separated list");
  sim->add_option("--trials", trials, "Trials per point")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "Random seed");
  sim->add_option("--cells", ring_cells, "Cells on the ring (circular geometry)")->check(CLI::Range(2, 64));
  sim->add_option("--r0", r0, "Exclusion radius in meters")->check(CLI::NonNegativeNumber);
  sim->add_option("--format", format, "csv or json (default csv)")->check(CLI::IsMember({"json", "csv"}));

  auto* oracle = app.add_subcommand("oracle-verify", "Cross-check the membership oracles on random instances");
  oracle->add_option("--instances", instances, "Number of random instances")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", seed, "Random seed");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    res.out = app.help();
    return res;
  } catch (const CLI::CallForAllHelp&) {
    res.out = app.help("", CLI::AppFormatMode::All);
    return res;
  } catch (const CLI::ParseError& e) {
    res.err = std::string("error: ") + e.what() + "\nrun 'tinregion --help' for usage\n";
    res.exit_code = 2;
    return res;
  }
  // The simulate CSV default differs from the other commands.
  if (sim->parsed() && sim->count("--format") == 0) format = "csv";

  try {
    if (sim->parsed()) {
      ScenarioParams p;
      p.geometry = geometry == "linear" ? Geometry::linear_sectorized : Geometry::circular;
      p.circular_cells = ring_cells;
      p.exclusion_m = r0;
      p.trials = trials;
      p.seed = seed;
      Json rows = Json::array();
      std::string csv = probability_csv_header();
      for (int L : detail::parse_int_list(L_text))
        for (double r : detail::parse_double_list(r_text)) {
          p.users_per_cell = L;
          p.site_radius_m = r;
          auto pt = estimate_probabilities(p);
          rows.push_back(probability_json(pt));
          csv += probability_csv_row(pt);
        }
      if (format == "csv") {
        res.out = csv;
      } else {
        Json j = detail::envelope("simulate", "ok");
        j["geometry"] = geometry;
        j["cells"] = p.cells();
        j["seed"] = seed;
        j["points"] = rows;
        res.out = detail::dump(j);
      }
      return res;
    }
    if (oracle->parsed()) {
      auto v = oracle_verify(instances, seed);
      long bad = v.negative_cycle_mismatches + v.circuit_mismatches + v.reproduction_failures;
      Json j = detail::envelope("oracle-verify", bad == 0 ? "agree" : "mismatch");
      j["instances"] = v.instances;
      j["seed"] = seed;
      j["members"] = v.members;
      j["negative_cycle_mismatches"] = v.negative_cycle_mismatches;
      j["circuit_checked"] = v.circuit_checked;
      j["circuit_mismatches"] = v.circuit_mismatches;
      j["reproduction_failures"] = v.reproduction_failures;
      res.out = detail::dump(j);
      res.exit_code = bad == 0 ? 0 : 1;
      return res;
    }

    NetworkDocument doc = load_network(network);
    const NetworkSpec& net = doc.net;
    res.err = detail::warnings_text(net);
    auto subnetwork = [&] { return parse_subnetwork(sub_text, net); };

    if (check->parsed()) {
      auto rep = check_conditions(net);
      std::string status = rep.optimality_holds ? "optimal" : rep.convexity_holds ? "convex" : "neither";
      Json j = detail::envelope("check", status);
      j["report"] = condition_report_json(rep);
      res.out = detail::dump(j);
      res.exit_code = rep.optimality_holds ? 0 : rep.convexity_holds ? 1 : 2;
      return res;
    }
    if (region->parsed()) {
      Subnetwork s = subnetwork();
      DecodingOrder o = parse_order(order_text, net, s);
      PolyRegion reg = polyhedral_region(net, o, s);
      if (format == "csv") {
        res.out = region_csv(net, reg);
      } else {
        Json j = detail::envelope("region", "ok");
        j["order"] = order_json(o);
        j["subnetwork"] = subnetwork_json(net, s);
        j["region"] = region_json(net, reg);
        res.out = detail::dump(j);
      }
      return res;
    }
    if (member->parsed()) {
      GdofTuple d = detail::parse_tuple(d_text, net);
      if (order_text.empty() && sub_text.empty()) {
        auto gm = general_membership(net, d);
        Json j = detail::envelope("membership", gm.member ? "member" : "non-member");
        j["d"] = tuple_json(d);
        j["orders_tested"] = gm.orders_tested;
        if (gm.witness) {
          j["order"] = order_json(gm.witness->order);
          j["subnetwork"] = subnetwork_json(net, gm.witness->subnetwork);
          j["r"] = allocation_json(gm.witness->allocation);
          j["achieved"] = tuple_json(gdof_from_allocation(net, gm.witness->order, gm.witness->allocation));
        }
        res.out = detail::dump(j);
        res.exit_code = gm.member ? 0 : 1;
        return res;
      }
      Subnetwork s = sub_text.empty() ? Subnetwork::support(d) : subnetwork();
      DecodingOrder o = parse_order(order_text, net, s);
      for (int u = 0; u < net.user_count(); ++u)
        if (!s.contains(u) && d[u] != 0) throw PreconditionError("d is nonzero on a user outside the subnetwork");
      PotentialGraph g = build_potential_graph(net, o, s, d);
      auto fr = feasible_by_negative_cycle(g);
      Json j = detail::envelope("membership", fr.feasible ? "member" : "non-member");
      j["d"] = tuple_json(d);
      j["order"] = order_json(o);
      j["subnetwork"] = subnetwork_json(net, s);
      if (fr.feasible) {
        PowerAllocation a = recover_power_allocation(g);
        j["r"] = allocation_json(a);
        j["achieved"] = tuple_json(gdof_from_allocation(net, o, a));
      } else {
        j["circuit"] = circuit_json(g, net, *fr.witness);
      }
      res.out = detail::dump(j);
      res.exit_code = fr.feasible ? 0 : 1;
      return res;
    }
    if (sumgdof->parsed()) {
      Subnetwork s = subnetwork();
      DecodingOrder o = parse_order(order_text, net, s);
      std::vector<Rational> w = weights_text.empty() ? std::vector<Rational>(net.user_count(), 1)
                                                     : parse_rational_list(weights_text);
      if (static_cast<int>(w.size()) != net.user_count())
        throw ParseError("--weights needs one entry per user");
      auto opt = max_weighted_gdof(polyhedral_region(net, o, s), w);
      Json j = detail::envelope("sumgdof", "ok");
      j["order"] = order_json(o);
      j["weights"] = tuple_json(w);
      j["value"] = to_string(opt.value);
      j["value_decimal"] = to_double(opt.value);
      j["argmax"] = tuple_json(opt.argmax);
      res.out = detail::dump(j);
      return res;
    }
    if (verts->parsed()) {
      Subnetwork s = subnetwork();
      DecodingOrder o = parse_order(order_text, net, s);
      auto vs = vertices(polyhedral_region(net, o, s));
      if (format == "csv") {
        res.out = vertices_csv(net, vs);
      } else {
        Json j = detail::envelope("vertices", "ok");
        j["order"] = order_json(o);
        Json users = Json::array();
        for (int u = 0; u < net.user_count(); ++u) users.push_back(user_json(net, u));
        j["users"] = users;
        Json list = Json::array();
        for (const auto& v : vs) list.push_back(tuple_json(v));
        j["vertices"] = list;
        res.out = detail::dump(j);
      }
      return res;
    }
    if (outer->parsed()) {
      PolyRegion ob = gdof_outer_bound(net);
      Json j = detail::envelope("outer-bound", "ok");
      j["gdof_bound"] = region_json(net, ob);
      if (snr > 0 || doc.finite_snr) {
        FiniteSnrModel m = detail::finite_view(doc, snr);
        Json bounds = Json::array();
        for (const auto& b : outer_bound_rates(m)) bounds.push_back(rate_bound_json(m.net, b));
        j["nominal_power"] = m.power;
        j["rate_bounds"] = bounds;
      }
      res.out = detail::dump(j);
      return res;
    }
    if (gap->parsed()) {
      FiniteSnrModel m = detail::finite_view(doc, snr);
      auto rep = gap_report(m, sample_vertices);
      Json j = detail::envelope("gap-report", rep.min_gap_bits >= -1e-9 ? "ok" : "bound-violated");
      j["nominal_power"] = m.power;
      j["report"] = gap_report_json(m.net, rep);
      res.out = detail::dump(j);
      res.exit_code = rep.min_gap_bits >= -1e-9 ? 0 : 1;
      return res;
    }
  } catch (const Error& e) {
    res.err += std::string("error: ") + e.what() + "\n";
    res.exit_code = 2;
    return res;
  } catch (const std::exception& e) {
    res.err += std::string("internal error: ") + e.what() + "\n";
    res.exit_code = 2;
    return res;
  }
  res.err = "error: no subcommand handled\n";
  res.exit_code = 2;
  return res;
}

}  // namespace tin
