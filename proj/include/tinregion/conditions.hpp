#pragma once

#include "model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tin {

// The convexity pair and the stronger optimality pair; a_ij[l] is the level from (l, i) to receiver j.
enum class Condition {
  convexity_order,        // a_ii[l] >= a_ii[l'] + max_j (a_ij[l] - a_ij[l'])
  convexity_interference, // a_ii[l] >= max_{j,(l_k,k)} a_ij[l] + a_ki[l_k] - a_kj[l_k] 1(k != j)
  optimality_order,       // a_ii[l] >= a_ii[l'] + max_j min(a_ij[l], 2 a_ij[l] - a_ij[l'])
  optimality_interference // a_ii[l] >= max_j a_ij[l] + max_{(l_k,k)} a_ki[l_k]
};

inline std::string to_string(Condition c) {
  switch (c) {
    case Condition::convexity_order: return "convexity_order";
    case Condition::convexity_interference: return "convexity_interference";
    case Condition::optimality_order: return "optimality_order";
    case Condition::optimality_interference: return "optimality_interference";
  }
  return "unknown";
}

inline bool is_convexity_condition(Condition c) {
  return c == Condition::convexity_order || c == Condition::convexity_interference;
}

// Index fields that do not apply to a condition are 0.
struct ConditionViolation {
  Condition condition;
  int i = 0, j = 0, k = 0, l = 0, l_prime = 0;
  Rational lhs, rhs;
};

struct ConditionReport {
  bool convexity_holds = true;
  bool optimality_holds = true;
  std::vector<ConditionViolation> violations;
};

// Evaluates all four families; every failing index tuple is listed with its maximizing j (and k, l_k).
inline ConditionReport check_conditions(const NetworkSpec& net) {
  ConditionReport rep;
  const int K = net.cells();
  auto a = [&](int tx_cell, int slot, int rx) -> const Rational& { return net.alpha(UserId{tx_cell, slot}, rx); };
  auto fail = [&](ConditionViolation v) {
    (is_convexity_condition(v.condition) ? rep.convexity_holds : rep.optimality_holds) = false;
    rep.violations.push_back(std::move(v));
  };
  if (K < 2) return rep;

  for (int i = 1; i <= K; ++i) {
    const int Li = net.users_in(i);
    for (int l = 1; l <= Li; ++l)
      for (int lp = 1; lp < l; ++lp) {
        std::optional<Rational> best_cvx, best_opt;
        int arg_cvx = 0, arg_opt = 0;
        for (int j = 1; j <= K; ++j) {
          if (j == i) continue;
          Rational cvx = a(i, l, j) - a(i, lp, j);
          Rational twice = 2 * a(i, l, j) - a(i, lp, j);
          Rational opt = twice < a(i, l, j) ? twice : a(i, l, j);
          if (!best_cvx || cvx > *best_cvx) best_cvx = cvx, arg_cvx = j;
          if (!best_opt || opt > *best_opt) best_opt = opt, arg_opt = j;
        }
        Rational rhs_cvx = a(i, lp, i) + *best_cvx;
        if (a(i, l, i) < rhs_cvx) fail({Condition::convexity_order, i, arg_cvx, 0, l, lp, a(i, l, i), rhs_cvx});
        Rational rhs_opt = a(i, lp, i) + *best_opt;
        if (a(i, l, i) < rhs_opt) fail({Condition::optimality_order, i, arg_opt, 0, l, lp, a(i, l, i), rhs_opt});
      }

    // Strongest incoming interference at receiver i, used by the optimality form.
    std::optional<Rational> in_max;
    int in_k = 0, in_l = 0;
    for (int k = 1; k <= K; ++k) {
      if (k == i) continue;
      for (int lk = 1; lk <= net.users_in(k); ++lk)
        if (!in_max || a(k, lk, i) > *in_max) in_max = a(k, lk, i), in_k = k, in_l = lk;
    }
    for (int l = 1; l <= Li; ++l) {
      std::optional<Rational> best;
      int bj = 0, bk = 0, bl = 0;
      std::optional<Rational> out_max;
      int out_j = 0;
      for (int j = 1; j <= K; ++j) {
        if (j == i) continue;
        if (!out_max || a(i, l, j) > *out_max) out_max = a(i, l, j), out_j = j;
        for (int k = 1; k <= K; ++k) {
          if (k == i) continue;
          for (int lk = 1; lk <= net.users_in(k); ++lk) {
            Rational v = a(i, l, j) + a(k, lk, i);
            if (k != j) v -= a(k, lk, j);
            if (!best || v > *best) best = v, bj = j, bk = k, bl = lk;
          }
        }
      }
      if (a(i, l, i) < *best) fail({Condition::convexity_interference, i, bj, bk, l, bl, a(i, l, i), *best});
      Rational rhs = *out_max + *in_max;
      if (a(i, l, i) < rhs) fail({Condition::optimality_interference, i, out_j, in_k, l, in_l, a(i, l, i), rhs});
    }
  }
  return rep;
}

inline ConditionReport filtered(ConditionReport rep, bool convexity) {
  std::erase_if(rep.violations,
                [&](const ConditionViolation& v) { return is_convexity_condition(v.condition) != convexity; });
  return rep;
}

// Both flags are always evaluated; violations are restricted to the requested family pair.
inline ConditionReport check_convexity(const NetworkSpec& net) { return filtered(check_conditions(net), true); }
inline ConditionReport check_optimality(const NetworkSpec& net) { return filtered(check_conditions(net), false); }

struct UserPartition {
  std::vector<int> double_primed;
  std::vector<int> primed;
  bool chain_holds = true;  // chain inequality over primed \ {l_i}
};

inline UserPartition lemma4_partition(const NetworkSpec& net, int i, int j, int l_i) {
  if (i == j) throw PreconditionError("partition needs two distinct cells");
  if (!net.contains({i, l_i}) || j < 1 || j > net.cells()) throw PreconditionError("partition index out of range");
  auto a = [&](int slot, int rx) -> const Rational& { return net.alpha(UserId{i, slot}, rx); };
  UserPartition out;
  const Rational head = a(l_i, i) - a(l_i, j);
  for (int s = 1; s <= l_i; ++s) {
    if (s < l_i && head >= a(s, i))
      out.double_primed.push_back(s);
    else
      out.primed.push_back(s);
  }
  for (int sp : out.primed)
    for (int lp : out.primed) {
      if (sp >= lp || lp == l_i) continue;
      if (head < a(sp, i) - a(sp, j) + a(lp, j)) out.chain_holds = false;
    }
  return out;
}

enum class PimacLabel { A_o_prime, A_o_doubleprime_only, A_p_minus_A_o, A_minus_A_p, outside_A };

inline std::string to_string(PimacLabel label) {
  switch (label) {
    case PimacLabel::A_o_prime: return "A_o_prime";
    case PimacLabel::A_o_doubleprime_only: return "A_o_doubleprime_only";
    case PimacLabel::A_p_minus_A_o: return "A_p_minus_A_o";
    case PimacLabel::A_minus_A_p: return "A_minus_A_p";
    case PimacLabel::outside_A: return "outside_A";
  }
  return "unknown";
}

struct PimacRegime {
  PimacLabel label = PimacLabel::outside_A;
  Rational a12_1, a12_2;  // box bounds for the two cross levels of cell 1
};

// Regimes of the two-cell network with a two-user cell and a single-user cell.
inline PimacRegime classify_pimac(const NetworkSpec& net) {
  if (net.cells() != 2 || net.users_in(1) != 2 || net.users_in(2) != 1)
    throw PreconditionError("regime classification needs cells with (2, 1) users");
  const Rational& a11_1 = net.alpha(UserId{1, 1}, 1);
  const Rational& a11_2 = net.alpha(UserId{1, 2}, 1);
  const Rational& a12_1 = net.alpha(UserId{1, 1}, 2);
  const Rational& a12_2 = net.alpha(UserId{1, 2}, 2);
  const Rational& a22 = net.alpha(UserId{2, 1}, 2);
  const Rational& a21 = net.alpha(UserId{2, 1}, 1);
  PimacRegime out;
  out.a12_1 = (a22 < a11_1 ? a22 : a11_1) - a21;
  out.a12_2 = (a22 < a11_2 ? a22 : a11_2) - a21;
  if (a12_1 > out.a12_1 || a12_2 > out.a12_2) return out;
  const Rational gap = a11_2 - a11_1;
  if (gap >= a12_2)
    out.label = PimacLabel::A_o_prime;
  else if (gap >= 2 * a12_2 - a12_1)
    out.label = PimacLabel::A_o_doubleprime_only;
  else if (gap >= a12_2 - a12_1)
    out.label = PimacLabel::A_p_minus_A_o;
  else
    out.label = PimacLabel::A_minus_A_p;
  return out;
}

}  // namespace tin
