#pragma once

#include "rational.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace tin {

// { x : A x <= b, x >= 0 } with small integer coefficients.
struct LinearSystem {
  int n = 0;
  std::vector<std::vector<int>> A;
  std::vector<Rational> b;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  Rational value;
  std::vector<Rational> x;
};

namespace detail {

inline bool row_nonnegative(const std::vector<int>& row) {
  return std::all_of(row.begin(), row.end(), [](int a) { return a >= 0; });
}

// Rank of an integer matrix by fraction-free elimination; entries stay bounded by minors.
inline int integer_rank(std::vector<std::vector<std::int64_t>> M, int cols) {
  int rank = 0;
  std::int64_t prev = 1;
  const int rows = static_cast<int>(M.size());
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (M[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[rank], M[piv]);
    for (int r = rank + 1; r < rows; ++r) {
      for (int cc = c + 1; cc < cols; ++cc) M[r][cc] = (M[rank][c] * M[r][cc] - M[r][c] * M[rank][cc]) / prev;
      M[r][c] = 0;
    }
    prev = M[rank][c];
    ++rank;
  }
  return rank;
}

}  // namespace detail

// Maximizes c.x with Bland's rule on a dictionary whose initial basis is the slack basis.
// Needs b >= 0, except rows with only nonnegative coefficients and negative rhs, which make the system empty.
inline LpSolution simplex_max(const LinearSystem& sys, const std::vector<Rational>& c) {
  const int n = sys.n;
  const int m = static_cast<int>(sys.A.size());
  if (static_cast<int>(c.size()) != n) throw PreconditionError("objective size mismatch");
  for (int r = 0; r < m; ++r)
    if (sys.b[r] < 0) {
      if (detail::row_nonnegative(sys.A[r])) return {LpStatus::infeasible, 0, {}};
      throw PreconditionError("origin is infeasible; no phase-one start available");
    }
  std::vector<std::vector<Rational>> D(m, std::vector<Rational>(n));
  for (int r = 0; r < m; ++r)
    for (int j = 0; j < n; ++j) D[r][j] = sys.A[r][j];
  std::vector<Rational> beta = sys.b;
  std::vector<Rational> obj = c;
  Rational z = 0;
  std::vector<int> nonbasic(n), basic(m);  // variable ids: 0..n-1 original, n.. slacks
  for (int j = 0; j < n; ++j) nonbasic[j] = j;
  for (int r = 0; r < m; ++r) basic[r] = n + r;

  while (true) {
    int enter = -1;
    for (int j = 0; j < n; ++j)
      if (obj[j] > 0 && (enter < 0 || nonbasic[j] < nonbasic[enter])) enter = j;
    if (enter < 0) break;
    int leave = -1;
    Rational best;
    for (int r = 0; r < m; ++r) {
      if (D[r][enter] <= 0) continue;
      Rational ratio = beta[r] / D[r][enter];
      if (leave < 0 || ratio < best || (ratio == best && basic[r] < basic[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) return {LpStatus::unbounded, 0, {}};

    const Rational piv = D[leave][enter];
    for (int j = 0; j < n; ++j)
      if (j != enter) D[leave][j] /= piv;
    D[leave][enter] = 1 / piv;
    beta[leave] /= piv;
    for (int r = 0; r < m; ++r) {
      if (r == leave || D[r][enter] == 0) continue;
      const Rational f = D[r][enter];
      for (int j = 0; j < n; ++j)
        if (j != enter) D[r][j] -= f * D[leave][j];
      D[r][enter] = -f * D[leave][enter];
      beta[r] -= f * beta[leave];
    }
    const Rational f = obj[enter];
    z += f * beta[leave];
    for (int j = 0; j < n; ++j)
      if (j != enter) obj[j] -= f * D[leave][j];
    obj[enter] = -f * D[leave][enter];
    std::swap(nonbasic[enter], basic[leave]);
  }
  LpSolution sol;
  sol.value = z;
  sol.x.assign(n, 0);
  for (int r = 0; r < m; ++r)
    if (basic[r] < n) sol.x[basic[r]] = beta[r];
  return sol;
}

inline bool satisfies(const LinearSystem& sys, const std::vector<Rational>& x) {
  for (int j = 0; j < sys.n; ++j)
    if (x[j] < 0) return false;
  for (std::size_t r = 0; r < sys.A.size(); ++r) {
    Rational s = 0;
    for (int j = 0; j < sys.n; ++j)
      if (sys.A[r][j]) s += sys.A[r][j] * x[j];
    if (s > sys.b[r]) return false;
  }
  return true;
}

// Vertices by the double description method: start from a simplex that contains the polytope
// and cut it with one constraint at a time. Adjacency is decided by the rank of the common tight rows.
// Output is sorted lexicographically.
inline std::vector<std::vector<Rational>> enumerate_vertices(const LinearSystem& sys) {
  const int n = sys.n;
  const int m = static_cast<int>(sys.A.size());
  for (int r = 0; r < m; ++r)
    if (sys.b[r] < 0 && detail::row_nonnegative(sys.A[r])) return {};
  if (n == 0) return {std::vector<Rational>{}};

  // Bounding simplex sum(x) <= T from per-coordinate caps of nonnegative rows.
  Rational T = 1;
  for (int j = 0; j < n; ++j) {
    std::optional<Rational> cap;
    for (int r = 0; r < m; ++r)
      if (sys.A[r][j] > 0 && detail::row_nonnegative(sys.A[r])) {
        Rational v = sys.b[r] / sys.A[r][j];
        if (!cap || v < *cap) cap = v;
      }
    if (!cap) throw PreconditionError("polytope is unbounded in coordinate " + std::to_string(j));
    if (*cap > 0) T += *cap;
  }

  const int total = n + 1 + m;
  std::vector<std::vector<std::int64_t>> rows;
  for (int j = 0; j < n; ++j) {
    std::vector<std::int64_t> row(n, 0);
    row[j] = -1;
    rows.emplace_back(std::move(row));
  }
  rows.emplace_back(n, 1);
  for (const auto& a : sys.A) rows.emplace_back(a.begin(), a.end());

  struct Vertex {
    std::vector<Rational> x;
    boost::dynamic_bitset<> tight;
  };
  std::vector<Vertex> verts;
  {
    Vertex origin{std::vector<Rational>(n, 0), boost::dynamic_bitset<>(total)};
    for (int j = 0; j < n; ++j) origin.tight.set(j);
    verts.push_back(std::move(origin));
    for (int j = 0; j < n; ++j) {
      Vertex v{std::vector<Rational>(n, 0), boost::dynamic_bitset<>(total)};
      v.x[j] = T;
      for (int t = 0; t < n; ++t)
        if (t != j) v.tight.set(t);
      v.tight.set(n);
      verts.push_back(std::move(v));
    }
  }

  auto adjacent = [&](const boost::dynamic_bitset<>& common) {
    if (static_cast<int>(common.count()) < n - 1) return false;
    std::vector<std::vector<std::int64_t>> M;
    for (auto t = common.find_first(); t != boost::dynamic_bitset<>::npos; t = common.find_next(t)) M.push_back(rows[t]);
    return detail::integer_rank(std::move(M), n) == n - 1;
  };

  for (int r = 0; r < m; ++r) {
    const int id = n + 1 + r;
    std::vector<Rational> slack(verts.size());
    bool any_negative = false;
    for (std::size_t v = 0; v < verts.size(); ++v) {
      Rational s = sys.b[r];
      for (int j = 0; j < n; ++j)
        if (sys.A[r][j]) s -= sys.A[r][j] * verts[v].x[j];
      slack[v] = s;
      any_negative |= s < 0;
    }
    if (!any_negative) {
      for (std::size_t v = 0; v < verts.size(); ++v)
        if (slack[v] == 0) verts[v].tight.set(id);
      continue;
    }
    std::vector<Vertex> next;
    std::vector<std::size_t> pos, neg;
    for (std::size_t v = 0; v < verts.size(); ++v) {
      if (slack[v] > 0)
        pos.push_back(v);
      else if (slack[v] < 0)
        neg.push_back(v);
    }
    for (std::size_t p : pos)
      for (std::size_t q : neg) {
        boost::dynamic_bitset<> common = verts[p].tight & verts[q].tight;
        if (!adjacent(common)) continue;
        Rational t = slack[p] / (slack[p] - slack[q]);
        Vertex w{verts[p].x, common};
        for (int j = 0; j < n; ++j) w.x[j] += t * (verts[q].x[j] - verts[p].x[j]);
        w.tight.set(id);
        next.push_back(std::move(w));
      }
    for (std::size_t v = 0; v < verts.size(); ++v) {
      if (slack[v] < 0) continue;
      if (slack[v] == 0) verts[v].tight.set(id);
      next.push_back(std::move(verts[v]));
    }
    verts = std::move(next);
    if (verts.empty()) return {};
  }

  std::vector<std::vector<Rational>> out;
  for (auto& v : verts) out.push_back(std::move(v.x));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Reference vertex enumeration: every choice of n tight rows among A and x >= 0, solved exactly.
inline std::vector<std::vector<Rational>> enumerate_vertices_by_bases(const LinearSystem& sys) {
  const int n = sys.n;
  const int m = static_cast<int>(sys.A.size());
  if (n == 0) {
    for (int r = 0; r < m; ++r)
      if (sys.b[r] < 0) return {};
    return {std::vector<Rational>{}};
  }
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (int j = 0; j < n; ++j) {
    std::vector<Rational> row(n, 0);
    row[j] = -1;
    rows.push_back(row);
    rhs.push_back(0);
  }
  for (int r = 0; r < m; ++r) {
    rows.emplace_back(sys.A[r].begin(), sys.A[r].end());
    rhs.push_back(sys.b[r]);
  }
  const int total = static_cast<int>(rows.size());
  std::vector<std::vector<Rational>> out;
  std::vector<int> pick(n);
  for (int t = 0; t < n; ++t) pick[t] = t;
  while (true) {
    std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n + 1));
    for (int t = 0; t < n; ++t) {
      for (int j = 0; j < n; ++j) M[t][j] = rows[pick[t]][j];
      M[t][n] = rhs[pick[t]];
    }
    bool singular = false;
    for (int c = 0; c < n && !singular; ++c) {
      int piv = -1;
      for (int r = c; r < n; ++r)
        if (M[r][c] != 0) {
          piv = r;
          break;
        }
      if (piv < 0) {
        singular = true;
        break;
      }
      std::swap(M[c], M[piv]);
      for (int r = 0; r < n; ++r) {
        if (r == c || M[r][c] == 0) continue;
        Rational f = M[r][c] / M[c][c];
        for (int cc = c; cc <= n; ++cc) M[r][cc] -= f * M[c][cc];
      }
    }
    if (!singular) {
      std::vector<Rational> x(n);
      for (int j = 0; j < n; ++j) x[j] = M[j][n] / M[j][j];
      if (satisfies(sys, x)) out.push_back(std::move(x));
    }
    int t = n - 1;
    while (t >= 0 && pick[t] == total - n + t) --t;
    if (t < 0) break;
    ++pick[t];
    for (int s = t + 1; s < n; ++s) pick[s] = pick[s - 1] + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace tin
