#pragma once

// Brute-force oracles for the tests. They only read the multiplication table
// and never call the library's closure, series or lattice routines.

#include <algorithm>
#include <set>
#include <vector>

#include "rsolv/finite_group.hpp"
#include "rsolv/integer_lattice.hpp"

namespace brute {

using rsolv::FiniteGroup;
using rsolv::Index;

// Fixpoint of "add every product of two members".
inline std::set<Index> closure(FiniteGroup const& G, std::set<Index> s) {
  s.insert(G.identity());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Index> cur(s.begin(), s.end());
    for (auto a : cur)
      for (auto b : cur)
        if (s.insert(G.mul(a, b)).second) grew = true;
  }
  return s;
}

// Conjugate by every element and close, until stable.
inline std::set<Index> normal_closure(FiniteGroup const& G, std::set<Index> s) {
  s = closure(G, s);
  while (true) {
    std::set<Index> t = s;
    for (auto x : s)
      for (Index g = 0; g < G.order(); ++g) t.insert(G.mul(G.mul(G.inv(g), x), g));
    t = closure(G, t);
    if (t == s) return s;
    s = t;
  }
}

inline std::set<Index> all(FiniteGroup const& G) {
  std::set<Index> s;
  for (Index x = 0; x < G.order(); ++x) s.insert(x);
  return s;
}

// Every commutator [h,k] over all pairs, then closure.
inline std::set<Index> commutator(FiniteGroup const& G, std::set<Index> const& H,
                                  std::set<Index> const& K) {
  std::set<Index> c;
  for (auto h : H)
    for (auto k : K) c.insert(G.mul(G.mul(G.inv(h), G.inv(k)), G.mul(h, k)));
  return closure(G, c);
}

inline std::vector<std::size_t> derived_orders(FiniteGroup const& G) {
  std::vector<std::size_t> out;
  auto cur = all(G);
  out.push_back(cur.size());
  while (true) {
    auto next = commutator(G, cur, cur);
    if (next.size() == cur.size()) return out;
    out.push_back(next.size());
    cur = next;
  }
}

inline std::set<Index> center(FiniteGroup const& G) {
  std::set<Index> z;
  for (Index x = 0; x < G.order(); ++x) {
    bool ok = true;
    for (Index y = 0; y < G.order() && ok; ++y) ok = G.mul(x, y) == G.mul(y, x);
    if (ok) z.insert(x);
  }
  return z;
}

// Subgroups by closing every subset of size <= 3 (enough for the small
// groups under test, all of which are 3-generated).
inline std::vector<std::set<Index>> subgroups_3gen(FiniteGroup const& G) {
  std::set<std::set<Index>> found;
  Index n = static_cast<Index>(G.order());
  for (Index a = 0; a < n; ++a)
    for (Index b = a; b < n; ++b)
      for (Index c = b; c < n; ++c) found.insert(closure(G, {a, b, c}));
  return {found.begin(), found.end()};
}

inline std::set<Index> frattini(FiniteGroup const& G) {
  auto subs = subgroups_3gen(G);
  std::set<Index> phi = all(G);
  for (auto const& M : subs) {
    if (M.size() == G.order()) continue;
    bool maximal = true;
    for (auto const& T : subs)
      if (T.size() > M.size() && T.size() < G.order() &&
          std::includes(T.begin(), T.end(), M.begin(), M.end()))
        maximal = false;
    if (!maximal) continue;
    std::set<Index> keep;
    for (auto x : phi)
      if (M.count(x)) keep.insert(x);
    phi = keep;
  }
  return phi;
}

// Laplace expansion along the first row.
inline rsolv::BigInt det(std::vector<std::vector<rsolv::BigInt>> const& m) {
  std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  rsolv::BigInt d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    std::vector<std::vector<rsolv::BigInt>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<rsolv::BigInt> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    rsolv::BigInt term = m[0][j] * det(minor);
    d += (j % 2 == 0) ? term : rsolv::BigInt(-term);
  }
  return d;
}

inline rsolv::BigInt det(rsolv::IntMatrix const& M) {
  std::vector<std::vector<rsolv::BigInt>> m(M.rows(), std::vector<rsolv::BigInt>(M.cols()));
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) m[i][j] = M(i, j);
  return det(m);
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

inline rsolv::BigInt gcd(rsolv::BigInt a, rsolv::BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    rsolv::BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Determinantal divisors D_k = gcd of all k x k minors; invariant factors are
// D_k / D_{k-1} for k up to the rank.
inline std::vector<rsolv::BigInt> invariant_factors_by_minors(rsolv::IntMatrix const& M) {
  std::vector<rsolv::BigInt> out;
  rsolv::BigInt prev = 1;
  for (std::size_t k = 1; k <= std::min(M.rows(), M.cols()); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(M.rows(), k, 0, cur, rs);
    subsets(M.cols(), k, 0, cur, cs);
    rsolv::BigInt g = 0;
    for (auto const& r : rs)
      for (auto const& c : cs) {
        std::vector<std::vector<rsolv::BigInt>> m(k, std::vector<rsolv::BigInt>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m[i][j] = M(r[i], c[j]);
        g = gcd(g, det(m));
      }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

}  // namespace brute
