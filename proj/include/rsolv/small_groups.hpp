#pragma once

// Constructors for the small groups used by tests, the oracle catalog and the
// DSL. All are permutation groups so elements print in cycle notation.

#include <string>
#include <vector>

#include "rsolv/finite_group.hpp"

namespace rsolv::groups {

inline GroupPtr cyclic(std::size_t n, Limits const& limits = {}) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "cyclic group order must be positive");
  if (n == 1) return group_from_permutations(1, {}, limits);
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>((i + 1) % n);
  return group_from_permutations(n, {p}, limits);
}

// Symmetries of the regular n-gon, order 2n.
inline GroupPtr dihedral(std::size_t n, Limits const& limits = {}) {
  if (n < 3) fail(ErrorKind::InvalidArgument, "dihedral group needs n >= 3");
  Permutation r(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = static_cast<std::uint32_t>((i + 1) % n);
    s[i] = static_cast<std::uint32_t>((n - i) % n);
  }
  return group_from_permutations(n, {r, s}, limits);
}

// Regular representation on 8 points: i = (1 2 3 4)(5 6 7 8),
// j = (1 5 3 7)(2 8 4 6); the central involution is i^2.
inline GroupPtr quaternion(Limits const& limits = {}) {
  auto i = perm::from_cycles(8, {{1, 2, 3, 4}, {5, 6, 7, 8}});
  auto j = perm::from_cycles(8, {{1, 5, 3, 7}, {2, 8, 4, 6}});
  return group_from_permutations(8, {i, j}, limits);
}

inline GroupPtr symmetric(std::size_t n, Limits const& limits = {}) {
  if (n <= 1) return group_from_permutations(1, {}, limits);
  if (n == 2) return group_from_permutations(2, {perm::from_cycles(2, {{1, 2}})}, limits);
  std::vector<std::uint32_t> cyc;
  for (std::uint32_t k = 1; k <= n; ++k) cyc.push_back(k);
  return group_from_permutations(
      n, {perm::from_cycles(n, {{1, 2}}), perm::from_cycles(n, {cyc})}, limits);
}

inline GroupPtr alternating(std::size_t n, Limits const& limits = {}) {
  if (n < 3) return group_from_permutations(std::max<std::size_t>(n, 1), {}, limits);
  std::vector<Permutation> gens;
  for (std::uint32_t k = 3; k <= n; ++k) gens.push_back(perm::from_cycles(n, {{1, 2, k}}));
  return group_from_permutations(n, gens, limits);
}

// Index of the element with the given cycle notation; throws if absent.
inline Index element(FiniteGroup const& G,
                     std::vector<std::vector<std::uint32_t>> const& cycles) {
  auto idx = G.find_permutation(perm::from_cycles(G.degree(), cycles));
  if (!idx) fail(ErrorKind::ElementOutOfRange, "permutation not in group");
  return *idx;
}

}  // namespace rsolv::groups
