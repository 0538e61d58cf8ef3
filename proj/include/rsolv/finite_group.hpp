#pragma once

// Finite groups given by full multiplication tables.
//
// Elements are canonical indices 0..order-1. Every constructor in this header
// places the identity at index 0. Permutation data and labels are display
// metadata only; arithmetic never consults them.
//
// Products follow the right-action convention used for permutations:
// (x*y) acts as "first x, then y", and the commutator is [x,y] = x^-1 y^-1 x y.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rsolv/error.hpp"

namespace rsolv {

using Index = std::uint32_t;
using Permutation = std::vector<std::uint32_t>;  // 0-based images

struct Limits {
  std::size_t max_order = 5000;          // cap for any constructed group
  std::size_t lattice_max_order = 256;   // cap for full subgroup enumeration
  bool unsafe_skip_associativity = false;
};

namespace perm {

inline Permutation identity(std::size_t degree) {
  Permutation p(degree);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

// first p, then q
inline Permutation compose(Permutation const& p, Permutation const& q) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[p[i]];
  return r;
}

inline bool is_bijection(Permutation const& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

// Cycle notation with 1-based points; the identity prints as "()".
inline std::string to_cycles(Permutation const& p) {
  std::string out;
  std::vector<bool> done(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (done[i] || p[i] == i) continue;
    out += '(';
    std::size_t j = i;
    bool first = true;
    while (!done[j]) {
      done[j] = true;
      if (!first) out += ' ';
      out += std::to_string(j + 1);
      first = false;
      j = p[j];
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

// Builds a permutation from cycles of 1-based points.
inline Permutation from_cycles(std::size_t degree,
                               std::vector<std::vector<std::uint32_t>> const& cycles) {
  Permutation p = identity(degree);
  for (auto const& cyc : cycles) {
    // each cycle acts after the ones to its left
    Permutation c = identity(degree);
    std::vector<bool> used(degree, false);
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      auto a = cyc[k];
      if (a < 1 || a > degree || used[a - 1]) {
        fail(ErrorKind::NotAPermutation,
             "cycle point " + std::to_string(a) + " invalid for degree " +
                 std::to_string(degree));
      }
      used[a - 1] = true;
      c[a - 1] = cyc[(k + 1) % cyc.size()] - 1;
    }
    p = compose(p, c);
  }
  return p;
}

}  // namespace perm

class FiniteGroup;
using GroupPtr = std::shared_ptr<FiniteGroup const>;

class FiniteGroup {
 public:
  // Validates the table: closure, two-sided identity, inverses, generation by
  // `generators`, and associativity. Associativity uses Light's test over the
  // generating set, which is exhaustive: the set of elements s with
  // (xs)y = x(sy) for all x, y is closed under products, so checking the
  // generators covers every triple.
  static GroupPtr from_table(std::size_t order, std::vector<Index> table,
                             std::vector<Index> generators,
                             std::vector<std::string> labels = {},
                             Limits const& limits = {}) {
    if (order == 0) fail(ErrorKind::InvalidArgument, "group order must be positive");
    if (order > limits.max_order) {
      fail(ErrorKind::ClosureCapExceeded,
           "order " + std::to_string(order) + " exceeds cap " +
               std::to_string(limits.max_order));
    }
    if (table.size() != order * order) {
      fail(ErrorKind::InvalidArgument, "table size does not match order");
    }
    auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
    g->order_ = order;
    g->table_ = std::move(table);
    g->labels_ = std::move(labels);
    if (!g->labels_.empty() && g->labels_.size() != order) {
      fail(ErrorKind::InvalidArgument, "label count does not match order");
    }
    for (auto v : g->table_) {
      if (v >= order) fail(ErrorKind::ElementOutOfRange, "table entry out of range");
    }
    g->check_latin_and_identity();
    for (auto x : generators) {
      if (x >= order) fail(ErrorKind::ElementOutOfRange, "generator out of range");
    }
    g->generators_ = std::move(generators);
    g->check_generation();
    if (!limits.unsafe_skip_associativity) g->check_associativity_light();
    return g;
  }

  std::size_t order() const noexcept { return order_; }
  Index identity() const noexcept { return identity_; }
  Index mul(Index x, Index y) const noexcept { return table_[x * order_ + y]; }
  Index inv(Index x) const noexcept { return inverses_[x]; }
  std::span<Index const> generators() const noexcept { return generators_; }
  std::span<Index const> table() const noexcept { return table_; }
  std::span<Index const> inverses() const noexcept { return inverses_; }
  bool in_range(Index x) const noexcept { return x < order_; }

  Index conj(Index x, Index g) const noexcept { return mul(mul(inv(g), x), g); }
  Index comm(Index x, Index y) const noexcept {
    return mul(mul(inv(x), inv(y)), mul(x, y));
  }

  Index power(Index x, std::int64_t k) const noexcept {
    if (k < 0) {
      x = inv(x);
      k = -k;
    }
    Index r = identity_, b = x;
    while (k > 0) {
      if (k & 1) r = mul(r, b);
      b = mul(b, b);
      k >>= 1;
    }
    return r;
  }

  std::size_t element_order(Index x) const noexcept {
    std::size_t k = 1;
    for (Index y = x; y != identity_; y = mul(y, x)) ++k;
    return k;
  }

  bool is_abelian() const noexcept {
    for (auto a : generators_)
      for (auto b : generators_)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  std::string label(Index x) const {
    if (!labels_.empty()) return labels_[x];
    if (!perms_.empty()) return perm::to_cycles(perms_[x]);
    return "#" + std::to_string(x);
  }

  // Permutation metadata, present only for permutation-built groups.
  std::size_t degree() const noexcept { return degree_; }
  bool has_permutations() const noexcept { return !perms_.empty(); }
  Permutation const& permutation(Index x) const { return perms_.at(x); }
  std::optional<Index> find_permutation(Permutation const& p) const {
    auto it = perm_index_.find(p);
    if (it == perm_index_.end()) return std::nullopt;
    return it->second;
  }

  // O(order^3) check, used by tests to cross-check Light's test.
  bool verify_associativity_exhaustive() const noexcept {
    for (Index x = 0; x < order_; ++x)
      for (Index y = 0; y < order_; ++y) {
        Index xy = mul(x, y);
        for (Index z = 0; z < order_; ++z)
          if (mul(xy, z) != mul(x, mul(y, z))) return false;
      }
    return true;
  }

  friend bool same_table(FiniteGroup const& a, FiniteGroup const& b) noexcept {
    return a.order_ == b.order_ && a.table_ == b.table_;
  }

  friend GroupPtr group_from_permutations(std::size_t degree,
                                          std::vector<Permutation> const& generators,
                                          Limits const& limits);

 private:
  FiniteGroup() = default;

  void check_latin_and_identity() {
    std::optional<Index> e;
    for (Index x = 0; x < order_ && !e; ++x) {
      bool ok = true;
      for (Index y = 0; y < order_ && ok; ++y)
        ok = mul(x, y) == y && mul(y, x) == y;
      if (ok) e = x;
    }
    if (!e) fail(ErrorKind::InvalidArgument, "table has no two-sided identity");
    identity_ = *e;
    inverses_.assign(order_, 0);
    for (Index x = 0; x < order_; ++x) {
      std::vector<bool> row(order_, false), col(order_, false);
      bool found = false;
      for (Index y = 0; y < order_; ++y) {
        Index r = mul(x, y), c = mul(y, x);
        if (row[r] || col[c]) {
          fail(ErrorKind::InvalidArgument, "table is not a Latin square");
        }
        row[r] = col[c] = true;
        if (r == identity_) {
          if (mul(y, x) != identity_) {
            fail(ErrorKind::InvalidArgument, "left and right inverses differ");
          }
          inverses_[x] = y;
          found = true;
        }
      }
      if (!found) fail(ErrorKind::InvalidArgument, "element without inverse");
    }
  }

  void check_generation() const {
    std::vector<bool> seen(order_, false);
    std::vector<Index> queue{identity_};
    seen[identity_] = true;
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (auto g : generators_) {
        Index y = mul(queue[i], g);
        if (!seen[y]) {
          seen[y] = true;
          queue.push_back(y);
        }
      }
    if (queue.size() != order_) {
      fail(ErrorKind::InvalidArgument, "generators do not generate the table");
    }
  }

  void check_associativity_light() const {
    for (auto s : generators_)
      for (Index x = 0; x < order_; ++x) {
        Index xs = mul(x, s);
        for (Index y = 0; y < order_; ++y)
          if (mul(xs, y) != mul(x, mul(s, y))) {
            fail(ErrorKind::InvalidArgument, "table is not associative");
          }
      }
  }

  std::size_t order_ = 0;
  Index identity_ = 0;
  std::vector<Index> table_;
  std::vector<Index> inverses_;
  std::vector<Index> generators_;
  std::vector<std::string> labels_;
  std::size_t degree_ = 0;
  std::vector<Permutation> perms_;
  std::map<Permutation, Index> perm_index_;
};

// Orbit closure of the generators acting by right multiplication. Element 0
// is the identity; the rest follow breadth-first discovery order.
inline GroupPtr group_from_permutations(std::size_t degree,
                                        std::vector<Permutation> const& generators,
                                        Limits const& limits = {}) {
  if (degree == 0) fail(ErrorKind::NotAPermutation, "degree must be positive");
  for (auto const& p : generators) {
    if (p.size() != degree || !perm::is_bijection(p)) {
      fail(ErrorKind::NotAPermutation, "generator is not a bijection on 1.." +
                                           std::to_string(degree));
    }
  }
  std::vector<Permutation> elems{perm::identity(degree)};
  std::map<Permutation, Index> index{{elems[0], 0}};
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (auto const& g : generators) {
      auto p = perm::compose(elems[i], g);
      if (index.emplace(p, static_cast<Index>(elems.size())).second) {
        elems.push_back(std::move(p));
        if (elems.size() > limits.max_order) {
          fail(ErrorKind::ClosureCapExceeded,
               "permutation closure exceeds cap " + std::to_string(limits.max_order));
        }
      }
    }
  }
  std::size_t n = elems.size();
  std::vector<Index> table(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      table[x * n + y] = index.at(perm::compose(elems[x], elems[y]));
  std::vector<Index> gens;
  for (auto const& g : generators) gens.push_back(index.at(g));
  auto base = FiniteGroup::from_table(n, std::move(table), std::move(gens), {}, limits);
  auto g = std::make_shared<FiniteGroup>(*base);
  g->degree_ = degree;
  g->perms_ = std::move(elems);
  g->perm_index_ = std::move(index);
  return g;
}

// A subgroup is stored as its sorted element list plus a membership mask and
// an irredundant generating list (each generator lies outside the closure of
// the previous ones).
class Subgroup {
 public:
  Subgroup() = default;

  std::size_t size() const noexcept { return elements_.size(); }
  bool contains(Index x) const noexcept { return x < mask_.size() && mask_[x]; }
  std::span<Index const> elements() const noexcept { return elements_; }
  std::span<Index const> generators() const noexcept { return generators_; }
  std::vector<bool> const& mask() const noexcept { return mask_; }

  bool is_subset_of(Subgroup const& other) const noexcept {
    return std::all_of(elements_.begin(), elements_.end(),
                       [&](Index x) { return other.contains(x); });
  }

  friend bool operator==(Subgroup const& a, Subgroup const& b) noexcept {
    return a.elements_ == b.elements_;
  }

  friend Subgroup subgroup_closure(FiniteGroup const& G, std::span<Index const> seeds);

 private:
  std::vector<Index> elements_;
  std::vector<bool> mask_;
  std::vector<Index> generators_;
};

namespace detail {

inline void check_range(FiniteGroup const& G, std::span<Index const> xs) {
  for (auto x : xs)
    if (!G.in_range(x)) {
      fail(ErrorKind::ElementOutOfRange,
           "element " + std::to_string(x) + " not in group of order " +
               std::to_string(G.order()));
    }
}

}  // namespace detail

inline Subgroup subgroup_closure(FiniteGroup const& G, std::span<Index const> seeds) {
  detail::check_range(G, seeds);
  Subgroup H;
  H.mask_.assign(G.order(), false);
  H.mask_[G.identity()] = true;
  H.elements_ = {G.identity()};
  for (auto s : seeds) {
    if (H.mask_[s]) continue;
    H.generators_.push_back(s);
    // re-close: every current element times every generator
    for (std::size_t i = 0; i < H.elements_.size(); ++i)
      for (auto g : H.generators_) {
        Index y = G.mul(H.elements_[i], g);
        if (!H.mask_[y]) {
          H.mask_[y] = true;
          H.elements_.push_back(y);
        }
      }
  }
  std::sort(H.elements_.begin(), H.elements_.end());
  return H;
}

inline Subgroup subgroup_closure(FiniteGroup const& G, std::initializer_list<Index> seeds) {
  return subgroup_closure(G, std::span<Index const>(seeds.begin(), seeds.size()));
}

inline Subgroup whole_group(FiniteGroup const& G) {
  return subgroup_closure(G, G.generators());
}

inline Subgroup trivial_subgroup(FiniteGroup const& G) {
  return subgroup_closure(G, std::span<Index const>{});
}

// Smallest subgroup containing `seeds` normalised by every element of
// `ambient_generators`.
inline Subgroup normal_closure_under(FiniteGroup const& G,
                                     std::span<Index const> ambient_generators,
                                     std::span<Index const> seeds) {
  std::vector<Index> gens(seeds.begin(), seeds.end());
  Subgroup H = subgroup_closure(G, gens);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Index> hg(H.generators().begin(), H.generators().end());
    for (auto x : hg) {
      for (auto g : ambient_generators) {
        Index y = G.conj(x, g);
        if (!H.contains(y)) {
          gens.push_back(y);
          H = subgroup_closure(G, gens);
          grew = true;
        }
      }
    }
  }
  return H;
}

inline Subgroup normal_closure(FiniteGroup const& G, std::span<Index const> seeds) {
  return normal_closure_under(G, G.generators(), seeds);
}

inline Subgroup normal_closure(FiniteGroup const& G, std::initializer_list<Index> seeds) {
  return normal_closure(G, std::span<Index const>(seeds.begin(), seeds.size()));
}

inline bool is_normal(FiniteGroup const& G, Subgroup const& N) {
  for (auto x : N.generators())
    for (auto g : G.generators())
      if (!N.contains(G.conj(x, g))) return false;
  return true;
}

inline Subgroup join(FiniteGroup const& G, Subgroup const& H, Subgroup const& K) {
  std::vector<Index> gens(H.generators().begin(), H.generators().end());
  gens.insert(gens.end(), K.generators().begin(), K.generators().end());
  return subgroup_closure(G, gens);
}

inline Subgroup intersection(FiniteGroup const& G, Subgroup const& H, Subgroup const& K) {
  std::vector<Index> common;
  for (auto x : H.elements())
    if (K.contains(x)) common.push_back(x);
  return subgroup_closure(G, common);
}

// [H, K]: normal closure in <H, K> of the commutators of generator pairs.
inline Subgroup commutator_subgroup(FiniteGroup const& G, Subgroup const& H,
                                    Subgroup const& K) {
  std::vector<Index> comms;
  for (auto h : H.generators())
    for (auto k : K.generators()) comms.push_back(G.comm(h, k));
  std::vector<Index> ambient(H.generators().begin(), H.generators().end());
  ambient.insert(ambient.end(), K.generators().begin(), K.generators().end());
  return normal_closure_under(G, ambient, comms);
}

enum class SeriesKind { derived, lower_central };

// terms[0] is the whole group. Derived terms are 1-indexed in the
// mathematical sense: terms[k] holds delta_{k+1} G.
struct SeriesChain {
  SeriesKind kind;
  std::vector<Subgroup> terms;

  std::vector<std::size_t> orders() const {
    std::vector<std::size_t> out;
    for (auto const& t : terms) out.push_back(t.size());
    return out;
  }
  Subgroup const& last() const { return terms.back(); }
};

inline SeriesChain series(FiniteGroup const& G, SeriesKind kind) {
  SeriesChain chain{kind, {whole_group(G)}};
  Subgroup const whole = chain.terms.front();
  while (true) {
    Subgroup const& cur = chain.terms.back();
    Subgroup next = kind == SeriesKind::derived ? commutator_subgroup(G, cur, cur)
                                                : commutator_subgroup(G, whole, cur);
    if (next.size() == cur.size()) break;
    chain.terms.push_back(std::move(next));
  }
  return chain;
}

// delta_k G with delta_1 G = G. Past the end of the chain the stable term
// is returned.
inline Subgroup derived_term(FiniteGroup const& G, std::size_t k) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "derived series is 1-indexed");
  auto chain = series(G, SeriesKind::derived);
  return chain.terms[std::min(k, chain.terms.size()) - 1];
}

inline bool is_solvable(FiniteGroup const& G) {
  return series(G, SeriesKind::derived).last().size() == 1;
}

inline bool is_nilpotent(FiniteGroup const& G) {
  return series(G, SeriesKind::lower_central).last().size() == 1;
}

// Number of strict steps down to the trivial group (0 for the trivial group).
inline std::optional<std::size_t> derived_length(FiniteGroup const& G) {
  auto chain = series(G, SeriesKind::derived);
  if (chain.last().size() != 1) return std::nullopt;
  return chain.terms.size() - 1;
}

inline Subgroup center(FiniteGroup const& G) {
  std::vector<Index> z;
  for (Index x = 0; x < G.order(); ++x) {
    bool central = true;
    for (auto g : G.generators())
      if (G.mul(x, g) != G.mul(g, x)) {
        central = false;
        break;
      }
    if (central) z.push_back(x);
  }
  return subgroup_closure(G, z);
}

// Every subgroup, ordered by size then element list.
inline std::vector<Subgroup> all_subgroups(FiniteGroup const& G, Limits const& limits = {}) {
  if (G.order() > limits.lattice_max_order) {
    fail(ErrorKind::ClosureCapExceeded,
         "subgroup enumeration needs order <= " +
             std::to_string(limits.lattice_max_order) + ", got " +
             std::to_string(G.order()));
  }
  std::map<std::vector<Index>, Subgroup> found;
  auto key = [](Subgroup const& H) {
    return std::vector<Index>(H.elements().begin(), H.elements().end());
  };
  std::vector<Subgroup> cyclics;
  for (Index x = 0; x < G.order(); ++x) {
    Subgroup c = subgroup_closure(G, {x});
    if (found.emplace(key(c), c).second) cyclics.push_back(c);
  }
  std::vector<Subgroup> frontier = cyclics;
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (auto const& H : frontier)
      for (auto const& Z : cyclics) {
        if (Z.is_subset_of(H)) continue;
        Subgroup J = join(G, H, Z);
        if (found.emplace(key(J), J).second) next.push_back(J);
      }
    frontier = std::move(next);
  }
  std::vector<Subgroup> out;
  for (auto& [k, H] : found) out.push_back(H);
  std::stable_sort(out.begin(), out.end(), [](Subgroup const& a, Subgroup const& b) {
    return a.size() < b.size();
  });
  return out;
}

inline std::vector<Subgroup> maximal_subgroups(FiniteGroup const& G, Limits const& limits = {}) {
  auto subs = all_subgroups(G, limits);
  std::vector<Subgroup> proper;
  for (auto& H : subs)
    if (H.size() < G.order()) proper.push_back(H);
  std::vector<Subgroup> out;
  for (std::size_t i = 0; i < proper.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < proper.size() && maximal; ++j) {
      if (proper[j].size() > proper[i].size() &&
          proper[j].size() % proper[i].size() == 0 && proper[i].is_subset_of(proper[j])) {
        maximal = false;
      }
    }
    if (maximal) out.push_back(proper[i]);
  }
  return out;
}

inline Subgroup frattini(FiniteGroup const& G, Limits const& limits = {}) {
  auto maxes = maximal_subgroups(G, limits);
  Subgroup phi = whole_group(G);
  for (auto const& M : maxes) phi = intersection(G, phi, M);
  return phi;
}

// A multiplicative map between finite groups given by its full image table.
class FiniteHom {
 public:
  FiniteHom(GroupPtr source, GroupPtr target, std::vector<Index> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_->order()) {
      fail(ErrorKind::NotAHomomorphism, "image table size does not match source order");
    }
    detail::check_range(*target_, images_);
    FiniteGroup const& S = *source_;
    FiniteGroup const& T = *target_;
    for (Index x = 0; x < S.order(); ++x)
      for (Index y = 0; y < S.order(); ++y)
        if (images_[S.mul(x, y)] != T.mul(images_[x], images_[y])) {
          fail(ErrorKind::NotAHomomorphism,
               "h(" + S.label(x) + " * " + S.label(y) + ") != h(x) * h(y)");
        }
  }

  // Extends generator images along the breadth-first closure, then verifies.
  static FiniteHom from_generator_images(GroupPtr source, GroupPtr target,
                                         std::vector<Index> const& gen_images) {
    auto const& S = *source;
    if (gen_images.size() != S.generators().size()) {
      fail(ErrorKind::NotAHomomorphism, "one image per generator required");
    }
    detail::check_range(*target, gen_images);
    std::vector<Index> images(S.order(), 0);
    std::vector<bool> seen(S.order(), false);
    std::vector<Index> queue{S.identity()};
    seen[S.identity()] = true;
    images[S.identity()] = target->identity();
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (std::size_t k = 0; k < gen_images.size(); ++k) {
        Index y = S.mul(queue[i], S.generators()[k]);
        if (!seen[y]) {
          seen[y] = true;
          images[y] = target->mul(images[queue[i]], gen_images[k]);
          queue.push_back(y);
        }
      }
    return FiniteHom(std::move(source), std::move(target), std::move(images));
  }

  Index operator()(Index x) const { return images_.at(x); }
  GroupPtr const& source() const noexcept { return source_; }
  GroupPtr const& target() const noexcept { return target_; }
  std::span<Index const> images() const noexcept { return images_; }

  Subgroup kernel() const {
    std::vector<Index> k;
    for (Index x = 0; x < images_.size(); ++x)
      if (images_[x] == target_->identity()) k.push_back(x);
    return subgroup_closure(*source_, k);
  }

  Subgroup image() const { return subgroup_closure(*target_, images_); }

  bool is_injective() const { return kernel().size() == 1; }

  FiniteHom then(FiniteHom const& next) const {
    std::vector<Index> composed(images_.size());
    for (std::size_t x = 0; x < images_.size(); ++x) composed[x] = next(images_[x]);
    return FiniteHom(source_, next.target_, std::move(composed));
  }

 private:
  GroupPtr source_;
  GroupPtr target_;
  std::vector<Index> images_;
};

struct Quotient {
  GroupPtr group;
  FiniteHom projection;
};

// Cosets are numbered by their smallest element, so the identity coset is 0.
inline Quotient quotient_group(GroupPtr const& Gp, Subgroup const& N, Limits const& limits = {}) {
  FiniteGroup const& G = *Gp;
  if (!N.contains(G.identity()) || !is_normal(G, N)) {
    fail(ErrorKind::NotNormal, "subgroup of order " + std::to_string(N.size()) +
                                   " is not normal");
  }
  constexpr Index unset = static_cast<Index>(-1);
  std::vector<Index> coset(G.order(), unset);
  std::vector<Index> reps;
  for (Index x = 0; x < G.order(); ++x) {
    if (coset[x] != unset) continue;
    auto id = static_cast<Index>(reps.size());
    reps.push_back(x);
    for (auto n : N.elements()) coset[G.mul(x, n)] = id;
  }
  std::size_t q = reps.size();
  std::vector<Index> table(q * q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) table[a * q + b] = coset[G.mul(reps[a], reps[b])];
  std::vector<Index> gens;
  for (auto g : G.generators())
    if (coset[g] != 0) gens.push_back(coset[g]);
  std::vector<std::string> labels;
  for (auto r : reps) labels.push_back("[" + G.label(r) + "]");
  auto Q = FiniteGroup::from_table(q, std::move(table), std::move(gens), std::move(labels),
                                   limits);
  return {Q, FiniteHom(Gp, Q, std::move(coset))};
}

namespace detail {

inline std::vector<std::size_t> prime_factors(std::size_t n) {
  std::vector<std::size_t> ps;
  for (std::size_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

}  // namespace detail

// Invariant factors d_1 | d_2 | ... (all > 1) of a finite abelian group, read
// off from the counts of elements whose order divides p^k.
inline std::vector<std::size_t> abelian_group_invariants(FiniteGroup const& A) {
  if (!A.is_abelian()) fail(ErrorKind::InvalidArgument, "group is not abelian");
  std::vector<std::size_t> orders(A.order());
  for (Index x = 0; x < A.order(); ++x) orders[x] = A.element_order(x);
  // elementary divisors per prime, largest first
  std::vector<std::vector<std::size_t>> primary;
  for (auto p : detail::prime_factors(A.order())) {
    std::vector<std::size_t> exps;  // exps[k] = log_p #{x : x^{p^k} = 1}
    std::size_t pk = 1;
    std::size_t prev_count = 0;
    while (true) {
      std::size_t count = 0;
      for (auto o : orders)
        if (pk % o == 0) ++count;
      if (count == prev_count) break;
      std::size_t e = 0;
      for (std::size_t c = count; c > 1; c /= p) ++e;
      exps.push_back(e);
      prev_count = count;
      pk *= p;
    }
    // number of cyclic factors of order >= p^k is exps[k] - exps[k-1]
    std::vector<std::size_t> at_least;
    for (std::size_t k = 1; k < exps.size(); ++k) at_least.push_back(exps[k] - exps[k - 1]);
    std::vector<std::size_t> divisors;
    for (std::size_t k = 0; k < at_least.size(); ++k) {
      std::size_t exactly = at_least[k] - (k + 1 < at_least.size() ? at_least[k + 1] : 0);
      std::size_t q = 1;
      for (std::size_t j = 0; j <= k; ++j) q *= p;
      for (std::size_t j = 0; j < exactly; ++j) divisors.push_back(q);
    }
    std::sort(divisors.rbegin(), divisors.rend());
    primary.push_back(divisors);
  }
  std::size_t len = 0;
  for (auto const& d : primary) len = std::max(len, d.size());
  std::vector<std::size_t> inv(len, 1);
  for (auto const& d : primary)
    for (std::size_t i = 0; i < d.size(); ++i) inv[len - 1 - i] *= d[i];
  return inv;
}

inline std::vector<std::size_t> abelian_invariants(GroupPtr const& G) {
  auto chain = series(*G, SeriesKind::derived);
  Subgroup derived = chain.terms.size() > 1 ? chain.terms[1] : chain.terms[0];
  if (chain.terms.size() == 1) {
    // G is perfect or trivial; G/[G,G] is trivial unless G is abelian
    if (G->is_abelian()) return abelian_group_invariants(*G);
    return {};
  }
  auto Q = quotient_group(G, derived);
  return abelian_group_invariants(*Q.group);
}

struct DirectProduct {
  GroupPtr group;
  std::vector<FiniteHom> injections;
  std::vector<FiniteHom> projections;

  // product index of a tuple of factor elements
  Index pack(std::span<Index const> parts) const {
    Index idx = 0;
    for (std::size_t i = 0; i < parts.size(); ++i)
      idx = idx * static_cast<Index>(projections[i].target()->order()) + parts[i];
    return idx;
  }
};

// Elements are tuples in mixed radix with the first factor most significant.
// Factor identities must sit at index 0 (true for every group built here).
inline DirectProduct direct_product(std::vector<GroupPtr> const& factors,
                                    Limits const& limits = {}) {
  std::size_t n = 1;
  for (auto const& f : factors) {
    if (f->identity() != 0) fail(ErrorKind::InvalidArgument, "factor identity must be 0");
    n *= f->order();
    if (n > limits.max_order) {
      fail(ErrorKind::ClosureCapExceeded,
           "direct product order exceeds cap " + std::to_string(limits.max_order));
    }
  }
  std::size_t k = factors.size();
  std::vector<std::vector<Index>> digits(n, std::vector<Index>(k));
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t r = x;
    for (std::size_t i = k; i-- > 0;) {
      digits[x][i] = static_cast<Index>(r % factors[i]->order());
      r /= factors[i]->order();
    }
  }
  auto pack = [&](std::vector<Index> const& d) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i) idx = idx * factors[i]->order() + d[i];
    return static_cast<Index>(idx);
  };
  std::vector<Index> table(n * n);
  std::vector<Index> d(k);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t i = 0; i < k; ++i) d[i] = factors[i]->mul(digits[x][i], digits[y][i]);
      table[x * n + y] = pack(d);
    }
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < n; ++x) {
    std::string s = "<";
    for (std::size_t i = 0; i < k; ++i) {
      if (i) s += ",";
      s += factors[i]->label(digits[x][i]);
    }
    labels.push_back(s + ">");
  }
  std::vector<Index> gens;
  for (std::size_t i = 0; i < k; ++i)
    for (auto g : factors[i]->generators()) {
      std::vector<Index> e(k, 0);
      e[i] = g;
      gens.push_back(pack(e));
    }
  auto P = FiniteGroup::from_table(n, std::move(table), std::move(gens), std::move(labels),
                                   limits);
  DirectProduct out{P, {}, {}};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Index> inj(factors[i]->order());
    for (Index x = 0; x < factors[i]->order(); ++x) {
      std::vector<Index> e(k, 0);
      e[i] = x;
      inj[x] = pack(e);
    }
    out.injections.emplace_back(factors[i], P, std::move(inj));
    std::vector<Index> proj(n);
    for (std::size_t x = 0; x < n; ++x) proj[x] = digits[x][i];
    out.projections.emplace_back(P, factors[i], std::move(proj));
  }
  return out;
}

}  // namespace rsolv
