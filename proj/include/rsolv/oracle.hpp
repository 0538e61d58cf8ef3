#pragma once

// Brute-force cross-checks, kept independent of the amalgam engine's
// reduction code: a rewriting-based word reducer, presentations of amalgams
// of finite groups, a catalog of small solvable groups and a depth-first
// homomorphism search into it.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsolv/amalgam.hpp"
#include "rsolv/finite_group.hpp"
#include "rsolv/small_groups.hpp"

namespace rsolv::oracle {

// Coset factorisation x = phi(c) * t by scanning C: t is the least-index
// element of the right coset phi(C) x. Abelian factors defer to the
// transversal function carried by the spec.
inline CosetFactor scan_factor(AmalgamSpec const& spec, std::size_t i, Element const& x) {
  GroupRep const& A = spec.factor(i);
  if (!A.is_finite_group() || !spec.amalgam().order()) return spec.factorize(i, x);
  FiniteGroup const& G = *A.finite();
  Index xi = GroupRep::index(x);
  std::optional<std::pair<Index, Element>> best;
  for (auto const& c : spec.amalgam_elements()) {
    Index h = GroupRep::index(spec.embedding(i)(c));
    Index t = G.mul(G.inv(h), xi);
    if (!best || t < best->first) best = {t, c};
  }
  return {best->second, GroupRep::of(best->first)};
}

// Confluent rewriting to a fixpoint:
//   drop identity syllables; merge adjacent syllables of one factor;
//   replace the rightmost non-transversal syllable x = phi(c) t by t and push
//   c into its left neighbour (or into the head).
inline NormalForm oracle_reduce(AmalgamSpec const& spec, AmalgamWord const& w) {
  check_word(spec, w);
  Element head = spec.amalgam().identity();
  std::vector<Syllable> s = w.syllables;
  while (true) {
    auto id = std::find_if(s.begin(), s.end(), [&](Syllable const& x) {
      return spec.factor(x.factor).is_identity(x.element);
    });
    if (id != s.end()) {
      s.erase(id);
      continue;
    }
    bool merged = false;
    for (std::size_t k = 0; k + 1 < s.size(); ++k)
      if (s[k].factor == s[k + 1].factor) {
        s[k].element = spec.factor(s[k].factor).mul(s[k].element, s[k + 1].element);
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        merged = true;
        break;
      }
    if (merged) continue;
    bool pushed = false;
    for (std::size_t k = s.size(); k-- > 0;) {
      auto [c, t] = scan_factor(spec, s[k].factor, s[k].element);
      if (t == s[k].element) continue;
      s[k].element = t;
      if (k == 0) {
        head = spec.amalgam().mul(head, c);
      } else {
        auto& prev = s[k - 1];
        prev.element = spec.factor(prev.factor).mul(prev.element, spec.embedding(prev.factor)(c));
      }
      pushed = true;
      break;
    }
    if (!pushed) break;
  }
  return {head, s};
}

// Letters are +-(g+1) for generator g and its inverse.
using Letter = std::int64_t;
using GenWord = std::vector<Letter>;

struct Presentation {
  std::size_t ngens = 0;
  std::vector<GenWord> relators;
  std::vector<std::pair<std::size_t, Index>> generator_source;  // (factor, element)
  std::size_t cayley_relators = 0;
  std::size_t identification_relators = 0;

  std::optional<std::size_t> generator_of(std::size_t factor, Index x) const {
    for (std::size_t g = 0; g < generator_source.size(); ++g)
      if (generator_source[g] == std::pair{factor, x}) return g;
    return std::nullopt;
  }
};

inline Presentation presentation_of_amalgam(AmalgamSpec const& spec, std::size_t max_gens = 64) {
  if (!spec.all_factors_finite()) {
    fail(ErrorKind::InvalidArgument, "presentations need finite factors");
  }
  Presentation P;
  for (std::size_t i = 0; i < spec.num_factors(); ++i) {
    FiniteGroup const& A = *spec.factor(i).finite();
    for (Index x = 0; x < A.order(); ++x)
      if (x != A.identity()) P.generator_source.emplace_back(i, x);
  }
  P.ngens = P.generator_source.size();
  if (P.ngens > max_gens) {
    fail(ErrorKind::TooManyGenerators, std::to_string(P.ngens) + " generators exceed " +
                                           std::to_string(max_gens));
  }
  auto letter = [&](std::size_t i, Index x) -> GenWord {
    auto g = P.generator_of(i, x);
    return g ? GenWord{static_cast<Letter>(*g) + 1} : GenWord{};
  };
  for (std::size_t i = 0; i < spec.num_factors(); ++i) {
    FiniteGroup const& A = *spec.factor(i).finite();
    for (Index x = 0; x < A.order(); ++x)
      for (Index y = 0; y < A.order(); ++y) {
        if (x == A.identity() || y == A.identity()) continue;
        GenWord r = letter(i, x);
        auto ly = letter(i, y);
        r.insert(r.end(), ly.begin(), ly.end());
        auto lxy = letter(i, A.mul(x, y));
        for (auto l : lxy) r.push_back(-l);
        P.relators.push_back(r);
        ++P.cayley_relators;
      }
  }
  for (auto const& c : spec.amalgam_elements()) {
    if (spec.amalgam().is_identity(c)) continue;
    Index a = GroupRep::index(spec.embedding(0)(c));
    for (std::size_t j = 1; j < spec.num_factors(); ++j) {
      Index b = GroupRep::index(spec.embedding(j)(c));
      GenWord r = letter(0, a);
      for (auto l : letter(j, b)) r.push_back(-l);
      P.relators.push_back(r);
      ++P.identification_relators;
    }
  }
  return P;
}

inline GenWord generator_word(Presentation const& P, AmalgamWord const& w) {
  GenWord out;
  for (auto const& s : w.syllables) {
    auto g = P.generator_of(s.factor, GroupRep::index(s.element));
    if (g) out.push_back(static_cast<Letter>(*g) + 1);
  }
  return out;
}

struct CatalogEntry {
  std::string name;
  GroupPtr group;
};

struct SolvableCatalog {
  std::vector<CatalogEntry> groups;
};

// Cyclic C2..C12, dihedral D3..D6, Q8, A4, S3, S4, then pairwise direct
// products of those, all capped at `max_order`. Tables that coincide with an
// earlier entry are skipped.
inline SolvableCatalog build_catalog(std::size_t max_order = 24) {
  std::vector<CatalogEntry> base;
  for (std::size_t n = 2; n <= 12; ++n) base.push_back({"C" + std::to_string(n), groups::cyclic(n)});
  for (std::size_t n = 3; n <= 6; ++n) base.push_back({"D" + std::to_string(n), groups::dihedral(n)});
  base.push_back({"Q8", groups::quaternion()});
  base.push_back({"A4", groups::alternating(4)});
  base.push_back({"S3", groups::symmetric(3)});
  base.push_back({"S4", groups::symmetric(4)});
  SolvableCatalog cat;
  auto add = [&](CatalogEntry e) {
    if (e.group->order() > max_order) return;
    for (auto const& have : cat.groups)
      if (same_table(*have.group, *e.group)) return;
    cat.groups.push_back(std::move(e));
  };
  for (auto const& e : base) add(e);
  for (std::size_t a = 0; a < base.size(); ++a)
    for (std::size_t b = a; b < base.size(); ++b) {
      if (base[a].group->order() * base[b].group->order() > max_order) continue;
      add({base[a].name + "x" + base[b].name, direct_product({base[a].group, base[b].group}).group});
    }
  return cat;
}

enum class SearchStatus { found, exhausted, budget_exceeded };

inline char const* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::exhausted: return "exhausted";
    case SearchStatus::budget_exceeded: return "budget_exceeded";
  }
  return "unknown";
}

struct HomSearchResult {
  SearchStatus status = SearchStatus::exhausted;
  std::size_t nodes = 0;
  std::size_t catalog_index = 0;
  std::string target_name;
  GroupPtr target;
  std::vector<Index> images;  // per generator
  Index word_image = 0;
};

inline Index evaluate(FiniteGroup const& T, std::vector<Index> const& images, GenWord const& w) {
  Index r = T.identity();
  for (auto l : w) {
    Index g = images[static_cast<std::size_t>(l > 0 ? l : -l) - 1];
    r = T.mul(r, l > 0 ? g : T.inv(g));
  }
  return r;
}

// Post-hoc check of a search result: every relator dies and w survives.
inline bool verify_assignment(Presentation const& P, FiniteGroup const& T,
                              std::vector<Index> const& images, GenWord const& w) {
  if (images.size() != P.ngens) return false;
  for (auto const& r : P.relators)
    if (evaluate(T, images, r) != T.identity()) return false;
  return evaluate(T, images, w) != T.identity();
}

// Depth-first assignment of generator images, target by target in catalog
// order and candidate images in index order. A relator is checked as soon as
// its last generator is assigned; an image's order must divide the order of
// its preimage.
inline HomSearchResult hom_search(Presentation const& P, SolvableCatalog const& catalog,
                                  GenWord const& w, std::vector<std::size_t> const& preimage_orders,
                                  std::size_t budget = 10'000'000) {
  if (w.empty()) fail(ErrorKind::InvalidArgument, "hom_search needs a non-empty word");
  if (preimage_orders.size() != P.ngens) {
    fail(ErrorKind::InvalidArgument, "one preimage order per generator required");
  }
  std::vector<std::vector<std::size_t>> closing(P.ngens);
  for (std::size_t r = 0; r < P.relators.size(); ++r) {
    std::size_t last = 0;
    for (auto l : P.relators[r]) last = std::max(last, static_cast<std::size_t>(l > 0 ? l : -l) - 1);
    if (!P.relators[r].empty()) closing[last].push_back(r);
  }
  HomSearchResult res;
  for (std::size_t ti = 0; ti < catalog.groups.size(); ++ti) {
    FiniteGroup const& T = *catalog.groups[ti].group;
    std::vector<std::size_t> orders(T.order());
    for (Index x = 0; x < T.order(); ++x) orders[x] = T.element_order(x);
    std::vector<Index> images(P.ngens, 0);
    bool found = false, out_of_budget = false;
    auto dfs = [&](auto&& self, std::size_t g) -> void {
      if (g == P.ngens) {
        if (evaluate(T, images, w) != T.identity()) found = true;
        return;
      }
      for (Index y = 0; y < T.order() && !found && !out_of_budget; ++y) {
        if (++res.nodes > budget) {
          out_of_budget = true;
          return;
        }
        if (preimage_orders[g] % orders[y] != 0) continue;
        images[g] = y;
        bool ok = true;
        for (auto r : closing[g])
          if (evaluate(T, images, P.relators[r]) != T.identity()) {
            ok = false;
            break;
          }
        if (ok) self(self, g + 1);
      }
    };
    dfs(dfs, 0);
    if (found) {
      res.status = SearchStatus::found;
      res.catalog_index = ti;
      res.target_name = catalog.groups[ti].name;
      res.target = catalog.groups[ti].group;
      res.images = images;
      res.word_image = evaluate(T, images, w);
      return res;
    }
    if (out_of_budget) {
      res.status = SearchStatus::budget_exceeded;
      return res;
    }
  }
  res.status = SearchStatus::exhausted;
  return res;
}

// Orders of the factor elements behind each generator.
inline std::vector<std::size_t> generator_orders(AmalgamSpec const& spec, Presentation const& P) {
  std::vector<std::size_t> out;
  for (auto const& [i, x] : P.generator_source) out.push_back(spec.factor(i).finite()->element_order(x));
  return out;
}

struct InjectivityReport {
  bool injective = true;
  std::optional<std::pair<Index, Index>> counterexample;  // (later, earlier)
};

inline InjectivityReport exhaustive_injectivity(FiniteHom const& h, Subgroup const& domain) {
  std::vector<std::optional<Index>> first(h.target()->order());
  for (auto x : domain.elements()) {
    Index y = h(x);
    if (first[y]) return {false, std::pair{x, *first[y]}};
    first[y] = x;
  }
  return {};
}

}  // namespace rsolv::oracle
