#pragma once

// Generalized free products {*A_i ; C}: validation, right-coset transversals,
// normal forms and the word problem, homomorphisms induced from factor maps,
// and the two finite quotient constructions used by the theorem engines.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsolv/finite_group.hpp"
#include "rsolv/group_rep.hpp"
#include "rsolv/integer_lattice.hpp"

namespace rsolv {

struct Syllable {
  std::size_t factor = 0;
  Element element;

  friend bool operator==(Syllable const&, Syllable const&) = default;
  friend auto operator<=>(Syllable const&, Syllable const&) = default;
};

struct AmalgamWord {
  std::vector<Syllable> syllables;

  friend bool operator==(AmalgamWord const&, AmalgamWord const&) = default;
};

// c * t_1 * ... * t_n with c in C and t_i nonidentity transversal elements
// from alternating factors.
struct NormalForm {
  Element head;
  std::vector<Syllable> tail;

  friend bool operator==(NormalForm const&, NormalForm const&) = default;
  friend auto operator<=>(NormalForm const&, NormalForm const&) = default;
};

// x = phi_i(c) * t
struct CosetFactor {
  Element c;
  Element t;
};

namespace detail {

// Right cosets of phi(C) in a finite factor; representative = least index.
struct FiniteTransversal {
  std::vector<Index> rep;      // per element: its coset representative
  std::vector<Element> c_of;   // per element: c with x = phi(c) * rep
  std::vector<Index> reps;     // sorted representatives

  static FiniteTransversal build(FiniteGroup const& A, RepHom const& phi,
                                 std::vector<Element> const& c_elems) {
    FiniteTransversal t;
    constexpr Index unset = static_cast<Index>(-1);
    t.rep.assign(A.order(), unset);
    t.c_of.assign(A.order(), Element{});
    std::vector<std::pair<Index, Element>> image;
    for (auto const& c : c_elems) image.emplace_back(GroupRep::index(phi(c)), c);
    for (Index x = 0; x < A.order(); ++x) {
      if (t.rep[x] != unset) continue;
      t.reps.push_back(x);
      for (auto const& [h, c] : image) {
        Index y = A.mul(h, x);
        t.rep[y] = x;
        t.c_of[y] = c;
      }
    }
    return t;
  }
};

// Cosets of phi(C) in an abelian factor, computed in Z^width modulo the
// lattice spanned by the images of C's basis and the torsion relations.
struct AbelianTransversal {
  std::size_t c_rank = 0;
  std::size_t width = 0;
  HermiteForm hf;

  static AbelianTransversal build(FGAbelian const& A, RepHom const& phi, std::size_t c_rank) {
    AbelianTransversal t;
    t.c_rank = c_rank;
    t.width = A.width();
    IntMatrix M(A.width(), c_rank + A.torsion.size());
    for (std::size_t j = 0; j < c_rank; ++j) {
      IntVector e(c_rank, 0);
      e[j] = 1;
      auto img = phi(e);
      for (std::size_t i = 0; i < A.width(); ++i) M(i, j) = img[i];
    }
    for (std::size_t k = 0; k < A.torsion.size(); ++k) M(A.free_rank + k, c_rank + k) = A.torsion[k];
    t.hf = hnf(M);
    return t;
  }

  CosetFactor factor(FGAbelian const& A, Element const& x) const {
    std::vector<BigInt> v(x.begin(), x.end());
    std::vector<BigInt> y(hf.H.cols());
    for (std::size_t j = 0; j < hf.rank(); ++j) {
      std::size_t r = hf.pivot_rows[j];
      BigInt q = floor_div(v[r], hf.H(r, j));
      y[j] = q;
      if (q != 0)
        for (std::size_t i = r; i < width; ++i) v[i] -= q * hf.H(i, j);
    }
    auto coeffs = hf.transform.apply(y);
    Element c(c_rank);
    for (std::size_t j = 0; j < c_rank; ++j) c[j] = to_int64(coeffs[j]);
    Element rep(width);
    for (std::size_t i = 0; i < width; ++i) rep[i] = to_int64(v[i]);
    return {c, A.normalize(rep)};
  }
};

}  // namespace detail

// A validated amalgam specification. Immutable after construction.
class AmalgamSpec {
 public:
  AmalgamSpec(std::vector<GroupRep> factors, GroupRep amalgam, std::vector<RepHom> embeddings,
              Limits limits = {})
      : factors_(std::move(factors)),
        amalgam_(std::move(amalgam)),
        embeddings_(std::move(embeddings)),
        limits_(limits) {
    validate();
  }

  std::size_t num_factors() const noexcept { return factors_.size(); }
  GroupRep const& factor(std::size_t i) const { return factors_.at(i); }
  std::vector<GroupRep> const& factors() const noexcept { return factors_; }
  GroupRep const& amalgam() const noexcept { return amalgam_; }
  RepHom const& embedding(std::size_t i) const { return embeddings_.at(i); }
  Limits const& limits() const noexcept { return limits_; }

  bool all_factors_finite() const {
    return std::all_of(factors_.begin(), factors_.end(),
                       [](GroupRep const& g) { return g.is_finite_group(); });
  }

  // Elements of C when C is finite.
  std::vector<Element> const& amalgam_elements() const { return c_elements_; }
  bool amalgam_is_trivial() const {
    return amalgam_.is_finite_group() ? amalgam_.finite()->order() == 1
                                      : amalgam_.abelian().is_trivial();
  }

  CosetFactor factorize(std::size_t i, Element const& x) const {
    auto const& A = factors_.at(i);
    A.check(x);
    if (amalgam_is_trivial()) return {amalgam_.identity(), x};
    if (A.is_finite_group()) {
      auto const& tr = *finite_tr_[i];
      Index xi = GroupRep::index(x);
      return {tr.c_of[xi], GroupRep::of(tr.rep[xi])};
    }
    return abelian_tr_[i]->factor(A.abelian(), x);
  }

  // Coset representatives of a finite factor, ascending.
  std::vector<Element> transversal(std::size_t i) const {
    auto const& A = factors_.at(i);
    if (!A.is_finite_group()) fail(ErrorKind::InvalidArgument, "transversal of an infinite factor");
    std::vector<Element> out;
    if (amalgam_is_trivial()) {
      for (Index x = 0; x < A.finite()->order(); ++x) out.push_back(GroupRep::of(x));
      return out;
    }
    for (auto r : finite_tr_[i]->reps) out.push_back(GroupRep::of(r));
    return out;
  }

  bool in_amalgam(std::size_t i, Element const& x) const {
    return factors_.at(i).is_identity(factorize(i, x).t);
  }

 private:
  void validate() {
    if (factors_.empty()) fail(ErrorKind::IncompatibleAmalgam, "an amalgam needs at least one factor");
    if (embeddings_.size() != factors_.size()) {
      fail(ErrorKind::IncompatibleAmalgam, "one embedding per factor required");
    }
    bool c_trivial = amalgam_is_trivial();
    if (amalgam_.is_abelian_group() && !amalgam_.abelian().is_torsion_free()) {
      fail(ErrorKind::IncompatibleAmalgam,
           "an abelian amalgamated subgroup must be free abelian; give finite ones as tables");
    }
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      auto const& e = embeddings_[i];
      if (!same_group(e.source(), amalgam_)) {
        fail(ErrorKind::IncompatibleAmalgam, "embedding " + std::to_string(i) +
                                                 " does not start at the amalgamated subgroup");
      }
      if (!same_group(e.target(), factors_[i])) {
        fail(ErrorKind::IncompatibleAmalgam,
             "embedding " + std::to_string(i) + " does not land in factor " + std::to_string(i));
      }
      if (!c_trivial && factors_[i].is_finite_group() != amalgam_.is_finite_group()) {
        fail(ErrorKind::IncompatibleAmalgam,
             "factor " + std::to_string(i) + " and the amalgamated subgroup have mixed types");
      }
      if (!e.is_injective(limits_.max_order)) {
        fail(ErrorKind::NotInjective, "embedding " + std::to_string(i) + " is not injective");
      }
    }
    if (amalgam_.order()) c_elements_ = amalgam_.enumerate(limits_.max_order);
    finite_tr_.resize(factors_.size());
    abelian_tr_.resize(factors_.size());
    if (c_trivial) return;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i].is_finite_group()) {
        finite_tr_[i] = std::make_shared<detail::FiniteTransversal>(
            detail::FiniteTransversal::build(*factors_[i].finite(), embeddings_[i], c_elements_));
      } else {
        abelian_tr_[i] = std::make_shared<detail::AbelianTransversal>(detail::AbelianTransversal::build(
            factors_[i].abelian(), embeddings_[i], amalgam_.abelian().width()));
      }
    }
  }

  std::vector<GroupRep> factors_;
  GroupRep amalgam_;
  std::vector<RepHom> embeddings_;
  Limits limits_;
  std::vector<Element> c_elements_;
  std::vector<std::shared_ptr<detail::FiniteTransversal const>> finite_tr_;
  std::vector<std::shared_ptr<detail::AbelianTransversal const>> abelian_tr_;
};

using AmalgamPtr = std::shared_ptr<AmalgamSpec const>;

inline AmalgamPtr validate_spec(std::vector<GroupRep> factors, GroupRep amalgam,
                                std::vector<RepHom> embeddings, Limits limits = {}) {
  return std::make_shared<AmalgamSpec const>(std::move(factors), std::move(amalgam),
                                             std::move(embeddings), limits);
}

// An embedding C -> A given by generator images. An injective map keeps
// element orders, so a generator whose image has a different order is
// reported as NotInjective before the homomorphism check runs.
inline RepHom embedding_from_images(GroupRep const& C, GroupRep const& A,
                                    std::vector<Element> const& images) {
  auto gens = C.generators();
  if (C.is_finite_group() && A.is_finite_group() && images.size() == gens.size()) {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      A.check(images[k]);
      auto src = C.finite()->element_order(GroupRep::index(gens[k]));
      auto dst = A.finite()->element_order(GroupRep::index(images[k]));
      if (src != dst) {
        fail(ErrorKind::NotInjective, "generator " + std::to_string(k + 1) + " has order " +
                                          std::to_string(src) + " but its image has order " +
                                          std::to_string(dst));
      }
    }
  }
  return RepHom::from_generator_images(C, A, images);
}

inline void check_word(AmalgamSpec const& spec, AmalgamWord const& w) {
  for (auto const& s : w.syllables) {
    if (s.factor >= spec.num_factors()) {
      fail(ErrorKind::ElementOutOfRange, "syllable names factor " + std::to_string(s.factor) +
                                             " of " + std::to_string(spec.num_factors()));
    }
    spec.factor(s.factor).check(s.element);
  }
}

// Folds the word from the right: each syllable left-multiplies the current
// normal form, absorbing the head and at most one tail syllable.
inline NormalForm reduce(AmalgamSpec const& spec, AmalgamWord const& w) {
  check_word(spec, w);
  Element head = spec.amalgam().identity();
  std::vector<Syllable> rev_tail;  // back() is the leftmost syllable
  for (auto it = w.syllables.rbegin(); it != w.syllables.rend(); ++it) {
    std::size_t i = it->factor;
    GroupRep const& A = spec.factor(i);
    Element y = A.mul(it->element, spec.embedding(i)(head));
    if (!rev_tail.empty() && rev_tail.back().factor == i) {
      y = A.mul(y, rev_tail.back().element);
      rev_tail.pop_back();
    }
    auto [c, t] = spec.factorize(i, y);
    head = std::move(c);
    if (!A.is_identity(t)) rev_tail.push_back({i, std::move(t)});
  }
  return {head, {rev_tail.rbegin(), rev_tail.rend()}};
}

inline AmalgamWord word_of(AmalgamSpec const& spec, NormalForm const& nf) {
  AmalgamWord w;
  if (!spec.amalgam().is_identity(nf.head)) w.syllables.push_back({0, spec.embedding(0)(nf.head)});
  w.syllables.insert(w.syllables.end(), nf.tail.begin(), nf.tail.end());
  return w;
}

inline bool is_identity(AmalgamSpec const& spec, NormalForm const& nf) {
  return nf.tail.empty() && spec.amalgam().is_identity(nf.head);
}

inline NormalForm multiply(AmalgamSpec const& spec, NormalForm const& u, NormalForm const& v) {
  auto w = word_of(spec, u);
  auto wv = word_of(spec, v);
  w.syllables.insert(w.syllables.end(), wv.syllables.begin(), wv.syllables.end());
  return reduce(spec, w);
}

inline AmalgamWord invert_word(AmalgamSpec const& spec, AmalgamWord const& w) {
  AmalgamWord r;
  for (auto it = w.syllables.rbegin(); it != w.syllables.rend(); ++it)
    r.syllables.push_back({it->factor, spec.factor(it->factor).inv(it->element)});
  return r;
}

inline NormalForm invert(AmalgamSpec const& spec, NormalForm const& u) {
  return reduce(spec, invert_word(spec, word_of(spec, u)));
}

inline bool words_equal(AmalgamSpec const& spec, AmalgamWord const& u, AmalgamWord const& v) {
  return reduce(spec, u) == reduce(spec, v);
}

// A homomorphism from the amalgam to `target`, defined syllable-wise by
// per-factor maps that agree on C.
class WordHom {
 public:
  WordHom(AmalgamPtr spec, GroupRep target, std::vector<RepHom> maps)
      : spec_(std::move(spec)), target_(std::move(target)), maps_(std::move(maps)) {
    if (maps_.size() != spec_->num_factors()) {
      fail(ErrorKind::InvalidArgument, "one factor map per factor required");
    }
    for (std::size_t i = 0; i < maps_.size(); ++i) {
      if (!same_group(maps_[i].source(), spec_->factor(i)) ||
          !same_group(maps_[i].target(), target_)) {
        fail(ErrorKind::InvalidArgument, "factor map " + std::to_string(i) + " has wrong type");
      }
    }
    std::vector<Element> cs = spec_->amalgam().order() ? spec_->amalgam_elements()
                                                       : spec_->amalgam().generators();
    for (auto const& c : cs) {
      Element ref = maps_[0](spec_->embedding(0)(c));
      for (std::size_t j = 1; j < maps_.size(); ++j)
        if (maps_[j](spec_->embedding(j)(c)) != ref) {
          fail(ErrorKind::DisagreeOnAmalgam, "c=" + spec_->amalgam().label(c) + " i=0 j=" +
                                                 std::to_string(j));
        }
    }
  }

  Element operator()(AmalgamWord const& w) const {
    check_word(*spec_, w);
    Element r = target_.identity();
    for (auto const& s : w.syllables) r = target_.mul(r, maps_[s.factor](s.element));
    return r;
  }

  Element operator()(NormalForm const& nf) const { return (*this)(word_of(*spec_, nf)); }

  AmalgamPtr const& spec() const noexcept { return spec_; }
  GroupRep const& target() const noexcept { return target_; }
  RepHom const& factor_map(std::size_t i) const { return maps_.at(i); }
  std::vector<RepHom> const& factor_maps() const noexcept { return maps_; }

 private:
  AmalgamPtr spec_;
  GroupRep target_;
  std::vector<RepHom> maps_;
};

inline WordHom induce_hom(AmalgamPtr spec, GroupRep target, std::vector<RepHom> maps) {
  return WordHom(std::move(spec), std::move(target), std::move(maps));
}

// (A_1 x ... x A_k) / gp(phi_i(c) phi_j(c)^-1) with the canonical maps
// mu_i : A_i -> S.
struct CentralProduct {
  GroupPtr group;
  DirectProduct product;
  Subgroup identified;
  FiniteHom projection;
  std::vector<FiniteHom> mu;
  std::vector<bool> mu_injective;
};

inline CentralProduct build_generalized_central_product(std::vector<GroupPtr> const& factors,
                                                        GroupPtr const& C,
                                                        std::vector<FiniteHom> const& embeddings,
                                                        Limits const& limits = {}) {
  if (factors.empty() || embeddings.size() != factors.size()) {
    fail(ErrorKind::InvalidArgument, "one embedding per factor required");
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    auto const& phi = embeddings[i];
    if (!same_table(*phi.source(), *C) || !same_table(*phi.target(), *factors[i])) {
      fail(ErrorKind::IncompatibleAmalgam, "embedding " + std::to_string(i) + " has wrong endpoints");
    }
    if (!phi.is_injective()) fail(ErrorKind::NotInjective, "embedding " + std::to_string(i));
    Subgroup z = center(*factors[i]);
    for (Index c = 0; c < C->order(); ++c)
      if (!z.contains(phi(c))) {
        fail(ErrorKind::NotCentral, "factor " + std::to_string(i) + ": image of " + C->label(c) +
                                        " is not central");
      }
  }
  auto P = direct_product(factors, limits);
  std::vector<Index> seeds;
  for (Index c = 0; c < C->order(); ++c)
    for (std::size_t j = 1; j < factors.size(); ++j) {
      Index a = P.injections[0](embeddings[0](c));
      Index b = P.injections[j](embeddings[j](c));
      seeds.push_back(P.group->mul(a, P.group->inv(b)));
    }
  Subgroup N = normal_closure(*P.group, seeds);
  auto Q = quotient_group(P.group, N, limits);
  CentralProduct out{Q.group, P, N, Q.projection, {}, {}};
  for (std::size_t i = 0; i < factors.size(); ++i) {
    out.mu.push_back(P.injections[i].then(Q.projection));
    out.mu_injective.push_back(out.mu.back().is_injective());
  }
  return out;
}

// (X x Y) / N with N the normal closure of (x, y^-1). No centrality assumed.
struct IdentifiedQuotient {
  GroupPtr group;
  DirectProduct product;
  Subgroup identified;
  FiniteHom projection;
};

inline IdentifiedQuotient identified_direct_quotient(GroupPtr const& X, GroupPtr const& Y, Index x,
                                                     Index y, Limits const& limits = {}) {
  detail::check_range(*X, std::vector<Index>{x});
  detail::check_range(*Y, std::vector<Index>{y});
  auto P = direct_product({X, Y}, limits);
  Index seed = P.pack(std::vector<Index>{x, Y->inv(y)});
  Subgroup N = normal_closure(*P.group, {seed});
  auto Q = quotient_group(P.group, N, limits);
  return {Q.group, P, N, Q.projection};
}

}  // namespace rsolv
