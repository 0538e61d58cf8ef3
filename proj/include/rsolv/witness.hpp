#pragma once

// One engine per quotient construction. Each builds the finite (or finite
// abelian) quotient, the homomorphism from the amalgam onto it, runs the
// checks the construction relies on and packages everything as a
// Certificate. Structural statements that are not machine checked go into
// `claims` and never affect pass/fail.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rsolv/amalgam.hpp"
#include "rsolv/finite_group.hpp"
#include "rsolv/oracle.hpp"
#include "rsolv/small_groups.hpp"

namespace rsolv {

using Json = nlohmann::json;

inline Json element_json(GroupRep const& G, Element const& x) {
  Json j;
  if (G.is_finite_group()) {
    j["index"] = GroupRep::index(x);
  } else {
    j["coords"] = x;
  }
  j["label"] = G.label(x);
  return j;
}

inline Json word_json(AmalgamSpec const& spec, AmalgamWord const& w) {
  Json out = Json::array();
  for (auto const& s : w.syllables)
    out.push_back({{"factor", s.factor}, {"element", element_json(spec.factor(s.factor), s.element)}});
  return out;
}

inline Json normal_form_json(AmalgamSpec const& spec, NormalForm const& nf) {
  return {{"head", element_json(spec.amalgam(), nf.head)},
          {"tail", word_json(spec, AmalgamWord{nf.tail})}};
}

inline Json group_description(FiniteGroup const& G) {
  Json j;
  j["order"] = G.order();
  if (G.is_abelian()) {
    j["abelian_invariants"] = abelian_group_invariants(G);
  } else if (auto d = derived_length(G)) {
    j["derived_length"] = *d;
  } else {
    j["solvable"] = false;
  }
  return j;
}

inline Json group_description(GroupRep const& G) {
  if (G.is_finite_group()) return group_description(*G.finite());
  FGAbelian const& A = G.abelian();
  Json j;
  j["free_rank"] = A.free_rank;
  j["abelian_invariants"] = A.torsion;
  if (auto n = G.order()) j["order"] = *n;
  return j;
}

// Generator-image table of a word homomorphism, factor by factor.
inline Json hom_table(WordHom const& h) {
  Json factors = Json::array();
  for (std::size_t i = 0; i < h.spec()->num_factors(); ++i) {
    auto const& A = h.spec()->factor(i);
    Json imgs = Json::array();
    for (auto const& g : A.generators())
      imgs.push_back({{"generator", element_json(A, g)},
                      {"image", element_json(h.target(), h.factor_map(i)(g))}});
    factors.push_back({{"factor", i}, {"images", imgs}});
  }
  return factors;
}

struct Check {
  std::string name;
  bool passed = false;
  Json evidence = Json::object();
};

struct Certificate {
  std::string kind;
  Json parameters = Json::object();
  Json quotient = Json::object();
  Json hom = Json::array();
  std::vector<Check> checks;
  std::vector<std::string> claims;
  std::optional<WordHom> map;  // evaluator onto the quotient; not serialised

  bool passed() const {
    for (auto const& c : checks)
      if (!c.passed) return false;
    return true;
  }

  std::vector<std::string> failed_checks() const {
    std::vector<std::string> out;
    for (auto const& c : checks)
      if (!c.passed) out.push_back(c.name);
    return out;
  }

  Check const* find(std::string const& name) const {
    for (auto const& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  Json to_json() const {
    Json cs = Json::array();
    for (auto const& c : checks) cs.push_back({{"name", c.name}, {"passed", c.passed}, {"evidence", c.evidence}});
    return {{"kind", kind},
            {"parameters", parameters},
            {"quotient", quotient},
            {"hom", hom},
            {"checks", cs},
            {"claims", claims},
            {"failed_checks", failed_checks()},
            {"status", passed() ? "passed" : "checks-failed"}};
  }
};

// Unique m >= 1 with g in delta_m(G) but not in delta_{m+1}(G).
inline std::size_t derived_depth(FiniteGroup const& G, Index g) {
  detail::check_range(G, std::vector<Index>{g});
  if (g == G.identity()) fail(ErrorKind::IdentityElement, "the identity has no derived depth");
  if (!is_solvable(G)) fail(ErrorKind::NotSolvable, "derived depth needs a solvable group");
  auto s = series(G, SeriesKind::derived);
  std::size_t m = 0;
  for (std::size_t k = 0; k < s.terms.size(); ++k)
    if (s.terms[k].contains(g)) m = k + 1;
  return m;
}

namespace detail {

inline void require_finite(AmalgamSpec const& spec, std::size_t nfactors, char const* who) {
  if (!spec.all_factors_finite() || !spec.amalgam().is_finite_group()) {
    fail(ErrorKind::InvalidArgument, std::string(who) + " needs finite factors and a finite amalgamated subgroup");
  }
  if (nfactors && spec.num_factors() != nfactors) {
    fail(ErrorKind::InvalidArgument, std::string(who) + " needs exactly " + std::to_string(nfactors) + " factors");
  }
}

inline std::vector<Index> image_of_amalgam(AmalgamSpec const& spec, std::size_t i) {
  std::vector<Index> out;
  for (auto const& c : spec.amalgam_elements()) out.push_back(GroupRep::index(spec.embedding(i)(c)));
  return out;
}

inline FiniteHom identity_hom(GroupPtr const& from, GroupPtr const& to) {
  std::vector<Index> imgs(from->order());
  for (Index x = 0; x < from->order(); ++x) imgs[x] = x;
  return FiniteHom(from, to, std::move(imgs));
}

inline Json injectivity_json(FiniteGroup const& src, oracle::InjectivityReport const& r) {
  Json j{{"injective", r.injective}};
  if (r.counterexample) {
    j["counterexample"] = {src.label(r.counterexample->first), src.label(r.counterexample->second)};
  }
  return j;
}

}  // namespace detail

// A, B over C with both images of C proper: D = A/<C_A, delta_2 A> x B/<C_B, delta_2 B>
// is a nontrivial abelian quotient of the amalgam.
inline Certificate not_perfect_certificate(AmalgamPtr const& spec, Limits const& limits = {}) {
  detail::require_finite(*spec, 2, "not-perfect certificate");
  Certificate cert;
  cert.kind = "not_perfect";
  std::vector<Quotient> qs;
  std::vector<Subgroup> cs;
  for (std::size_t i = 0; i < 2; ++i) {
    GroupPtr const& G = spec->factor(i).finite();
    auto seeds = detail::image_of_amalgam(*spec, i);
    Subgroup Ci = subgroup_closure(*G, seeds);
    if (Ci.size() == G->order()) {
      fail(ErrorKind::NotProperSubgroup, "image of the amalgamated subgroup is all of factor " + std::to_string(i));
    }
    Subgroup d2 = derived_term(*G, 2);
    seeds.insert(seeds.end(), d2.elements().begin(), d2.elements().end());
    qs.push_back(quotient_group(G, normal_closure(*G, seeds), limits));
    cs.push_back(Ci);
  }
  auto P = direct_product({qs[0].group, qs[1].group}, limits);
  FiniteHom f0 = qs[0].projection.then(P.injections[0]);
  FiniteHom f1 = qs[1].projection.then(P.injections[1]);
  bool agree = true;
  for (auto const& c : spec->amalgam_elements())
    agree = agree && f0(GroupRep::index(spec->embedding(0)(c))) == f1(GroupRep::index(spec->embedding(1)(c)));
  cert.checks.push_back({"maps_agree_on_C", agree, {{"amalgam_order", spec->amalgam_elements().size()}}});
  if (agree) {
    cert.map = induce_hom(spec, P.group, {RepHom::from_finite(f0), RepHom::from_finite(f1)});
    cert.hom = hom_table(*cert.map);
  }
  auto inv = abelian_group_invariants(*P.group);
  cert.quotient = group_description(*P.group);
  cert.parameters = {{"C_orders", {cs[0].size(), cs[1].size()}},
                     {"factor_quotient_orders", {qs[0].group->order(), qs[1].group->order()}}};
  cert.checks.push_back({"D_nontrivial", P.group->order() > 1,
                         {{"order", P.group->order()}, {"abelian_invariants", inv}}});
  GroupPtr const& A = spec->factor(0).finite();
  if (is_nilpotent(*A)) {
    Subgroup J = join(*A, cs[0], derived_term(*A, 2));
    cert.checks.push_back({"frattini_argument", J.size() < A->order(),
                           {{"join_order", J.size()}, {"group_order", A->order()}}});
  }
  cert.claims.push_back("the abelianization of the amalgam maps onto D, so the amalgam is not perfect");
  return cert;
}

namespace detail {

inline Certificate cyclic_impl(AmalgamPtr const& spec, Index a, Index b, Limits const& limits) {
  GroupPtr const& A = spec->factor(0).finite();
  GroupPtr const& B = spec->factor(1).finite();
  std::size_t m = derived_depth(*A, a);
  std::size_t n = derived_depth(*B, b);
  auto qa = quotient_group(A, derived_term(*A, m + 1), limits);
  auto qb = quotient_group(B, derived_term(*B, n + 1), limits);
  auto iq = identified_direct_quotient(qa.group, qb.group, qa.projection(a), qb.projection(b), limits);
  FiniteHom f0 = qa.projection.then(iq.product.injections[0]).then(iq.projection);
  FiniteHom f1 = qb.projection.then(iq.product.injections[1]).then(iq.projection);
  Certificate cert;
  cert.kind = "cyclic_amalgam";
  cert.map = induce_hom(spec, iq.group, {RepHom::from_finite(f0), RepHom::from_finite(f1)});
  cert.hom = hom_table(*cert.map);
  cert.quotient = group_description(*iq.group);
  cert.quotient["identified_order"] = iq.identified.size();
  cert.parameters = {{"m", m},
                     {"n", n},
                     {"a", element_json(spec->factor(0), GroupRep::of(a))},
                     {"b", element_json(spec->factor(1), GroupRep::of(b))}};
  GroupPtr const& C = spec->amalgam().finite();
  std::vector<Index> cimg;
  for (Index c = 0; c < C->order(); ++c) cimg.push_back(f0(GroupRep::index(spec->embedding(0)(GroupRep::of(c)))));
  FiniteHom on_c(C, iq.group, cimg);
  auto rep = oracle::exhaustive_injectivity(on_c, whole_group(*C));
  Json ev = detail::injectivity_json(*C, rep);
  ev["image_of_a"] = element_json(GroupRep(iq.group), GroupRep::of(f0(a)));
  ev["amalgam_order"] = C->order();
  cert.checks.push_back({"separates_C", rep.injective, ev});
  auto dl = derived_length(*iq.group);
  Json dev{{"solvable", dl.has_value()}};
  if (dl) dev["derived_length"] = *dl;
  cert.checks.push_back({"D_solvable", dl.has_value(), dev});
  cert.claims.push_back(
      "the kernel meets C trivially, so it is a free product of a free group and conjugates of its "
      "intersections with the factors");
  cert.claims.push_back("the amalgam is residually solvable");
  return cert;
}

}  // namespace detail

// A, B finite solvable amalgamated along <a> = <b>.
inline Certificate cyclic_amalgam_quotient(GroupPtr const& A, GroupPtr const& B, Index a, Index b,
                                           Limits const& limits = {}) {
  detail::check_range(*A, std::vector<Index>{a});
  detail::check_range(*B, std::vector<Index>{b});
  if (a == A->identity() || b == B->identity()) {
    fail(ErrorKind::IdentityElement, "the amalgamated generators must be nontrivial");
  }
  if (A->element_order(a) != B->element_order(b)) {
    fail(ErrorKind::OrderMismatch, "a has order " + std::to_string(A->element_order(a)) + ", b has order " +
                                       std::to_string(B->element_order(b)));
  }
  if (!is_solvable(*A) || !is_solvable(*B)) fail(ErrorKind::NotSolvable, "both factors must be solvable");
  auto C = groups::cyclic(A->element_order(a), limits);
  auto spec = validate_spec({A, B}, C,
                            {RepHom::from_generator_images(C, A, {GroupRep::of(a)}),
                             RepHom::from_generator_images(C, B, {GroupRep::of(b)})},
                            limits);
  return detail::cyclic_impl(spec, a, b, limits);
}

// Least-index generator of a finite cyclic group, if it is cyclic and nontrivial.
inline std::optional<Index> cyclic_generator(FiniteGroup const& C) {
  if (C.order() < 2) return std::nullopt;
  for (Index c = 0; c < C.order(); ++c)
    if (C.element_order(c) == C.order()) return c;
  return std::nullopt;
}

inline Certificate cyclic_amalgam_quotient(AmalgamPtr const& spec, Limits const& limits = {}) {
  detail::require_finite(*spec, 2, "cyclic amalgam quotient");
  auto g = cyclic_generator(*spec->amalgam().finite());
  if (!g) fail(ErrorKind::InvalidArgument, "the amalgamated subgroup is not a nontrivial cyclic group");
  Index a = GroupRep::index(spec->embedding(0)(GroupRep::of(*g)));
  Index b = GroupRep::index(spec->embedding(1)(GroupRep::of(*g)));
  GroupPtr const& A = spec->factor(0).finite();
  GroupPtr const& B = spec->factor(1).finite();
  if (!is_solvable(*A) || !is_solvable(*B)) fail(ErrorKind::NotSolvable, "both factors must be solvable");
  return detail::cyclic_impl(spec, a, b, limits);
}

// Finitely many finite factors amalgamated along central images of C.
inline Certificate central_amalgam_quotient(AmalgamPtr const& spec, Limits const& limits = {}) {
  detail::require_finite(*spec, 0, "central amalgam quotient");
  std::vector<GroupPtr> fs;
  std::vector<FiniteHom> es;
  for (std::size_t i = 0; i < spec->num_factors(); ++i) {
    fs.push_back(spec->factor(i).finite());
    es.push_back(spec->embedding(i).to_finite());
  }
  GroupPtr const& C = spec->amalgam().finite();
  auto cp = build_generalized_central_product(fs, C, es, limits);
  Certificate cert;
  cert.kind = "central_amalgam";
  std::vector<RepHom> maps;
  for (auto const& mu : cp.mu) maps.push_back(RepHom::from_finite(mu));
  cert.map = induce_hom(spec, cp.group, maps);
  cert.hom = hom_table(*cert.map);
  cert.quotient = group_description(*cp.group);
  bool all_inj = true;
  Json per = Json::array();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto r = oracle::exhaustive_injectivity(cp.mu[i], whole_group(*fs[i]));
    all_inj = all_inj && r.injective;
    Json e = detail::injectivity_json(*fs[i], r);
    e["factor"] = i;
    per.push_back(e);
  }
  cert.checks.push_back({"mu_injective_on_factors", all_inj, {{"factors", per}}});
  auto dl = derived_length(*cp.group);
  Json dev{{"solvable", dl.has_value()}};
  if (dl) dev["derived_length"] = *dl;
  cert.checks.push_back({"S_solvable", dl.has_value(), dev});
  std::size_t prod = 1, cpow = 1;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    prod *= fs[i]->order();
    if (i) cpow *= C->order();
  }
  cert.checks.push_back({"count_law", cp.group->order() * cpow == prod,
                         {{"order", cp.group->order()},
                          {"factor_order_product", prod},
                          {"amalgam_order", C->order()},
                          {"factors", fs.size()}}});
  cert.parameters = {{"factors", fs.size()}, {"identified_order", cp.identified.size()}};
  cert.claims.push_back("the kernel meets every factor trivially, so it is free and the amalgam is solvable-by-free");
  return cert;
}

// k copies of one finite group A over a common C; psi folds every copy onto
// factor 0.
inline Certificate double_retraction(AmalgamPtr const& spec, Limits const& limits = {}) {
  (void)limits;
  detail::require_finite(*spec, 0, "double retraction");
  GroupPtr const& A = spec->factor(0).finite();
  for (std::size_t i = 1; i < spec->num_factors(); ++i) {
    if (!same_table(*A, *spec->factor(i).finite())) {
      fail(ErrorKind::NotIsomorphism, "factor " + std::to_string(i) + " is not a copy of factor 0");
    }
    for (auto const& c : spec->amalgam_elements())
      if (spec->embedding(i)(c) != spec->embedding(0)(c)) {
        fail(ErrorKind::NotIsomorphism,
             "copy " + std::to_string(i) + " does not identify C the same way as factor 0");
      }
  }
  Certificate cert;
  cert.kind = "double";
  std::vector<FiniteHom> folds;
  std::vector<RepHom> maps;
  for (std::size_t i = 0; i < spec->num_factors(); ++i) {
    folds.push_back(detail::identity_hom(spec->factor(i).finite(), A));
    maps.push_back(RepHom::from_finite(folds.back()));
  }
  cert.map = induce_hom(spec, A, maps);
  cert.hom = hom_table(*cert.map);
  cert.quotient = group_description(*A);
  GroupRep target(A);

  bool retract = true;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < spec->num_factors(); ++i)
    for (Index x = 0; x < A->order(); ++x) {
      ++checked;
      retract = retract && (*cert.map)(AmalgamWord{{{i, GroupRep::of(x)}}}) == GroupRep::of(x);
    }
  cert.checks.push_back({"retraction", retract, {{"elements_checked", checked}}});

  bool inj = true;
  Json per = Json::array();
  for (std::size_t i = 0; i < folds.size(); ++i) {
    auto r = oracle::exhaustive_injectivity(folds[i], whole_group(*folds[i].source()));
    inj = inj && r.injective;
    Json e = detail::injectivity_json(*A, r);
    e["factor"] = i;
    per.push_back(e);
  }
  cert.checks.push_back({"injective_on_each_factor", inj, {{"factors", per}}});

  bool kernel_ok = true;
  Json gens = Json::array();
  for (std::size_t i = 1; i < spec->num_factors(); ++i)
    for (auto g : A->generators()) {
      AmalgamWord w{{{0, GroupRep::of(g)}, {i, GroupRep::of(A->inv(g))}}};
      bool dies = target.is_identity((*cert.map)(w));
      kernel_ok = kernel_ok && dies;
      gens.push_back({{"copy", i},
                      {"generator", A->label(g)},
                      {"maps_to_identity", dies},
                      {"normal_form_nontrivial", !is_identity(*spec, reduce(*spec, w))}});
    }
  cert.checks.push_back({"kernel_generators", kernel_ok, {{"generators", gens}}});
  cert.parameters = {{"copies", spec->num_factors()}, {"amalgam_order", spec->amalgam_elements().size()}};
  cert.claims.push_back("the kernel is the normal closure of the listed generators a (a phi_i)^-1");
  cert.claims.push_back("the kernel meets every factor trivially, so it is free and the amalgam is free-by-A");
  return cert;
}

// Factor 0 = Z^r; every other factor is sent to the identity and Z^r onto
// Z^r / A_1 where A_1 is the finite-index direct summand around C.
inline Certificate abelian_factor_quotient(AmalgamPtr const& spec, Limits const& limits = {}) {
  GroupRep const& F = spec->factor(0);
  if (!F.is_abelian_group() || !F.abelian().is_torsion_free()) {
    fail(ErrorKind::NotTorsionFree, "factor 0 must be a free abelian group");
  }
  FGAbelian const& A = F.abelian();
  std::size_t r = A.free_rank;
  auto cgens = spec->amalgam().is_abelian_group() ? spec->amalgam().generators() : std::vector<Element>{};
  IntMatrix G(r, cgens.size());
  for (std::size_t j = 0; j < cgens.size(); ++j) {
    auto img = spec->embedding(0)(cgens[j]);
    for (std::size_t i = 0; i < r; ++i) G(i, j) = img[i];
  }
  auto split = finite_index_split(r, LatticeSubgroup(r, G), limits.max_order);
  std::vector<std::size_t> keep;
  std::vector<std::int64_t> tors;
  for (std::size_t i = 0; i < split.divisors.size(); ++i)
    if (split.divisors[i] > 1) {
      keep.push_back(i);
      tors.push_back(to_int64(split.divisors[i]));
    }
  FGAbelian Q(0, tors);
  auto project = [&](std::vector<BigInt> const& v) {
    auto q = split.quotient_coordinates(v);
    Element e;
    for (auto i : keep) e.push_back(to_int64(q[i]));
    return e;
  };
  std::vector<Element> a_imgs;
  for (std::size_t j = 0; j < r; ++j) {
    std::vector<BigInt> e(r, 0);
    e[j] = 1;
    a_imgs.push_back(project(e));
  }
  std::vector<RepHom> maps{RepHom::from_generator_images(F, Q, a_imgs)};
  for (std::size_t i = 1; i < spec->num_factors(); ++i) {
    auto const& B = spec->factor(i);
    maps.push_back(RepHom::from_generator_images(B, Q, std::vector<Element>(B.generators().size(), Q.zero())));
  }
  Certificate cert;
  cert.kind = "abelian_factor";
  cert.map = induce_hom(spec, Q, maps);
  cert.hom = hom_table(*cert.map);
  cert.quotient = group_description(GroupRep(Q));

  bool kills = true;
  Json cimgs = Json::array();
  for (std::size_t j = 0; j < G.cols(); ++j) {
    auto img = project(G.column(j));
    kills = kills && img == Q.zero();
    cimgs.push_back(img);
  }
  cert.checks.push_back({"kills_C", kills, {{"c_images", cimgs}}});

  std::set<Element> distinct;
  Json reps = Json::array();
  for (auto const& v : split.coset_reps) {
    distinct.insert(project(v));
    Json row = Json::array();
    for (auto const& x : v) row.push_back(to_int64(x));
    reps.push_back(row);
  }
  std::size_t qorder = *GroupRep(Q).order();
  std::int64_t index = to_int64(split.index);
  cert.checks.push_back({"image_order",
                         distinct.size() == qorder && static_cast<std::int64_t>(qorder) == index,
                         {{"index", index}, {"distinct_coset_images", distinct.size()}, {"target_order", qorder}}});

  std::set<Element> span{Q.zero()};
  std::vector<Element> frontier{Q.zero()};
  while (!frontier.empty()) {
    auto x = frontier.back();
    frontier.pop_back();
    for (auto const& g : a_imgs) {
      auto y = Q.add(x, g);
      if (span.insert(y).second) frontier.push_back(y);
    }
  }
  cert.checks.push_back({"epimorphism", span.size() == qorder,
                         {{"generated_order", span.size()}, {"target_order", qorder}}});

  Json divs = Json::array();
  for (auto const& d : split.divisors) divs.push_back(to_int64(d));
  cert.parameters = {{"index", index},
                     {"divisors", divs},
                     {"coset_reps", reps},
                     {"vacuous_quotient", index == 1}};
  cert.claims.push_back(
      "the kernel is generated by the conjugates of the other factors by the coset representatives "
      "together with A_1, amalgamated over C");
  cert.claims.push_back("the amalgam is (residually solvable)-by-abelian");
  return cert;
}

// Raw-parts entry point: type checks on the free abelian factor and C come
// before the amalgam itself is validated.
inline Certificate abelian_factor_quotient(std::vector<GroupRep> factors, GroupRep C, std::vector<RepHom> embeddings,
                                           Limits const& limits = {}) {
  if (factors.empty() || !factors[0].is_abelian_group() || !factors[0].abelian().is_torsion_free()) {
    fail(ErrorKind::NotTorsionFree, "factor 0 must be a free abelian group");
  }
  bool torsion = C.is_finite_group() ? C.finite()->order() > 1 : !C.abelian().is_torsion_free();
  if (torsion) {
    fail(ErrorKind::EmbeddingTypeMismatch, "the amalgamated subgroup has torsion but sits in a free abelian group");
  }
  return abelian_factor_quotient(validate_spec(std::move(factors), std::move(C), std::move(embeddings), limits),
                                 limits);
}

struct WitnessOptions {
  Limits limits;
  std::size_t budget = 10'000'000;
  std::size_t catalog_max = 24;
};

struct OracleOutcome {
  oracle::HomSearchResult search;
  std::optional<Certificate> certificate;
};

// Exhaustive search for a homomorphism into the solvable catalog that keeps w
// alive, then the same checks as the other engines.
inline OracleOutcome oracle_witness(AmalgamPtr const& spec, AmalgamWord const& w, WitnessOptions const& opts = {}) {
  auto P = oracle::presentation_of_amalgam(*spec);
  auto gw = oracle::generator_word(P, w);
  auto catalog = oracle::build_catalog(opts.catalog_max);
  OracleOutcome out{oracle::hom_search(P, catalog, gw, oracle::generator_orders(*spec, P), opts.budget), {}};
  auto const& s = out.search;
  if (s.status != oracle::SearchStatus::found) return out;
  Certificate cert;
  cert.kind = "oracle_witness";
  std::vector<RepHom> maps;
  for (std::size_t i = 0; i < spec->num_factors(); ++i) {
    GroupPtr const& Ai = spec->factor(i).finite();
    std::vector<Index> imgs(Ai->order(), s.target->identity());
    for (Index x = 0; x < Ai->order(); ++x)
      if (auto g = P.generator_of(i, x)) imgs[x] = s.images[*g];
    maps.push_back(RepHom::from_finite(FiniteHom(Ai, s.target, imgs)));
  }
  cert.map = induce_hom(spec, s.target, maps);
  cert.hom = hom_table(*cert.map);
  cert.quotient = group_description(*s.target);
  cert.quotient["name"] = s.target_name;
  cert.parameters = {{"catalog_index", s.catalog_index},
                     {"catalog_size", catalog.groups.size()},
                     {"nodes", s.nodes},
                     {"generators", P.ngens},
                     {"relators", P.relators.size()}};
  bool rel = true;
  for (auto const& r : P.relators) rel = rel && oracle::evaluate(*s.target, s.images, r) == s.target->identity();
  cert.checks.push_back({"relators_satisfied", rel, {{"relators", P.relators.size()}}});
  auto img = (*cert.map)(w);
  bool survives = GroupRep::index(img) != s.target->identity();
  cert.checks.push_back({"word_survives", survives, {{"image", element_json(GroupRep(s.target), img)}}});
  auto dl = derived_length(*s.target);
  Json dev{{"solvable", dl.has_value()}};
  if (dl) dev["derived_length"] = *dl;
  cert.checks.push_back({"target_solvable", dl.has_value(), dev});
  out.certificate = std::move(cert);
  return out;
}

struct WitnessResult {
  AmalgamWord word;
  std::string engine;
  Json target;
  Json hom;
  Json image;
  bool separated = false;
  std::size_t target_derived_length = 0;
};

struct EngineAttempt {
  std::string engine;
  std::string outcome;  // not-applicable | error | identity-image | unsolvable-target | separated | exhausted | budget-exceeded
  std::string detail;
  std::optional<Certificate> certificate;
};

struct SeparationReport {
  std::optional<WitnessResult> witness;
  std::vector<EngineAttempt> attempts;
  bool separated() const { return witness.has_value(); }
};

namespace detail {

inline std::optional<std::size_t> target_derived_length(GroupRep const& T) {
  if (T.is_finite_group()) return derived_length(*T.finite());
  if (T.abelian().is_trivial()) return 0;
  return 1;
}

inline std::string double_blocker(AmalgamSpec const& spec) {
  if (!spec.all_factors_finite() || !spec.amalgam().is_finite_group()) return "needs finite factors";
  for (std::size_t i = 1; i < spec.num_factors(); ++i) {
    if (!same_table(*spec.factor(0).finite(), *spec.factor(i).finite())) return "factors are not copies of one group";
    for (auto const& c : spec.amalgam_elements())
      if (spec.embedding(i)(c) != spec.embedding(0)(c)) return "copies identify C differently";
  }
  return {};
}

inline std::string central_blocker(AmalgamSpec const& spec) {
  if (!spec.all_factors_finite() || !spec.amalgam().is_finite_group()) return "needs finite factors";
  for (std::size_t i = 0; i < spec.num_factors(); ++i) {
    Subgroup z = center(*spec.factor(i).finite());
    for (auto x : image_of_amalgam(spec, i))
      if (!z.contains(x)) return "image of C is not central in factor " + std::to_string(i);
  }
  return {};
}

inline std::string cyclic_blocker(AmalgamSpec const& spec) {
  if (!spec.all_factors_finite() || !spec.amalgam().is_finite_group()) return "needs finite factors";
  if (spec.num_factors() != 2) return "needs exactly two factors";
  if (!cyclic_generator(*spec.amalgam().finite())) return "C is not a nontrivial cyclic group";
  for (std::size_t i = 0; i < 2; ++i)
    if (!is_solvable(*spec.factor(i).finite())) return "factor " + std::to_string(i) + " is not solvable";
  return {};
}

inline std::string abelian_blocker(AmalgamSpec const& spec) {
  auto const& F = spec.factor(0);
  if (!F.is_abelian_group() || !F.abelian().is_torsion_free()) return "factor 0 is not free abelian";
  return {};
}

}  // namespace detail

// Tries the engines in the order double, central, cyclic, abelian-factor and
// finally the oracle search; the first one whose target is solvable and keeps
// w alive wins.
inline SeparationReport separate_element(AmalgamPtr const& spec, AmalgamWord const& w, WitnessOptions const& opts = {}) {
  if (is_identity(*spec, reduce(*spec, w))) fail(ErrorKind::IdentityWord, "the word is the identity of the amalgam");
  SeparationReport rep;
  struct Engine {
    char const* name;
    std::string (*blocker)(AmalgamSpec const&);
    Certificate (*run)(AmalgamPtr const&, Limits const&);
  };
  Engine const engines[] = {
      {"double", detail::double_blocker, [](AmalgamPtr const& s, Limits const& l) { return double_retraction(s, l); }},
      {"central", detail::central_blocker,
       [](AmalgamPtr const& s, Limits const& l) { return central_amalgam_quotient(s, l); }},
      {"cyclic", detail::cyclic_blocker,
       [](AmalgamPtr const& s, Limits const& l) { return cyclic_amalgam_quotient(s, l); }},
      {"abelian_factor", detail::abelian_blocker,
       [](AmalgamPtr const& s, Limits const& l) { return abelian_factor_quotient(s, l); }},
  };
  auto accept = [&](std::string const& name, Certificate const& cert) -> bool {
    auto const& h = *cert.map;
    auto img = h(w);
    auto dl = detail::target_derived_length(h.target());
    if (h.target().is_identity(img)) return false;
    if (!dl) return false;
    rep.witness = WitnessResult{w,
                                name,
                                group_description(h.target()),
                                hom_table(h),
                                element_json(h.target(), img),
                                true,
                                *dl};
    return true;
  };
  for (auto const& e : engines) {
    EngineAttempt at{e.name, "not-applicable", e.blocker(*spec), {}};
    if (!at.detail.empty()) {
      rep.attempts.push_back(std::move(at));
      continue;
    }
    try {
      auto cert = e.run(spec, opts.limits);
      at.certificate = cert;
      if (accept(e.name, cert)) {
        at.outcome = "separated";
        rep.attempts.push_back(std::move(at));
        return rep;
      }
      bool solvable = detail::target_derived_length(cert.map->target()).has_value();
      at.outcome = solvable ? "identity-image" : "unsolvable-target";
    } catch (Error const& err) {
      at.outcome = "error";
      at.detail = std::string(to_string(err.kind())) + ": " + err.detail();
    }
    rep.attempts.push_back(std::move(at));
  }
  EngineAttempt at{"oracle", "not-applicable", {}, {}};
  if (!spec->all_factors_finite()) {
    at.detail = "needs finite factors";
  } else {
    try {
      auto out = oracle_witness(spec, w, opts);
      at.detail = "nodes=" + std::to_string(out.search.nodes);
      if (out.certificate) {
        at.certificate = out.certificate;
        if (out.certificate->passed() && accept("oracle", *out.certificate)) {
          at.outcome = "separated";
        } else {
          at.outcome = "error";
          at.detail += "; returned homomorphism failed verification";
        }
      } else {
        at.outcome = out.search.status == oracle::SearchStatus::exhausted ? "exhausted" : "budget-exceeded";
      }
    } catch (Error const& err) {
      at.outcome = "error";
      at.detail = std::string(to_string(err.kind())) + ": " + err.detail();
    }
  }
  rep.attempts.push_back(std::move(at));
  return rep;
}

inline Json to_json(WitnessResult const& r, AmalgamSpec const& spec) {
  return {{"word", word_json(spec, r.word)},
          {"engine", r.engine},
          {"target", r.target},
          {"hom", r.hom},
          {"image", r.image},
          {"separated", r.separated},
          {"target_derived_length", r.target_derived_length}};
}

inline Json to_json(SeparationReport const& rep, AmalgamSpec const& spec, AmalgamWord const& w) {
  Json attempts = Json::array();
  for (auto const& a : rep.attempts) {
    Json j{{"engine", a.engine}, {"outcome", a.outcome}, {"detail", a.detail}};
    if (a.certificate) j["certificate"] = a.certificate->to_json();
    attempts.push_back(j);
  }
  Json out{{"attempts", attempts}, {"word", word_json(spec, w)}};
  if (rep.witness) {
    out["result"] = "separated";
    out["witness"] = to_json(*rep.witness, spec);
  } else {
    out["result"] = "NotSeparatedAtLevelOne";
  }
  return out;
}

}  // namespace rsolv
