#include <catch_amalgamated.hpp>

#include <random>

#include "brute.hpp"
#include "rsolv/witness.hpp"

using namespace rsolv;

namespace {

using Cycles = std::vector<std::vector<std::uint32_t>>;

Index at(GroupPtr const& G, Cycles c) { return groups::element(*G, c); }
Element el(GroupPtr const& G, Cycles c) { return GroupRep::of(at(G, c)); }

Cycles const minus_one{{1, 3}, {2, 4}, {5, 7}, {6, 8}};
Cycles const q_i{{1, 2, 3, 4}, {5, 6, 7, 8}};

// Every factor gets C through the given images of C's generators.
AmalgamPtr amalgam(std::vector<GroupRep> factors, GroupRep C, std::vector<std::vector<Element>> images) {
  std::vector<RepHom> es;
  for (std::size_t i = 0; i < factors.size(); ++i) es.push_back(RepHom::from_generator_images(C, factors[i], images[i]));
  return validate_spec(std::move(factors), std::move(C), std::move(es));
}

AmalgamPtr s3_double() {
  auto S = groups::symmetric(3);
  auto r = el(S, {{1, 2, 3}});
  return amalgam({S, S}, groups::cyclic(3), {{r}, {r}});
}

AmalgamPtr q8_over_minus_one(std::size_t copies = 2) {
  auto Q = groups::quaternion();
  std::vector<GroupRep> fs(copies, Q);
  return amalgam(fs, groups::cyclic(2), std::vector<std::vector<Element>>(copies, {el(Q, minus_one)}));
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (Error const& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

std::vector<std::size_t> invariants(Json const& q) { return q.at("abelian_invariants").get<std::vector<std::size_t>>(); }

}  // namespace

TEST_CASE("derived_depth", "[witness]") {
  auto S = groups::symmetric(3);
  CHECK(derived_depth(*S, at(S, {{1, 2}})) == 1);
  CHECK(derived_depth(*S, at(S, {{1, 2, 3}})) == 2);
  auto Q = groups::quaternion();
  CHECK(derived_depth(*Q, at(Q, minus_one)) == 2);
  CHECK(derived_depth(*Q, at(Q, q_i)) == 1);
  CHECK(kind_of([&] { derived_depth(*S, S->identity()); }) == ErrorKind::IdentityElement);
  auto A5 = groups::alternating(5);
  CHECK(kind_of([&] { derived_depth(*A5, 1); }) == ErrorKind::NotSolvable);

  // depth law by direct membership on every element of S4
  auto S4 = groups::symmetric(4);
  for (Index g = 1; g < S4->order(); ++g) {
    auto m = derived_depth(*S4, g);
    CHECK(derived_term(*S4, m).contains(g));
    CHECK_FALSE(derived_term(*S4, m + 1).contains(g));
  }
}

TEST_CASE("not-perfect certificate", "[witness]") {
  auto Q = groups::quaternion();
  auto S = groups::symmetric(3);
  auto C2 = groups::cyclic(2);
  auto qs = not_perfect_certificate(amalgam({Q, S}, C2, {{el(Q, minus_one)}, {el(S, {{1, 2}})}}));
  CHECK(qs.passed());
  CHECK(invariants(qs.quotient) == std::vector<std::size_t>{2, 2});
  REQUIRE(qs.find("frattini_argument"));
  CHECK(qs.find("frattini_argument")->passed);

  auto C4 = groups::cyclic(4);
  auto sq = GroupRep::of(C4->power(C4->generators()[0], 2));
  auto cc = not_perfect_certificate(amalgam({C4, C4}, C2, {{sq}, {sq}}));
  CHECK(cc.passed());
  CHECK(invariants(cc.quotient) == std::vector<std::size_t>{2, 2});

  auto r = el(S, {{1, 2, 3}});
  auto ss = not_perfect_certificate(amalgam({S, S}, groups::cyclic(3), {{r}, {r}}));
  CHECK(ss.passed());
  CHECK(invariants(ss.quotient) == std::vector<std::size_t>{2, 2});
  CHECK_FALSE(ss.find("frattini_argument"));  // S3 is not nilpotent

  // the map onto D is onto: images of the factor generators generate it
  auto const& h = *ss.map;
  auto D = h.target().finite();
  std::set<Index> seeds;
  for (std::size_t i = 0; i < 2; ++i)
    for (auto const& g : h.spec()->factor(i).generators()) seeds.insert(GroupRep::index(h.factor_map(i)(g)));
  CHECK(brute::closure(*D, seeds).size() == D->order());

  std::vector<Element> sgens;
  for (auto g : S->generators()) sgens.push_back(GroupRep::of(g));
  CHECK(kind_of([&] { not_perfect_certificate(amalgam({S, S}, S, {sgens, sgens})); }) ==
        ErrorKind::NotProperSubgroup);
}

TEST_CASE("cyclic amalgam quotient", "[witness]") {
  auto Q = groups::quaternion();
  auto q = cyclic_amalgam_quotient(Q, Q, at(Q, minus_one), at(Q, minus_one));
  CHECK(q.passed());
  CHECK(q.quotient.at("order") == 32);
  CHECK(q.find("separates_C")->passed);

  auto S = groups::symmetric(3);
  auto s = cyclic_amalgam_quotient(S, S, at(S, {{1, 2, 3}}), at(S, {{1, 2, 3}}));
  CHECK_FALSE(s.passed());
  CHECK(s.quotient.at("order") == 4);
  CHECK(s.failed_checks() == std::vector<std::string>{"separates_C"});
  CHECK(s.parameters.at("m") == 2);
  auto ev = s.find("separates_C")->evidence;
  CHECK(ev.at("image_of_a").at("index") == 0);
  CHECK(s.to_json().at("status") == "checks-failed");

  auto C6 = groups::cyclic(6);
  Index g2 = C6->power(C6->generators()[0], 2);
  auto c = cyclic_amalgam_quotient(C6, C6, g2, g2);
  CHECK(c.passed());
  CHECK(c.parameters.at("m") == 1);
  CHECK(c.parameters.at("n") == 1);
  // (Z6 x Z6) / <(2,-2)> via determinantal divisors
  auto inv = brute::invariant_factors_by_minors(IntMatrix{{6, 0, 2}, {0, 6, -2}});
  BigInt order = 1;
  for (auto const& d : inv) order *= d;
  CHECK(BigInt(c.quotient.at("order").get<std::int64_t>()) == order);

  CHECK(kind_of([&] { cyclic_amalgam_quotient(Q, S, at(Q, minus_one), at(S, {{1, 2, 3}})); }) ==
        ErrorKind::OrderMismatch);
  auto A5 = groups::alternating(5);
  CHECK(kind_of([&] { cyclic_amalgam_quotient(A5, A5, 1, 1); }) == ErrorKind::NotSolvable);
  CHECK(kind_of([&] { cyclic_amalgam_quotient(S, S, 0, 0); }) == ErrorKind::IdentityElement);

  // spec entry point gives the same certificate text
  auto from_spec = cyclic_amalgam_quotient(s3_double());
  CHECK(from_spec.to_json() == s.to_json());
}

TEST_CASE("central amalgam quotient", "[witness]") {
  auto qq = central_amalgam_quotient(q8_over_minus_one());
  CHECK(qq.passed());
  CHECK(qq.quotient.at("order") == 32);

  auto D = groups::dihedral(4);
  auto Q = groups::quaternion();
  auto C2 = groups::cyclic(2);
  auto dq = central_amalgam_quotient(amalgam({D, Q}, C2, {{el(D, {{1, 3}, {2, 4}})}, {el(Q, minus_one)}}));
  CHECK(dq.passed());
  CHECK(dq.quotient.at("order") == 32);
  CHECK(dq.find("count_law")->passed);

  auto one = central_amalgam_quotient(amalgam({D}, C2, {{el(D, {{1, 3}, {2, 4}})}}));
  CHECK(one.passed());
  CHECK(one.quotient.at("order") == 8);

  CHECK(kind_of([&] { central_amalgam_quotient(s3_double()); }) == ErrorKind::NotCentral);
}

TEST_CASE("double retraction", "[witness]") {
  auto spec = s3_double();
  auto d = double_retraction(spec);
  CHECK(d.passed());
  auto S = spec->factor(0).finite();
  AmalgamWord k{{{0, el(S, {{1, 2}})}, {1, el(S, {{1, 2}})}}};
  CHECK((*d.map)(k) == GroupRep::of(0));
  CHECK_FALSE(is_identity(*spec, reduce(*spec, k)));
  bool some_nontrivial = false;
  for (auto const& g : d.find("kernel_generators")->evidence.at("generators"))
    some_nontrivial = some_nontrivial || g.at("normal_form_nontrivial").get<bool>();
  CHECK(some_nontrivial);

  // full amalgamation: every kernel generator is already trivial
  std::vector<Element> sg;
  for (auto g : S->generators()) sg.push_back(GroupRep::of(g));
  auto full = double_retraction(amalgam({S, S}, S, {sg, sg}));
  CHECK(full.passed());
  for (auto const& g : full.find("kernel_generators")->evidence.at("generators"))
    CHECK_FALSE(g.at("normal_form_nontrivial").get<bool>());

  CHECK(double_retraction(q8_over_minus_one(3)).passed());

  auto C6 = groups::cyclic(6);
  auto C3 = groups::cyclic(3);
  CHECK(kind_of([&] {
          double_retraction(amalgam({S, C6}, C3, {{el(S, {{1, 2, 3}})}, {GroupRep::of(C6->power(C6->generators()[0], 2))}}));
        }) == ErrorKind::NotIsomorphism);
  auto r = el(S, {{1, 2, 3}});
  auto r2 = el(S, {{1, 3, 2}});
  CHECK(kind_of([&] { double_retraction(amalgam({S, S}, C3, {{r}, {r2}})); }) == ErrorKind::NotIsomorphism);
}

TEST_CASE("abelian factor quotient", "[witness]") {
  FGAbelian Z2(2, {}), Z(1, {});
  auto spec = amalgam({Z2, Z}, Z, {{{2, 0}}, {{1}}});
  auto a = abelian_factor_quotient(spec);
  CHECK(a.passed());
  CHECK(a.parameters.at("index") == 2);
  CHECK(a.parameters.at("coset_reps") == Json::parse("[[0,0],[1,0]]"));
  CHECK(invariants(a.quotient) == std::vector<std::size_t>{2});
  CHECK(a.parameters.at("vacuous_quotient") == false);
  // every C-word dies; a word's image only depends on its factor-0 part
  for (std::int64_t c = -3; c <= 3; ++c) CHECK((*a.map)(AmalgamWord{{{1, {c}}}}) == Element{0});
  CHECK((*a.map)(AmalgamWord{{{0, {1, 0}}}}) == Element{1});

  auto vac = abelian_factor_quotient(amalgam({Z2, Z2}, Z2, {{{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}}));
  CHECK(vac.passed());
  CHECK(vac.parameters.at("vacuous_quotient") == true);

  FGAbelian ZC2(1, {2});
  auto t = amalgam({Z, ZC2}, Z, {{{3}}, {{1, 0}}});
  auto c3 = abelian_factor_quotient(t);
  CHECK(c3.passed());
  CHECK(invariants(c3.quotient) == std::vector<std::size_t>{3});
  auto sep = separate_element(t, AmalgamWord{{{0, {1}}}});
  REQUIRE(sep.separated());
  CHECK(sep.witness->engine == "abelian_factor");
  auto miss = separate_element(t, AmalgamWord{{{1, {0, 1}}}});
  CHECK_FALSE(miss.separated());
  CHECK(miss.attempts.back().engine == "oracle");

  CHECK(kind_of([&] { abelian_factor_quotient({ZC2, Z}, Z, {RepHom::from_generator_images(Z, ZC2, {{1, 0}}),
                                                         RepHom::from_generator_images(Z, Z, {{1}})}); }) ==
        ErrorKind::NotTorsionFree);
  auto C2 = groups::cyclic(2);
  auto S = groups::symmetric(3);
  CHECK(kind_of([&] {
          abelian_factor_quotient({Z, S}, C2, {RepHom::from_generator_images(C2, Z, {{0}}),
                                               RepHom::from_generator_images(C2, S, {el(S, {{1, 2}})})});
        }) == ErrorKind::EmbeddingTypeMismatch);
}

TEST_CASE("separate_element dispatch", "[witness]") {
  auto Q = groups::quaternion();
  auto qq = q8_over_minus_one();
  // identical copies over the same C: the double engine comes first
  auto r = separate_element(qq, AmalgamWord{{{0, el(Q, q_i)}}});
  REQUIRE(r.separated());
  CHECK(r.witness->engine == "double");

  auto D = groups::dihedral(4);
  auto dq = amalgam({D, Q}, groups::cyclic(2), {{el(D, {{1, 3}, {2, 4}})}, {el(Q, minus_one)}});
  auto c = separate_element(dq, AmalgamWord{{{1, el(Q, q_i)}}});
  REQUIRE(c.separated());
  CHECK(c.witness->engine == "central");
  CHECK(c.witness->target.at("order") == 32);

  auto spec = s3_double();
  auto S = spec->factor(0).finite();
  auto t = separate_element(spec, AmalgamWord{{{0, el(S, {{1, 2}})}}});
  REQUIRE(t.separated());
  CHECK(t.witness->engine == "double");
  CHECK(t.witness->image.at("label") == "(1 2)");

  // [x, y] with x = (0,(1 2)), y = (1,(1 2)) dies under psi and in every abelian quotient
  auto x = el(S, {{1, 2}});
  AmalgamWord comm{{{0, x}, {1, x}, {0, x}, {1, x}}};
  auto o = separate_element(spec, comm);
  REQUIRE(o.separated());
  CHECK(o.witness->engine == "oracle");
  CHECK(o.witness->target_derived_length >= 1);
  CHECK(o.attempts[0].outcome == "identity-image");

  CHECK(kind_of([&] { separate_element(spec, AmalgamWord{{{0, x}, {0, x}}}); }) == ErrorKind::IdentityWord);
}

TEST_CASE("witness results are consistent", "[witness][property]") {
  std::mt19937 rng(17);
  for (auto const& spec : {s3_double(), q8_over_minus_one()}) {
    for (int n = 0; n < 40; ++n) {
      AmalgamWord w;
      std::size_t len = 1 + rng() % 5;
      for (std::size_t k = 0; k < len; ++k) {
        std::size_t i = rng() % 2;
        w.syllables.push_back({i, GroupRep::of(static_cast<Index>(rng() % spec->factor(i).finite()->order()))});
      }
      if (is_identity(*spec, reduce(*spec, w))) continue;
      auto rep = separate_element(spec, w);
      REQUIRE(rep.separated());
      auto const& cert = *rep.attempts.back().certificate;
      auto img = (*cert.map)(w);
      CHECK(element_json(cert.map->target(), img) == rep.witness->image);
      CHECK_FALSE(cert.map->target().is_identity(img));
      CHECK(is_solvable(*cert.map->target().finite()));
      // deterministic
      CHECK(to_json(separate_element(spec, w), *spec, w) == to_json(rep, *spec, w));
    }
  }
}
