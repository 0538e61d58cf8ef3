#include <catch_amalgamated.hpp>

#include <random>

#include "rsolv/amalgam.hpp"
#include "rsolv/oracle.hpp"
#include "rsolv/small_groups.hpp"

using namespace rsolv;

namespace {

Element el(GroupPtr const& G, std::vector<std::vector<std::uint32_t>> cycles) {
  return GroupRep::of(groups::element(*G, cycles));
}

RepHom embed(GroupRep src, GroupRep dst, std::vector<Element> images) {
  return RepHom::from_generator_images(std::move(src), std::move(dst), images);
}

// S3 * S3 amalgamated over C3 = <(1 2 3)>, both sides the identity embedding.
AmalgamPtr s3_over_c3() {
  auto S = groups::symmetric(3);
  auto C = groups::cyclic(3);
  auto e = embed(C, S, {el(S, {{1, 2, 3}})});
  return validate_spec({S, S}, C, {e, e});
}

AmalgamPtr d4_over_center() {
  auto D = groups::dihedral(4);
  auto C = groups::cyclic(2);
  auto z = el(D, {{1, 3}, {2, 4}});
  auto e = embed(C, D, {z});
  return validate_spec({D, D, D}, C, {e, e, e});
}

AmalgamPtr z2_over_even() {
  FGAbelian A(2, {});
  FGAbelian Z(1, {});
  auto e = embed(Z, A, {{2, 0}});
  auto f = embed(Z, A, {{0, 3}});
  return validate_spec({A, A}, Z, {e, f});
}

AmalgamWord random_word(AmalgamSpec const& spec, std::mt19937& rng, std::size_t max_len = 8) {
  AmalgamWord w;
  std::size_t len = rng() % (max_len + 1);
  for (std::size_t k = 0; k < len; ++k) {
    std::size_t i = rng() % spec.num_factors();
    auto const& A = spec.factor(i);
    if (A.is_finite_group()) {
      w.syllables.push_back({i, GroupRep::of(static_cast<Index>(rng() % A.finite()->order()))});
    } else {
      Element x(A.abelian().width());
      for (std::size_t j = 0; j < x.size(); ++j) {
        auto m = A.abelian().modulus(j);
        x[j] = m ? static_cast<std::int64_t>(rng() % m) : static_cast<std::int64_t>(rng() % 11) - 5;
      }
      w.syllables.push_back({i, x});
    }
  }
  return w;
}

AmalgamWord concat(AmalgamWord a, AmalgamWord const& b) {
  a.syllables.insert(a.syllables.end(), b.syllables.begin(), b.syllables.end());
  return a;
}

void check_normal_form_shape(AmalgamSpec const& spec, NormalForm const& nf) {
  CHECK(spec.amalgam().contains(nf.head));
  for (std::size_t k = 0; k < nf.tail.size(); ++k) {
    auto const& s = nf.tail[k];
    if (k) CHECK(s.factor != nf.tail[k - 1].factor);
    CHECK_FALSE(spec.factor(s.factor).is_identity(s.element));
    auto f = spec.factorize(s.factor, s.element);
    CHECK(f.t == s.element);
    CHECK(spec.amalgam().is_identity(f.c));
  }
}

void engine_properties(AmalgamPtr const& spec, std::uint32_t seed, int trials) {
  std::mt19937 rng(seed);
  for (int n = 0; n < trials; ++n) {
    auto u = random_word(*spec, rng), v = random_word(*spec, rng), w = random_word(*spec, rng);
    auto nu = reduce(*spec, u);
    check_normal_form_shape(*spec, nu);
    // independent rewriting agrees
    CHECK(nu == oracle::oracle_reduce(*spec, u));
    // normal form of a normal form's word is itself
    CHECK(reduce(*spec, word_of(*spec, nu)) == nu);
    // associativity
    auto nv = reduce(*spec, v), nw = reduce(*spec, w);
    CHECK(multiply(*spec, multiply(*spec, nu, nv), nw) == multiply(*spec, nu, multiply(*spec, nv, nw)));
    CHECK(multiply(*spec, nu, nv) == reduce(*spec, concat(u, v)));
    // inverses
    CHECK(is_identity(*spec, multiply(*spec, nu, invert(*spec, nu))));
    CHECK(is_identity(*spec, reduce(*spec, concat(invert_word(*spec, u), u))));
  }
}

}  // namespace

TEST_CASE("validate_spec transversals", "[amalgam]") {
  auto spec = s3_over_c3();
  CHECK(spec->transversal(0).size() == 2);
  CHECK(spec->transversal(1).size() == 2);
  CHECK(spec->transversal(0)[0] == GroupRep::of(0));

  auto S = groups::symmetric(3);
  auto T = groups::cyclic(1);
  auto triv = embed(T, S, {});
  auto free_prod = validate_spec({S, S}, T, {triv, triv});
  CHECK(free_prod->transversal(0).size() == 6);
  CHECK(free_prod->amalgam_is_trivial());
}

TEST_CASE("validate_spec errors", "[amalgam][errors]") {
  auto S = groups::symmetric(3);
  auto C4 = groups::cyclic(4);
  try {
    // C4 -> S3 sending the generator to a transposition has a kernel
    auto e = embed(C4, S, {el(S, {{1, 2}})});
    validate_spec({S}, C4, {e});
    FAIL("expected NotInjective");
  } catch (Error const& err) {
    CHECK(err.kind() == ErrorKind::NotInjective);
  }

  try {
    embedding_from_images(C4, S, {el(S, {{1, 2, 3}})});
    FAIL("expected NotInjective");
  } catch (Error const& err) {
    CHECK(err.kind() == ErrorKind::NotInjective);
  }

  auto C3 = groups::cyclic(3);
  auto e = embed(C3, S, {el(S, {{1, 2, 3}})});
  CHECK_THROWS_MATCHES(validate_spec({S, S}, C3, {e}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](Error const& x) { return x.kind() == ErrorKind::IncompatibleAmalgam; }));
  CHECK_THROWS_AS(validate_spec({}, C3, {}), Error);

  // mixed factor types need a trivial amalgamated subgroup
  FGAbelian Z(1, {});
  auto zz = embed(Z, Z, {{3}});
  auto to_s = embed(Z, S, {el(S, {{1, 2, 3}})});
  CHECK_THROWS_AS(validate_spec({Z, S}, Z, {zz, to_s}), Error);

  // torsion in an abelian amalgamated subgroup is rejected
  FGAbelian T(0, {2});
  FGAbelian A(1, {2});
  auto t = embed(T, A, {{0, 1}});
  try {
    validate_spec({A, A}, T, {t, t});
    FAIL("expected IncompatibleAmalgam");
  } catch (Error const& err) {
    CHECK(err.kind() == ErrorKind::IncompatibleAmalgam);
  }

  // embedding of Z that is not injective
  auto zero = embed(Z, Z, {{0}});
  try {
    validate_spec({Z, Z}, Z, {zz, zero});
    FAIL("expected NotInjective");
  } catch (Error const& err) {
    CHECK(err.kind() == ErrorKind::NotInjective);
  }
}

TEST_CASE("mixed factor types over a trivial subgroup", "[amalgam]") {
  auto S = groups::symmetric(3);
  auto T = groups::cyclic(1);
  FGAbelian Z(1, {});
  auto spec = validate_spec({Z, S}, T, {embed(T, Z, {}), embed(T, S, {})});
  engine_properties(spec, 41, 100);
  auto nf = reduce(*spec, {{{0, {2}}, {0, {-2}}, {1, el(S, {{1, 2}})}}});
  CHECK(nf.tail.size() == 1);
}

TEST_CASE("reduce examples", "[amalgam]") {
  auto spec = s3_over_c3();
  auto S = spec->factor(0).finite();
  auto t = el(S, {{1, 2}});
  auto r = el(S, {{1, 2, 3}});
  // (1 2 3) lies in C, so the last syllable is absorbed by its neighbour
  AmalgamWord w{{{0, t}, {1, t}, {0, r}}};
  auto nf = reduce(*spec, w);
  CHECK(nf == oracle::oracle_reduce(*spec, w));
  REQUIRE(nf.tail.size() == 2);
  CHECK(nf.tail[0].factor == 0);
  CHECK(nf.tail[1].factor == 1);
  auto three = reduce(*spec, {{{0, t}, {1, t}, {0, t}}});
  CHECK(three.tail.size() == 3);

  // (1 2 3) lies in C on both sides
  auto c = reduce(*spec, {{{0, r}}});
  CHECK(c.tail.empty());
  CHECK(c.head == GroupRep::of(groups::element(*groups::cyclic(3), {{1, 2, 3}})));
  CHECK(words_equal(*spec, {{{0, r}}}, {{{1, r}}}));
  CHECK(is_identity(*spec, reduce(*spec, {})));
  CHECK(is_identity(*spec, reduce(*spec, {{{0, t}, {0, t}}})));
  CHECK_FALSE(words_equal(*spec, {{{0, t}}}, {{{1, t}}}));

  try {
    reduce(*spec, {{{2, t}}});
    FAIL("expected ElementOutOfRange");
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::ElementOutOfRange);
  }
  CHECK_THROWS_AS(reduce(*spec, {{{0, {6}}}}), Error);
}

TEST_CASE("engine agrees with rewriting and is a group", "[amalgam][property]") {
  engine_properties(s3_over_c3(), 1, 200);
  engine_properties(d4_over_center(), 2, 200);
  engine_properties(z2_over_even(), 3, 200);
  auto Q = groups::quaternion();
  auto C4 = groups::cyclic(4);
  auto i = el(Q, {{1, 2, 3, 4}, {5, 6, 7, 8}});
  auto j = el(Q, {{1, 5, 3, 7}, {2, 8, 4, 6}});
  engine_properties(validate_spec({Q, Q}, C4, {embed(C4, Q, {i}), embed(C4, Q, {j})}), 4, 200);
}

TEST_CASE("embedding fidelity and amalgam coherence", "[amalgam][property]") {
  for (auto const& spec : {s3_over_c3(), d4_over_center()}) {
    for (auto const& c : spec->amalgam_elements()) {
      NormalForm want{c, {}};
      for (std::size_t i = 0; i < spec->num_factors(); ++i) {
        CHECK(reduce(*spec, {{{i, spec->embedding(i)(c)}}}) == want);
        for (std::size_t j = 0; j < spec->num_factors(); ++j)
          CHECK(words_equal(*spec, {{{i, spec->embedding(i)(c)}}}, {{{j, spec->embedding(j)(c)}}}));
      }
    }
  }
  auto spec = z2_over_even();
  for (std::int64_t c = -4; c <= 4; ++c) {
    CHECK(reduce(*spec, {{{0, {2 * c, 0}}}}) == NormalForm{{c}, {}});
    CHECK(words_equal(*spec, {{{0, {2 * c, 0}}}}, {{{1, {0, 3 * c}}}}));
  }
}

TEST_CASE("abelian factor transversal", "[amalgam]") {
  auto spec = z2_over_even();
  auto f = spec->factorize(0, {3, 1});
  CHECK(f.c == Element{1});
  CHECK(f.t == Element{1, 1});
  auto g = spec->factorize(0, {-3, 5});
  CHECK(g.c == Element{-2});
  CHECK(g.t == Element{1, 5});
  auto nf = reduce(*spec, {{{0, {3, 1}}, {1, {1, 0}}}});
  REQUIRE(nf.tail.size() == 2);
  // (3,1) in factor 0, (1,0) in factor 1: factor 1 is already a representative
  CHECK(nf.tail[1].element == Element{1, 0});
  CHECK(nf.head == Element{1});
  CHECK(nf.tail[0].element == Element{1, 1});

  // torsion in a factor
  FGAbelian A(1, {4});
  FGAbelian Z(1, {});
  auto e = embed(Z, A, {{2, 2}});
  auto s = validate_spec({A, A}, Z, {e, e});
  engine_properties(s, 9, 150);
}

TEST_CASE("induced homomorphisms", "[amalgam]") {
  auto spec = s3_over_c3();
  auto S = spec->factor(0).finite();
  RepHom id = embed(S, S, {GroupRep::of(S->generators()[0]), GroupRep::of(S->generators()[1])});
  auto h = induce_hom(spec, S, {id, id});
  auto t = el(S, {{1, 2}});
  CHECK(h(AmalgamWord{{{0, t}, {1, t}}}) == GroupRep::of(0));
  std::mt19937 rng(8);
  for (int n = 0; n < 100; ++n) {
    auto w = random_word(*spec, rng);
    CHECK(h(w) == h(reduce(*spec, w)));
  }
  // conjugation by (1 2) inverts (1 2 3), so it disagrees with the identity on C
  auto conj = FiniteHom::from_generator_images(
      S, S, {S->conj(S->generators()[0], groups::element(*S, {{1, 2}})),
             S->conj(S->generators()[1], groups::element(*S, {{1, 2}}))});
  try {
    induce_hom(spec, S, {id, RepHom::from_finite(conj)});
    FAIL("expected DisagreeOnAmalgam");
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::DisagreeOnAmalgam);
  }
}

TEST_CASE("generalized central product", "[amalgam]") {
  auto D = groups::dihedral(4);
  auto C = groups::cyclic(2);
  auto z = groups::element(*D, {{1, 3}, {2, 4}});
  auto e = FiniteHom::from_generator_images(C, D, {z});
  auto cp = build_generalized_central_product({D, D}, C, {e, e});
  CHECK(cp.group->order() == 32);
  CHECK(cp.mu_injective == std::vector<bool>{true, true});
  CHECK(is_solvable(*cp.group));

  auto Q = groups::quaternion();
  auto zq = groups::element(*Q, {{1, 3}, {2, 4}, {5, 7}, {6, 8}});
  auto eq = FiniteHom::from_generator_images(C, Q, {zq});
  auto qq = build_generalized_central_product({Q, Q}, C, {eq, eq});
  CHECK(qq.group->order() == 32);

  // three factors: 8^3 / 4
  auto d3 = build_generalized_central_product({D, D, D}, C, {e, e, e});
  CHECK(d3.group->order() == 128);

  auto S = groups::symmetric(3);
  auto C3 = groups::cyclic(3);
  auto r = FiniteHom::from_generator_images(C3, S, {groups::element(*S, {{1, 2, 3}})});
  try {
    build_generalized_central_product({S, S}, C3, {r, r});
    FAIL("expected NotCentral");
  } catch (Error const& err) {
    CHECK(err.kind() == ErrorKind::NotCentral);
  }
}

TEST_CASE("identified direct quotient", "[amalgam]") {
  auto Q = groups::quaternion();
  auto zq = groups::element(*Q, {{1, 3}, {2, 4}, {5, 7}, {6, 8}});
  CHECK(identified_direct_quotient(Q, Q, zq, zq).group->order() == 32);
  auto S = groups::symmetric(3);
  CHECK(identified_direct_quotient(S, S, 0, 0).group->order() == 36);
  auto r = groups::element(*S, {{1, 2, 3}});
  auto iq = identified_direct_quotient(S, S, r, r);
  CHECK(iq.group->order() == 4);
  CHECK(iq.identified.size() == 9);
  CHECK_THROWS_AS(identified_direct_quotient(S, S, 6, 0), Error);
}
