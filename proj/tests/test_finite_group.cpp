#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "brute.hpp"
#include "rsolv/finite_group.hpp"
#include "rsolv/small_groups.hpp"

using namespace rsolv;

namespace {

std::set<Index> as_set(Subgroup const& H) { return {H.elements().begin(), H.elements().end()}; }

std::vector<GroupPtr> catalog() {
  return {groups::cyclic(1), groups::cyclic(6),   groups::symmetric(3), groups::symmetric(4),
          groups::quaternion(), groups::dihedral(4), groups::alternating(4),
          groups::dihedral(5), groups::cyclic(8)};
}

}  // namespace

TEST_CASE("group_from_permutations builds the expected orders", "[finite-group]") {
  using perm::from_cycles;
  auto S3 = group_from_permutations(3, {from_cycles(3, {{1, 2}}), from_cycles(3, {{1, 2, 3}})});
  CHECK(S3->order() == 6);
  CHECK(S3->identity() == 0);

  auto triv = group_from_permutations(1, {});
  CHECK(triv->order() == 1);

  auto D4 = group_from_permutations(4, {from_cycles(4, {{1, 2, 3, 4}}), from_cycles(4, {{1, 3}})});
  CHECK(D4->order() == 8);
  CHECK(brute::closure(*D4, {1, 2}).size() == 8);
}

TEST_CASE("group_from_permutations error paths", "[finite-group]") {
  CHECK_THROWS_MATCHES(group_from_permutations(3, {Permutation{0, 0, 1}}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](Error const& e) { return e.kind() == ErrorKind::NotAPermutation; }));
  Limits small;
  small.max_order = 10;
  CHECK_THROWS_MATCHES(groups::symmetric(4, small), Error,
                       Catch::Matchers::Predicate<Error>([](Error const& e) {
                         return e.kind() == ErrorKind::ClosureCapExceeded;
                       }));
}

TEST_CASE("group axioms hold on every constructed group", "[finite-group][property]") {
  for (auto const& G : catalog()) {
    CHECK(G->verify_associativity_exhaustive());
    for (Index x = 0; x < G->order(); ++x) {
      CHECK(G->mul(G->identity(), x) == x);
      CHECK(G->mul(x, G->identity()) == x);
      CHECK(G->mul(x, G->inv(x)) == G->identity());
    }
  }
}

TEST_CASE("from_table rejects a non-associative Latin square", "[finite-group]") {
  // loop of order 5 with identity 0 that is not a group
  std::vector<Index> t = {0, 1, 2, 3, 4,  //
                          1, 0, 3, 4, 2,  //
                          2, 4, 0, 1, 3,  //
                          3, 2, 4, 0, 1,  //
                          4, 3, 1, 2, 0};
  CHECK_THROWS_AS(FiniteGroup::from_table(5, t, {1, 2}), Error);
}

TEST_CASE("subgroup_closure", "[finite-group]") {
  auto S3 = groups::symmetric(3);
  Index r = groups::element(*S3, {{1, 2, 3}});
  CHECK(subgroup_closure(*S3, {r}).size() == 3);
  CHECK(subgroup_closure(*S3, std::span<Index const>{}).size() == 1);
  Index a = groups::element(*S3, {{1, 2}}), b = groups::element(*S3, {{1, 3}});
  CHECK(subgroup_closure(*S3, {a, b}).size() == 6);
  CHECK_THROWS_AS(subgroup_closure(*S3, {99}), Error);
}

TEST_CASE("normal_closure agrees with conjugate-and-close", "[finite-group]") {
  auto S3 = groups::symmetric(3);
  Index r = groups::element(*S3, {{1, 2, 3}});
  CHECK(normal_closure(*S3, {r}).size() == 3);
  CHECK(normal_closure(*S3, {S3->identity()}).size() == 1);

  auto S4 = groups::symmetric(4);
  Index v = groups::element(*S4, {{1, 2}, {3, 4}});
  auto K = normal_closure(*S4, {v});
  CHECK(K.size() == 4);
  CHECK(as_set(K) == brute::normal_closure(*S4, {v}));

  Index t = groups::element(*S4, {{1, 2}});
  CHECK(as_set(normal_closure(*S4, {t})) == brute::normal_closure(*S4, {t}));
}

TEST_CASE("commutator_subgroup matches enumeration of all commutators", "[finite-group]") {
  auto S3 = groups::symmetric(3);
  auto whole = whole_group(*S3);
  auto D = commutator_subgroup(*S3, whole, whole);
  CHECK(D.size() == 3);
  CHECK(as_set(D) == brute::commutator(*S3, brute::all(*S3), brute::all(*S3)));

  auto C6 = groups::cyclic(6);
  CHECK(commutator_subgroup(*C6, whole_group(*C6), whole_group(*C6)).size() == 1);

  auto Q8 = groups::quaternion();
  auto Dq = commutator_subgroup(*Q8, whole_group(*Q8), whole_group(*Q8));
  CHECK(Dq.size() == 2);
  CHECK(as_set(Dq) == brute::commutator(*Q8, brute::all(*Q8), brute::all(*Q8)));
}

TEST_CASE("commutator of two different subgroups", "[finite-group]") {
  auto S4 = groups::symmetric(4);
  auto A4 = normal_closure(*S4, {groups::element(*S4, {{1, 2, 3}})});
  auto whole = whole_group(*S4);
  auto got = commutator_subgroup(*S4, whole, A4);
  CHECK(as_set(got) == brute::commutator(*S4, brute::all(*S4), as_set(A4)));
  CHECK(got.size() == 12);
}

TEST_CASE("derived and lower central series", "[finite-group]") {
  auto S4 = groups::symmetric(4);
  CHECK(series(*S4, SeriesKind::derived).orders() == std::vector<std::size_t>{24, 12, 4, 1});
  CHECK(brute::derived_orders(*S4) == std::vector<std::size_t>{24, 12, 4, 1});
  CHECK(series(*groups::cyclic(6), SeriesKind::derived).orders() == std::vector<std::size_t>{6, 1});
  CHECK(series(*groups::quaternion(), SeriesKind::derived).orders() ==
        std::vector<std::size_t>{8, 2, 1});
  CHECK(series(*S4, SeriesKind::lower_central).orders() == std::vector<std::size_t>{24, 12});
  CHECK(series(*groups::dihedral(4), SeriesKind::lower_central).orders() ==
        std::vector<std::size_t>{8, 2, 1});
}

TEST_CASE("derived terms are normal in the whole group", "[finite-group][property]") {
  for (auto const& G : catalog()) {
    auto chain = series(*G, SeriesKind::derived);
    for (std::size_t k = 1; k < chain.terms.size(); ++k) {
      CHECK(chain.terms[k].is_subset_of(chain.terms[k - 1]));
      auto N = as_set(chain.terms[k]);
      for (auto x : N)
        for (Index g = 0; g < G->order(); ++g) CHECK(N.count(G->conj(x, g)) == 1);
    }
    CHECK(chain.orders() == brute::derived_orders(*G));
  }
}

TEST_CASE("solvable and nilpotent predicates", "[finite-group]") {
  auto S4 = groups::symmetric(4);
  CHECK(is_solvable(*S4));
  CHECK_FALSE(is_nilpotent(*S4));
  CHECK(is_solvable(*groups::quaternion()));
  CHECK(is_nilpotent(*groups::quaternion()));
  CHECK(is_solvable(*groups::cyclic(1)));
  CHECK(is_nilpotent(*groups::cyclic(1)));
  CHECK_FALSE(is_solvable(*groups::alternating(5)));
  CHECK(derived_length(*S4) == 3u);
  CHECK_FALSE(derived_length(*groups::alternating(5)).has_value());
}

TEST_CASE("center", "[finite-group]") {
  for (auto const& G : catalog()) CHECK(as_set(center(*G)) == brute::center(*G));
  CHECK(center(*groups::quaternion()).size() == 2);
  CHECK(center(*groups::cyclic(6)).size() == 6);
  CHECK(center(*groups::symmetric(3)).size() == 1);
}

TEST_CASE("frattini subgroup", "[finite-group]") {
  auto Q8 = groups::quaternion();
  CHECK(frattini(*Q8).size() == 2);
  CHECK(as_set(frattini(*Q8)) == brute::frattini(*Q8));
  auto V4 = direct_product({groups::cyclic(2), groups::cyclic(2)}).group;
  CHECK(maximal_subgroups(*V4).size() == 3);
  CHECK(frattini(*V4).size() == 1);
  CHECK(frattini(*groups::cyclic(1)).size() == 1);
  CHECK(frattini(*groups::cyclic(8)).size() == 4);
  CHECK(as_set(frattini(*groups::symmetric(4))) == brute::frattini(*groups::symmetric(4)));

  Limits tight;
  tight.lattice_max_order = 4;
  CHECK_THROWS_AS(frattini(*Q8, tight), Error);
}

TEST_CASE("quotient_group", "[finite-group]") {
  auto S3 = groups::symmetric(3);
  auto A3 = normal_closure(*S3, {groups::element(*S3, {{1, 2, 3}})});
  auto q = quotient_group(S3, A3);
  CHECK(q.group->order() == 2);

  auto id = quotient_group(S3, trivial_subgroup(*S3));
  CHECK(id.group->order() == 6);
  for (Index x = 0; x < 6; ++x)
    for (Index y = 0; y < 6; ++y) CHECK(id.group->mul(x, y) == S3->mul(x, y));

  auto Q8 = groups::quaternion();
  auto qq = quotient_group(Q8, center(*Q8));
  CHECK(qq.group->order() == 4);
  CHECK(qq.group->is_abelian());
  CHECK(abelian_group_invariants(*qq.group) == std::vector<std::size_t>{2, 2});

  auto H = subgroup_closure(*S3, {groups::element(*S3, {{1, 2}})});
  CHECK_THROWS_MATCHES(quotient_group(S3, H), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](Error const& e) { return e.kind() == ErrorKind::NotNormal; }));
}

TEST_CASE("abelian_invariants", "[finite-group]") {
  CHECK(abelian_invariants(groups::symmetric(3)) == std::vector<std::size_t>{2});
  CHECK(abelian_invariants(groups::quaternion()) == std::vector<std::size_t>{2, 2});
  CHECK(abelian_invariants(groups::cyclic(6)) == std::vector<std::size_t>{6});
  CHECK(abelian_invariants(groups::cyclic(1)).empty());
  CHECK(abelian_invariants(groups::alternating(4)) == std::vector<std::size_t>{3});
  auto P = direct_product({groups::cyclic(2), groups::cyclic(4), groups::cyclic(6)}).group;
  CHECK(abelian_invariants(P) == std::vector<std::size_t>{2, 2, 12});
}

TEST_CASE("abelian invariants of G equal those of G/[G,G]", "[finite-group][property]") {
  for (auto const& G : catalog()) {
    auto chain = series(*G, SeriesKind::derived);
    if (chain.terms.size() < 2) continue;
    auto Q = quotient_group(G, chain.terms[1]);
    CHECK(abelian_invariants(Q.group) == abelian_invariants(G));
  }
}

TEST_CASE("direct_product", "[finite-group]") {
  auto P = direct_product({groups::cyclic(2), groups::cyclic(3)});
  CHECK(P.group->order() == 6);
  bool has_order_6 = false;
  for (Index x = 0; x < 6; ++x) has_order_6 |= P.group->element_order(x) == 6;
  CHECK(has_order_6);

  auto S3 = groups::symmetric(3);
  auto T = direct_product({S3, groups::cyclic(1)});
  CHECK(T.group->order() == 6);
  for (Index x = 0; x < 6; ++x)
    for (Index y = 0; y < 6; ++y) CHECK(T.group->mul(x, y) == S3->mul(x, y));

  auto SS = direct_product({S3, S3});
  CHECK(SS.group->order() == 36);
  for (std::size_t i = 0; i < 2; ++i)
    for (Index x = 0; x < 6; ++x) CHECK(SS.projections[i](SS.injections[i](x)) == x);

  Limits small;
  small.max_order = 30;
  CHECK_THROWS_AS(direct_product({S3, S3}, small), Error);
}

TEST_CASE("commutator subgroup inside Frattini for nilpotent groups", "[finite-group][property]") {
  for (auto const& G : catalog()) {
    if (!is_nilpotent(*G)) continue;
    auto d2 = derived_term(*G, 2);
    CHECK(d2.is_subset_of(frattini(*G)));
  }
  auto S3 = groups::symmetric(3);
  CHECK_FALSE(derived_term(*S3, 2).is_subset_of(frattini(*S3)));
}

TEST_CASE("FiniteHom verification", "[finite-group]") {
  auto S3 = groups::symmetric(3);
  auto C2 = groups::cyclic(2);
  std::vector<Index> sign(6);
  for (Index x = 0; x < 6; ++x) sign[x] = subgroup_closure(*S3, {groups::element(*S3, {{1, 2, 3}})}).contains(x) ? 0 : 1;
  FiniteHom h(S3, C2, sign);
  CHECK(h.kernel().size() == 3);
  CHECK_FALSE(h.is_injective());
  std::vector<Index> bad(6, 1);
  CHECK_THROWS_AS(FiniteHom(S3, C2, bad), Error);
}

TEST_CASE("random permutation groups satisfy closure and Light's test", "[finite-group][property]") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t degree = 3 + rng() % 3;
    std::vector<Permutation> gens;
    for (int k = 0; k < 2; ++k) {
      Permutation p = perm::identity(degree);
      std::shuffle(p.begin(), p.end(), rng);
      gens.push_back(p);
    }
    auto G = group_from_permutations(degree, gens);
    CHECK(G->verify_associativity_exhaustive());
    std::set<Index> seeds(G->generators().begin(), G->generators().end());
    CHECK(brute::closure(*G, seeds).size() == G->order());
  }
}
