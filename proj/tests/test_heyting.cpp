#include <doctest.h>

#include "fixtures.hpp"
#include "sheafkit/heyting.hpp"

using namespace sheafkit;
using namespace fixtures;

namespace {

// Y(1) = {y}, Y(0) = {y·u} over the two-chain, mapped onto X = 1
struct ChainInstance {
  FiniteCategory c = two_chain();
  Presheaf y, x;
  PresheafMorphism f;

  ChainInstance() {
    y.cat = &c;
    y.fib = {1, 1};
    y.act.assign(c.n_arrows(), std::vector<int>{0});
    x = terminal_presheaf(c);
    f = hom_set(y, x)[0];
  }
};

}  // namespace

TEST_CASE("m_fiber unfolds the matching-pair definition") {
  ChainInstance inst;
  SievedFiber fib = m_fiber(inst.f, 1, 0);
  // Y^M_x = {(id1, y), (u, y·u)}
  CHECK(fib.total() == 2);
  CHECK(fib.index_of(1, inst.c.identity[1], 0) >= 0);
  CHECK(fib.index_of(0, inst.c.arrow_index("0<=1"), 0) >= 0);
  CHECK_THROWS_AS(m_fiber(inst.f, 1, 5), Error);
}

TEST_CASE("m_fiber over the point is the plain fiber tagged with id") {
  FiniteCategory c = point();
  Presheaf y = constant_presheaf(c, 3);
  Presheaf x = constant_presheaf(c, 2);
  PresheafMorphism f{y, x, {{0, 0, 1}}};
  REQUIRE(validate_morphism(f).empty());
  CHECK(m_fiber(f, 0, 0).total() == 2);
  CHECK(m_fiber(f, 0, 1).total() == 1);
}

TEST_CASE("empty fibers give the empty matching family") {
  FiniteCategory c = point();
  Presheaf y = empty_presheaf(c);
  Presheaf x = terminal_presheaf(c);
  PresheafMorphism f{y, x, {{}}};
  CHECK(m_fiber(f, 0, 0).total() == 0);
}

TEST_CASE("the fiber presheaf restricts by (f,y)·g = (fg, y·g)") {
  ChainInstance inst;
  Presheaf fp = fiber_presheaf(inst.f, 1, 0);
  CHECK(fp.fib[1] == 1);
  CHECK(fp.fib[0] == 1);
  CHECK(validate_presheaf(fp).empty());
}

TEST_CASE("forall_along endpoints") {
  ChainInstance inst;
  SUBCASE("A = Y gives everything") {
    CHECK(forall_along(inst.f, full_subpresheaf(inst.y)).member ==
          full_subpresheaf(inst.x).member);
  }
  SUBCASE("A = ∅ with inhabited fibers gives nothing") {
    CHECK(forall_along(inst.f, empty_subpresheaf(inst.y)).member ==
          empty_subpresheaf(inst.x).member);
  }
}

TEST_CASE("the Heyting adjunction C ≤ ∀_F A ⇔ F*C ≤ A, brute force") {
  std::mt19937 rng(31);
  for (const FiniteCategory& c : {two_chain(), z2_monoid()})
    for (int trial = 0; trial < 6; ++trial) {
      Presheaf y = random_presheaf(c, rng, 0, 2);
      Presheaf x = random_presheaf(c, rng, 1, 2);
      auto homs = hom_set(y, x);
      if (homs.empty()) continue;
      const auto& f = homs[rng() % homs.size()];
      for (const auto& a : all_subpresheaves(y)) {
        Subpresheaf fa = forall_along(f, a);
        CHECK(!subpresheaf_closure_witness(fa));
        for (const auto& cc : all_subpresheaves(x))
          CHECK(subpresheaf_leq(cc, fa) == subpresheaf_leq(pullback_sub(f, cc), a));
      }
    }
}

TEST_CASE("pi_functor over a discrete site counts products of fibers") {
  FiniteCategory c = point();
  // |F^{-1}(x)| = 2 with G-fibers of sizes 2 and 3 → |P_x| = 6
  Presheaf y = constant_presheaf(c, 2);
  Presheaf x = constant_presheaf(c, 1);
  PresheafMorphism f{y, x, {{0, 0}}};
  Presheaf b = constant_presheaf(c, 5);
  PresheafMorphism g{b, y, {{0, 0, 1, 1, 1}}};
  REQUIRE(validate_morphism(f).empty());
  REQUIRE(validate_morphism(g).empty());
  PiFunctorResult pi = pi_functor(f, g, SmallnessClass{});
  CHECK(pi.total.fib[0] == 6);
  CHECK(validate_presheaf(pi.total).empty());
  CHECK(validate_morphism(pi.to_base).empty());
}

TEST_CASE("pi_functor of an isomorphism is an isomorphism") {
  ChainInstance inst;
  PresheafMorphism g = identity_morphism(inst.y);
  PiFunctorResult pi = pi_functor(inst.f, g, SmallnessClass{});
  CHECK(naturally_isomorphic(pi.total, inst.x));
}

TEST_CASE("pi_functor keeps only natural sections on the two-chain") {
  // F: Y → X as in the chain instance; G: B → Y where B has two points over
  // y at 1 and one point over y·u at 0, with both points restricting to it.
  ChainInstance inst;
  const FiniteCategory& c = inst.c;
  Presheaf b;
  b.cat = &c;
  b.fib = {1, 2};
  b.act.assign(c.n_arrows(), {});
  b.act[c.identity[0]] = {0};
  b.act[c.identity[1]] = {0, 1};
  b.act[c.arrow_index("0<=1")] = {0, 0};
  REQUIRE(validate_presheaf(b).empty());
  PresheafMorphism g = hom_set(b, inst.y)[0];

  PiFunctorResult pi = pi_functor(inst.f, g, SmallnessClass{});
  // sections choose s(id1, y) ∈ {b0, b1} and s(u, y·u) = the point at 0;
  // naturality forces s(id1,y)·u = s(u, y·u), true for both — 2 sections;
  // without the naturality filter there would also be 2 (the constraint is
  // on values at 0), so check against the brute-force count of all natural
  // tuples: 2
  CHECK(pi.total.fib[1] == 2);
  CHECK(pi.total.fib[0] == 1);
  CHECK(validate_presheaf(pi.total).empty());

  SUBCASE("NotSmall for violated bounds") {
    CHECK_THROWS_WITH_AS(pi_functor(inst.f, g, SmallnessClass{0}),
                         doctest::Contains("NotSmall"), Error);
  }
}

TEST_CASE("pi_functor naturality filter prunes non-natural sections") {
  // over Z2 with the sign action: F: sign → 1; sections of G = id over
  // Y^M_x must commute with the involution
  FiniteCategory z2 = z2_monoid();
  Presheaf sign;
  sign.cat = &z2;
  sign.fib = {2};
  sign.act = {{0, 1}, {1, 0}};
  Presheaf one = terminal_presheaf(z2);
  PresheafMorphism f = hom_set(sign, one)[0];
  PresheafMorphism g = identity_morphism(sign);
  PiFunctorResult pi = pi_functor(f, g, SmallnessClass{});
  // Y^M_x = {(id, y0), (id, y1), (s, y0), (s, y1)}; a natural section is
  // determined by s(id, y0) and equivariance: 1 choice each for the rest,
  // but the value at (id, y0) can be y0 or... G = id forces s(f, y) = y.
  CHECK(pi.total.fib[0] == 1);
}

TEST_CASE("forall along a small map sends small monos to small monos") {
  // monos of presheaves have fibers of size ≤ 1, so with a fiber-cardinality
  // class any bound ≥ 1 admits them; the content of the check is that the
  // universal quantification of a subobject is again a subobject
  std::mt19937 rng(61);
  SmallnessClass bound1{1};
  for (const FiniteCategory& c : {two_chain(), z2_monoid()})
    for (int trial = 0; trial < 5; ++trial) {
      Presheaf y = random_presheaf(c, rng, 1, 2);
      Presheaf x = random_presheaf(c, rng, 1, 2);
      auto homs = hom_set(y, x);
      if (homs.empty()) continue;
      const auto& f = homs[rng() % homs.size()];
      if (!pointwise_small(f, SmallnessClass{2})) continue;
      for (const auto& a : all_subpresheaves(y)) {
        Subpresheaf fa = forall_along(f, a);
        CHECK(!subpresheaf_closure_witness(fa));
        // the inclusion of the image subobject is small for any bound ≥ 1
        int worst = 0;
        for (int at = 0; at < c.n_objects(); ++at)
          worst = std::max(worst, fa.member[at].count() > 0 ? 1 : 0);
        CHECK(bound1.admits(worst));
      }
    }
}
