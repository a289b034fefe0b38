#include <doctest.h>

#include "fixtures.hpp"
#include "sheafkit/power.hpp"

using namespace sheafkit;
using namespace fixtures;

TEST_CASE("power object over the point is the powerset") {
  FiniteCategory c = point();
  Presheaf x = constant_presheaf(c, 2);
  PowerObject pw = power_object(x, SmallnessClass{});
  CHECK(pw.psh.fib[0] == 4);
  CHECK(validate_presheaf(pw.psh).empty());
}

TEST_CASE("power object of the empty presheaf is a point everywhere") {
  FiniteCategory c = two_chain();
  Presheaf x = empty_presheaf(c);
  PowerObject pw = power_object(x, SmallnessClass{});
  CHECK(pw.psh.fib[0] == 1);
  CHECK(pw.psh.fib[1] == 1);
}

TEST_CASE("power object fiber counts subpresheaves of yc × X") {
  FiniteCategory c = two_chain();
  Presheaf x;  // X(1) = {x1}, X(0) = {x0}, x1·u = x0
  x.cat = &c;
  x.fib = {1, 1};
  x.act.assign(c.n_arrows(), std::vector<int>{0});
  REQUIRE(validate_presheaf(x).empty());
  PowerObject pw = power_object(x, SmallnessClass{});
  // independent count: subpresheaves of y1 × X directly
  Presheaf prod = product_presheaf(representable(c, 1), x);
  CHECK(pw.psh.fib[1] == static_cast<int>(all_subpresheaves(prod).size()));
  CHECK(pw.psh.fib[1] == 3);
  CHECK(pw.psh.fib[0] == 2);
  CHECK(validate_presheaf(pw.psh).empty());
}

TEST_CASE("membership relation is a subpresheaf") {
  FiniteCategory c = two_chain();
  Presheaf x;
  x.cat = &c;
  x.fib = {1, 2};
  x.act.assign(c.n_arrows(), {});
  x.act[c.identity[0]] = {0};
  x.act[c.identity[1]] = {0, 1};
  x.act[c.arrow_index("0<=1")] = {0, 0};
  PowerObject pw = power_object(x, SmallnessClass{});
  CHECK(!subpresheaf_closure_witness(pw.membership));
}

TEST_CASE("classifying property: unique classifier per small relation") {
  std::mt19937 rng(5);
  for (const FiniteCategory& c : {two_chain(), z2_monoid()}) {
    Presheaf x = random_presheaf(c, rng, 1, 2);
    Presheaf y = random_presheaf(c, rng, 1, 2);
    PowerObject pw = power_object(x, SmallnessClass{});
    Presheaf prod = product_presheaf(x, y);
    auto homs = hom_set(y, pw.psh);
    for (const auto& r : all_subpresheaves(prod)) {
      auto rho = classify(pw, y, r, SmallnessClass{});
      REQUIRE(rho.has_value());
      CHECK(validate_morphism(*rho).empty());
      CHECK(classified_relation(pw, y, *rho).member == r.member);
      // uniqueness by exhaustive hom enumeration
      int classifiers = 0;
      for (const auto& h : homs)
        if (classified_relation(pw, y, h).member == r.member) ++classifiers;
      CHECK(classifiers == 1);
    }
  }
}

TEST_CASE("bounded smallness prunes large slices") {
  FiniteCategory c = point();
  Presheaf x = constant_presheaf(c, 2);
  PowerObject pw = power_object(x, SmallnessClass{1});
  // subsets of a 2-element set with ≤ 1 element: ∅, {0}, {1}
  CHECK(pw.psh.fib[0] == 3);
}

TEST_CASE("sheaf power object under the trivial topology is the presheaf one") {
  FiniteCategory c = two_chain();
  Topology t = trivial_topology(c);
  Presheaf x;
  x.cat = &c;
  x.fib = {1, 2};
  x.act.assign(c.n_arrows(), {});
  x.act[c.identity[0]] = {0};
  x.act[c.identity[1]] = {0, 1};
  x.act[c.arrow_index("0<=1")] = {0, 0};
  SheafPowerObject sp = sheaf_power_object(x, t, SmallnessClass{});
  CHECK(sp.psh.fib == sp.underlying.psh.fib);
}

TEST_CASE("sheaf power object identifies dense-sieve variants on the two-chain") {
  FiniteCategory c = two_chain();
  Topology dense = dense_topology(c);
  Presheaf x = terminal_presheaf(c);
  PowerObject pw = power_object(x, SmallnessClass{});
  SheafPowerObject sp = sheaf_power_object(x, dense, SmallnessClass{});
  // subpresheaves of y1 × 1 at stage 1: ∅, {u-pair}, all — the last two
  // differ only above the dense sieve {u}, so they are identified
  REQUIRE(pw.psh.fib[1] == 3);
  CHECK(sp.psh.fib[1] == 2);

  // independent brute-force check of the identification at stage 1, straight
  // from the bisimulation clauses
  int merged = 0;
  for (int i = 0; i < pw.psh.fib[1]; ++i)
    for (int j = i + 1; j < pw.psh.fib[1]; ++j) {
      bool related = true;
      for (int dir = 0; dir < 2 && related; ++dir) {
        int from = dir == 0 ? i : j, to = dir == 0 ? j : i;
        for (int d = 0; d < c.n_objects() && related; ++d)
          for (std::size_t pidx = 0; pidx < pw.pairs[1][d].size(); ++pidx) {
            if (!pw.decode[1][from][d].test(static_cast<int>(pidx))) continue;
            auto [f, xe] = pw.pairs[1][d][pidx];
            Bitset sieve(c.n_arrows());
            for (int g : c.arrows_into[d]) {
              int fg = c.table[f][g];
              for (std::size_t q = 0; q < pw.pairs[1][c.dom(g)].size(); ++q)
                if (pw.pairs[1][c.dom(g)][q] ==
                        std::make_pair(fg, x.restrict(xe, g)) &&
                    pw.decode[1][to][c.dom(g)].test(static_cast<int>(q)))
                  sieve.set(g);
            }
            if (!dense.covers(d, sieve)) related = false;
          }
      }
      if (related) ++merged;
    }
  CHECK(merged == 1);
}

TEST_CASE("sheaf power object membership uses the covering clause") {
  FiniteCategory c = two_chain();
  Topology dense = dense_topology(c);
  Presheaf x = terminal_presheaf(c);
  SheafPowerObject sp = sheaf_power_object(x, dense, SmallnessClass{});
  // at stage 1 the class of the u-only subpresheaf must contain the point,
  // since the membership sieve {u} is dense-covering
  int members = 0;
  for (int k = 0; k < sp.psh.fib[1]; ++k)
    if (sp.membership.contains(1, pair_index(sp.psh, 1, 0, k))) ++members;
  CHECK(members == 1);  // the nonempty class; the empty class has no members
}
