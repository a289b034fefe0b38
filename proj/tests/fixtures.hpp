#pragma once

// Shared desk-scale sites and generators for the test suites.

#include <functional>
#include <random>

#include <doctest.h>

#include "sheafkit/presheaf.hpp"
#include "sheafkit/topology.hpp"

namespace fixtures {

using namespace sheafkit;

inline FiniteCategory point() { return poset_as_category({"pt"}, {}); }

inline FiniteCategory two_chain() { return poset_as_category({"0", "1"}, {{"0", "1"}}); }

inline FiniteCategory three_chain() {
  return poset_as_category({"0", "1", "2"}, {{"0", "1"}, {"1", "2"}, {"0", "2"}});
}

inline FiniteCategory antichain2() { return poset_as_category({"a", "b"}, {}); }

inline FiniteCategory diamond() {
  return poset_as_category({"bot", "x", "y", "top"}, {{"bot", "x"},
                                                      {"bot", "y"},
                                                      {"bot", "top"},
                                                      {"x", "top"},
                                                      {"y", "top"}});
}

// the one-object category with an involution s (the 2-element group)
inline FiniteCategory z2_monoid() {
  RawCategory raw;
  raw.objects = {"pt"};
  raw.arrows = {{"id", "pt", "pt"}, {"s", "pt", "pt"}};
  raw.identities = {"id"};
  raw.compose = {{"s", "s", "id"}};
  auto v = validate_category(raw);
  REQUIRE(v.ok());
  return *v.category;
}

// one-object site whose empty sieve covers (the degenerate point)
inline Topology point_with_empty_cover(const FiniteCategory& pt) {
  std::vector<std::vector<Bitset>> cov(1);
  cov[0].push_back(max_sieve(pt, 0).arrows);
  cov[0].push_back(Bitset(pt.n_arrows()));
  auto v = validate_topology(pt, cov);
  REQUIRE(v.ok());
  return *v.topology;
}

// deterministic random presheaf with fibers in [min_fib, max_fib]
inline Presheaf random_presheaf(const FiniteCategory& cat, std::mt19937& rng, int min_fib,
                                int max_fib) {
  // draw until the functoriality equations hold; fibers this small converge
  // quickly
  for (;;) {
    Presheaf x;
    x.cat = &cat;
    x.fib.resize(cat.n_objects());
    for (int a = 0; a < cat.n_objects(); ++a)
      x.fib[a] = min_fib + static_cast<int>(rng() % (max_fib - min_fib + 1));
    x.act.assign(cat.n_arrows(), {});
    bool feasible = true;
    for (int f = 0; f < cat.n_arrows() && feasible; ++f) {
      int n = x.fib[cat.cod(f)], m = x.fib[cat.dom(f)];
      if (f == cat.identity[cat.cod(f)]) {
        x.act[f].resize(n);
        for (int i = 0; i < n; ++i) x.act[f][i] = i;
        continue;
      }
      if (n > 0 && m == 0) {
        feasible = false;
        break;
      }
      x.act[f].resize(n);
      for (int i = 0; i < n; ++i) x.act[f][i] = m == 0 ? 0 : static_cast<int>(rng() % m);
    }
    if (feasible && validate_presheaf(x).empty()) return x;
  }
}

// deterministic random morphism into a random target (never fails: the
// terminal presheaf is always available as a fallback target)
inline PresheafMorphism random_morphism_onto(const FiniteCategory& cat, std::mt19937& rng,
                                             const Presheaf& src) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Presheaf dst = random_presheaf(cat, rng, 1, 2);
    auto homs = hom_set(src, dst);
    if (!homs.empty()) return homs[rng() % homs.size()];
  }
  Presheaf dst = terminal_presheaf(cat);
  return hom_set(src, dst)[0];
}

// all labeled partial orders on {0..n-1}, as leq-pair lists
inline std::vector<std::vector<std::pair<std::string, std::string>>> all_posets(
    int n, std::vector<std::string>& names_out) {
  names_out.clear();
  for (int i = 0; i < n; ++i) names_out.push_back(std::to_string(i));
  std::vector<std::pair<int, int>> off_diag;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) off_diag.emplace_back(i, j);
  std::vector<std::vector<std::pair<std::string, std::string>>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << off_diag.size()); ++mask) {
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) le[i][i] = true;
    for (std::size_t k = 0; k < off_diag.size(); ++k)
      if (mask & (std::uint64_t{1} << k)) le[off_diag[k].first][off_diag[k].second] = true;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j) {
        if (i != j && le[i][j] && le[j][i]) ok = false;
        for (int k = 0; k < n && ok; ++k)
          if (le[i][j] && le[j][k] && !le[i][k]) ok = false;
      }
    if (!ok) continue;
    std::vector<std::pair<std::string, std::string>> leq;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && le[i][j]) leq.emplace_back(names_out[i], names_out[j]);
    out.push_back(leq);
  }
  return out;
}

// every finite category with ≤ max_obj objects and ≤ max_arr arrows,
// deduplicated up to isomorphism (cheap canonical form over permutations)
std::vector<FiniteCategory> all_categories(int max_obj, int max_arr);

// brute-force natural isomorphism search; equality in the library core is
// on the nose, so this lives with the tests
inline bool naturally_isomorphic(const Presheaf& x, const Presheaf& y) {
  if (x.fib != y.fib) return false;
  for (const auto& f : hom_set(x, y))
    if (componentwise_injective(f) && componentwise_surjective(f)) return true;
  return false;
}

}  // namespace fixtures
