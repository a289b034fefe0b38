#include "sheafkit/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace sheafkit {

std::vector<Issue> validate_presheaf(const Presheaf& x) {
  std::vector<Issue> issues;
  const auto& cat = *x.cat;
  if (static_cast<int>(x.fib.size()) != cat.n_objects() ||
      static_cast<int>(x.act.size()) != cat.n_arrows()) {
    issues.push_back({"ShapeMismatch", "fiber/action tables have wrong arity"});
    return issues;
  }
  for (int f = 0; f < cat.n_arrows(); ++f) {
    if (static_cast<int>(x.act[f].size()) != x.fib[cat.cod(f)]) {
      issues.push_back({"ShapeMismatch", "action of " + cat.arrows[f].name + " has wrong domain"});
      return issues;
    }
    for (int v : x.act[f])
      if (v < 0 || v >= x.fib[cat.dom(f)]) {
        issues.push_back({"ShapeMismatch", "action of " + cat.arrows[f].name + " lands outside the fiber"});
        return issues;
      }
  }
  for (int a = 0; a < cat.n_objects(); ++a)
    for (int e = 0; e < x.fib[a]; ++e)
      if (x.restrict(e, cat.identity[a]) != e)
        issues.push_back({"Functoriality", "x·id ≠ x at " + x.label(a, e)});
  for (int f = 0; f < cat.n_arrows(); ++f)
    for (int g : cat.arrows_into[cat.dom(f)])
      for (int e = 0; e < x.fib[cat.cod(f)]; ++e)
        if (x.restrict(x.restrict(e, f), g) != x.restrict(e, cat.table[f][g]))
          issues.push_back({"Functoriality",
                            "(x·" + cat.arrows[f].name + ")·" + cat.arrows[g].name +
                                " ≠ x·(" + cat.arrows[f].name + "∘" + cat.arrows[g].name +
                                ") at " + x.label(cat.cod(f), e)});
  return issues;
}

Presheaf empty_presheaf(const FiniteCategory& cat) { return constant_presheaf(cat, 0); }
Presheaf terminal_presheaf(const FiniteCategory& cat) { return constant_presheaf(cat, 1); }

Presheaf constant_presheaf(const FiniteCategory& cat, int size) {
  Presheaf x;
  x.cat = &cat;
  x.fib.assign(cat.n_objects(), size);
  x.act.assign(cat.n_arrows(), {});
  for (int f = 0; f < cat.n_arrows(); ++f) {
    x.act[f].resize(size);
    std::iota(x.act[f].begin(), x.act[f].end(), 0);
  }
  return x;
}

std::vector<int> hom_arrows(const FiniteCategory& cat, int d, int c) {
  std::vector<int> out;
  for (int f : cat.arrows_into[c])
    if (cat.dom(f) == d) out.push_back(f);
  return out;
}

Presheaf representable(const FiniteCategory& cat, int c) {
  Presheaf x;
  x.cat = &cat;
  x.fib.assign(cat.n_objects(), 0);
  std::vector<std::vector<int>> elems(cat.n_objects());
  for (int d = 0; d < cat.n_objects(); ++d) {
    elems[d] = hom_arrows(cat, d, c);
    x.fib[d] = static_cast<int>(elems[d].size());
  }
  auto pos = [&](int d, int arrow) {
    const auto& v = elems[d];
    return static_cast<int>(std::find(v.begin(), v.end(), arrow) - v.begin());
  };
  x.act.assign(cat.n_arrows(), {});
  x.labels.assign(cat.n_objects(), {});
  for (int d = 0; d < cat.n_objects(); ++d)
    for (int f : elems[d]) x.labels[d].push_back(cat.arrows[f].name);
  for (int g = 0; g < cat.n_arrows(); ++g) {  // g: e→d acts on Hom(d,c)
    x.act[g].resize(x.fib[cat.cod(g)]);
    for (int i = 0; i < x.fib[cat.cod(g)]; ++i)
      x.act[g][i] = pos(cat.dom(g), cat.table[elems[cat.cod(g)][i]][g]);
  }
  return x;
}

Presheaf product_presheaf(const Presheaf& x, const Presheaf& y) {
  const auto& cat = *x.cat;
  Presheaf p;
  p.cat = &cat;
  p.fib.assign(cat.n_objects(), 0);
  for (int a = 0; a < cat.n_objects(); ++a) p.fib[a] = x.fib[a] * y.fib[a];
  p.act.assign(cat.n_arrows(), {});
  for (int f = 0; f < cat.n_arrows(); ++f) {
    int a = cat.cod(f);
    p.act[f].resize(p.fib[a]);
    for (int i = 0; i < p.fib[a]; ++i) {
      auto [ix, iy] = unpair_index(y, a, i);
      p.act[f][i] = pair_index(y, cat.dom(f), x.restrict(ix, f), y.restrict(iy, f));
    }
  }
  p.labels.assign(cat.n_objects(), {});
  for (int a = 0; a < cat.n_objects(); ++a)
    for (int i = 0; i < p.fib[a]; ++i) {
      auto [ix, iy] = unpair_index(y, a, i);
      p.labels[a].push_back("(" + x.label(a, ix) + "," + y.label(a, iy) + ")");
    }
  return p;
}

std::vector<Issue> validate_morphism(const PresheafMorphism& f) {
  std::vector<Issue> issues;
  const auto& cat = *f.src.cat;
  if (f.src.cat != f.dst.cat) {
    issues.push_back({"ShapeMismatch", "morphism endpoints live on different categories"});
    return issues;
  }
  for (int a = 0; a < cat.n_objects(); ++a) {
    if (static_cast<int>(f.comp[a].size()) != f.src.fib[a]) {
      issues.push_back({"ShapeMismatch", "component at " + cat.objects[a] + " has wrong arity"});
      return issues;
    }
    for (int v : f.comp[a])
      if (v < 0 || v >= f.dst.fib[a]) {
        issues.push_back({"ShapeMismatch", "component at " + cat.objects[a] + " lands outside the fiber"});
        return issues;
      }
  }
  for (int g = 0; g < cat.n_arrows(); ++g)
    for (int x = 0; x < f.src.fib[cat.cod(g)]; ++x)
      if (f.comp[cat.dom(g)][f.src.restrict(x, g)] !=
          f.dst.restrict(f.comp[cat.cod(g)][x], g))
        issues.push_back({"Naturality", "naturality fails along " + cat.arrows[g].name +
                                            " at " + f.src.label(cat.cod(g), x)});
  return issues;
}

PresheafMorphism identity_morphism(const Presheaf& x) {
  PresheafMorphism f{x, x, {}};
  f.comp.resize(x.cat->n_objects());
  for (int a = 0; a < x.cat->n_objects(); ++a) {
    f.comp[a].resize(x.fib[a]);
    std::iota(f.comp[a].begin(), f.comp[a].end(), 0);
  }
  return f;
}

PresheafMorphism compose_morphisms(const PresheafMorphism& g, const PresheafMorphism& f) {
  PresheafMorphism h{f.src, g.dst, {}};
  h.comp.resize(f.src.cat->n_objects());
  for (int a = 0; a < f.src.cat->n_objects(); ++a) {
    h.comp[a].resize(f.src.fib[a]);
    for (int x = 0; x < f.src.fib[a]; ++x) h.comp[a][x] = g.comp[a][f.comp[a][x]];
  }
  return h;
}

bool componentwise_surjective(const PresheafMorphism& f) {
  for (int a = 0; a < f.src.cat->n_objects(); ++a) {
    std::vector<bool> hit(f.dst.fib[a], false);
    for (int v : f.comp[a]) hit[v] = true;
    for (bool b : hit)
      if (!b) return false;
  }
  return true;
}

bool componentwise_injective(const PresheafMorphism& f) {
  for (int a = 0; a < f.src.cat->n_objects(); ++a) {
    std::vector<bool> hit(f.dst.fib[a], false);
    for (int v : f.comp[a]) {
      if (hit[v]) return false;
      hit[v] = true;
    }
  }
  return true;
}

std::vector<PresheafMorphism> hom_set(const Presheaf& src, const Presheaf& dst) {
  const auto& cat = *src.cat;
  // slots: all (a, x) in object-major order
  std::vector<std::pair<int, int>> slots;
  for (int a = 0; a < cat.n_objects(); ++a)
    for (int x = 0; x < src.fib[a]; ++x) slots.emplace_back(a, x);
  std::vector<std::vector<int>> comp(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) comp[a].assign(src.fib[a], -1);

  std::vector<PresheafMorphism> out;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == slots.size()) {
      out.push_back(PresheafMorphism{src, dst, comp});
      return;
    }
    auto [a, x] = slots[i];
    for (int v = 0; v < dst.fib[a]; ++v) {
      // assign first so endo-arrows constrain the slot against itself
      comp[a][x] = v;
      bool ok = true;
      for (int f : cat.arrows_into[a]) {
        int xr = src.restrict(x, f);
        int assigned = comp[cat.dom(f)][xr];
        if (assigned >= 0 && assigned != dst.restrict(v, f)) {
          ok = false;
          break;
        }
      }
      if (ok)
        for (int f : cat.arrows_from[a]) {
          int c = cat.cod(f);
          for (int y = 0; y < src.fib[c]; ++y)
            if (src.restrict(y, f) == x && comp[c][y] >= 0 &&
                dst.restrict(comp[c][y], f) != v) {
              ok = false;
              break;
            }
          if (!ok) break;
        }
      if (ok) rec(i + 1);
      comp[a][x] = -1;
    }
  };
  rec(0);
  return out;
}

std::optional<std::tuple<int, int, int>> subpresheaf_closure_witness(const Subpresheaf& s) {
  const auto& cat = *s.of.cat;
  for (int f = 0; f < cat.n_arrows(); ++f)
    for (int x = 0; x < s.of.fib[cat.cod(f)]; ++x)
      if (s.member[cat.cod(f)].test(x) && !s.member[cat.dom(f)].test(s.of.restrict(x, f)))
        return std::make_tuple(cat.cod(f), x, f);
  return std::nullopt;
}

Subpresheaf full_subpresheaf(const Presheaf& x) {
  Subpresheaf s{x, {}};
  for (int a = 0; a < x.cat->n_objects(); ++a) {
    Bitset b(x.fib[a]);
    for (int i = 0; i < x.fib[a]; ++i) b.set(i);
    s.member.push_back(b);
  }
  return s;
}

Subpresheaf empty_subpresheaf(const Presheaf& x) {
  Subpresheaf s{x, {}};
  for (int a = 0; a < x.cat->n_objects(); ++a) s.member.push_back(Bitset(x.fib[a]));
  return s;
}

Subpresheaf principal_subpresheaf(const Presheaf& x, int a, int elem) {
  Subpresheaf s = empty_subpresheaf(x);
  s.member[a].set(elem);
  // close under restriction
  bool changed = true;
  while (changed) {
    changed = false;
    for (int f = 0; f < x.cat->n_arrows(); ++f) {
      int c = x.cat->cod(f), d = x.cat->dom(f);
      for (int e = 0; e < x.fib[c]; ++e)
        if (s.member[c].test(e) && !s.member[d].test(x.restrict(e, f))) {
          s.member[d].set(x.restrict(e, f));
          changed = true;
        }
    }
  }
  return s;
}

bool subpresheaf_leq(const Subpresheaf& a, const Subpresheaf& b) {
  for (std::size_t i = 0; i < a.member.size(); ++i)
    if (!a.member[i].subset_of(b.member[i])) return false;
  return true;
}

std::vector<Subpresheaf> all_subpresheaves(const Presheaf& x) {
  const auto& cat = *x.cat;
  std::vector<Subpresheaf> principals;
  for (int a = 0; a < cat.n_objects(); ++a)
    for (int e = 0; e < x.fib[a]; ++e) principals.push_back(principal_subpresheaf(x, a, e));

  std::set<std::vector<Bitset>> seen;
  seen.insert(empty_subpresheaf(x).member);
  std::vector<std::vector<Bitset>> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<std::vector<Bitset>> next;
    for (const auto& s : frontier)
      for (const auto& p : principals) {
        auto u = s;
        for (std::size_t i = 0; i < u.size(); ++i) u[i] |= p.member[i];
        if (seen.insert(u).second) next.push_back(u);
      }
    frontier = std::move(next);
  }
  std::vector<Subpresheaf> out;
  for (const auto& m : seen) out.push_back(Subpresheaf{x, m});
  return out;
}

int max_fiber_size(const PresheafMorphism& f) {
  int best = 0;
  for (int a = 0; a < f.src.cat->n_objects(); ++a) {
    std::vector<int> cnt(f.dst.fib[a], 0);
    for (int v : f.comp[a]) best = std::max(best, ++cnt[v]);
  }
  return best;
}

bool pointwise_small(const PresheafMorphism& f, const SmallnessClass& cls) {
  return cls.admits(max_fiber_size(f));
}

std::vector<Presheaf> all_presheaves(const FiniteCategory& cat, int max_fiber) {
  std::vector<Presheaf> out;
  // enumerate fiber size vectors, then action tables with functoriality filter
  std::vector<int> sizes(cat.n_objects(), 0);
  std::function<void(int)> sizes_rec = [&](int a) {
    if (a == cat.n_objects()) {
      Presheaf x;
      x.cat = &cat;
      x.fib = sizes;
      x.act.assign(cat.n_arrows(), {});
      // assign actions arrow by arrow; identities forced
      std::function<void(int)> act_rec = [&](int f) {
        if (f == cat.n_arrows()) {
          if (validate_presheaf(x).empty()) out.push_back(x);
          return;
        }
        int a2 = cat.cod(f), d = cat.dom(f);
        if (cat.identity[a2] == f) {
          x.act[f].resize(x.fib[a2]);
          std::iota(x.act[f].begin(), x.act[f].end(), 0);
          act_rec(f + 1);
          x.act[f].clear();
          return;
        }
        // all maps fiber(a2) → fiber(d)
        int n = x.fib[a2], m = x.fib[d];
        if (n == 0) {
          x.act[f] = {};
          act_rec(f + 1);
          return;
        }
        if (m == 0) return;  // no map exists
        std::vector<int> map(n, 0);
        while (true) {
          x.act[f] = map;
          act_rec(f + 1);
          int i = 0;
          while (i < n && map[i] == m - 1) map[i++] = 0;
          if (i == n) break;
          ++map[i];
        }
        x.act[f].clear();
        return;
      };
      act_rec(0);
      return;
    }
    for (int s = 0; s <= max_fiber; ++s) {
      sizes[a] = s;
      sizes_rec(a + 1);
    }
  };
  sizes_rec(0);
  return out;
}

}  // namespace sheafkit
