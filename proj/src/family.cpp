#include "sheafkit/family.hpp"

#include <algorithm>

namespace sheafkit {

int PiShriek::index_of(int a, int x, int f) const {
  const auto& v = elems[a];
  auto it = std::find(v.begin(), v.end(), std::make_pair(x, f));
  if (it == v.end()) throw Error("ElementNotInFiber", "(x, f) not in pi_shriek fiber");
  return static_cast<int>(it - v.begin());
}

PiShriek pi_shriek(const FiniteCategory& cat, const FamilyOverC0& base) {
  for (int x = 0; x < base.size(); ++x)
    if (base.anchor[x] < 0 || base.anchor[x] >= cat.n_objects())
      throw Error("UnknownObject", "family anchor out of range");
  PiShriek out;
  out.base = base;
  out.elems.assign(cat.n_objects(), {});
  for (int a = 0; a < cat.n_objects(); ++a)
    for (int x = 0; x < base.size(); ++x)
      for (int f : cat.arrows_from[a])
        if (cat.cod(f) == base.anchor[x]) out.elems[a].emplace_back(x, f);

  Presheaf p;
  p.cat = &cat;
  p.fib.assign(cat.n_objects(), 0);
  for (int a = 0; a < cat.n_objects(); ++a) p.fib[a] = static_cast<int>(out.elems[a].size());
  p.act.assign(cat.n_arrows(), {});
  p.labels.assign(cat.n_objects(), {});
  for (int a = 0; a < cat.n_objects(); ++a)
    for (auto [x, f] : out.elems[a])
      p.labels[a].push_back("(" + std::to_string(x) + "," + cat.arrows[f].name + ")");
  out.psh = std::move(p);
  // fill actions after fibers are known: (x, f)·g = (x, f∘g) for g: a'→a
  for (int g = 0; g < cat.n_arrows(); ++g) {
    int a = cat.cod(g);
    out.psh.act[g].resize(out.psh.fib[a]);
    for (int i = 0; i < out.psh.fib[a]; ++i) {
      auto [x, f] = out.elems[a][i];
      out.psh.act[g][i] = out.index_of(cat.dom(g), x, cat.table[f][g]);
    }
  }
  return out;
}

PiStar pi_star(const Presheaf& y) {
  PiStar out;
  out.offset.assign(y.cat->n_objects(), 0);
  for (int a = 0; a < y.cat->n_objects(); ++a) {
    out.offset[a] = out.family.size();
    for (int e = 0; e < y.fib[a]; ++e) out.family.anchor.push_back(a);
  }
  return out;
}

Counit counit(const Presheaf& y, const SmallnessClass& cls) {
  const auto& cat = *y.cat;
  PiStar st = pi_star(y);
  Counit out;
  out.domain = pi_shriek(cat, st.family);
  PresheafMorphism m{out.domain.psh, y, {}};
  m.comp.resize(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) {
    m.comp[a].resize(out.domain.psh.fib[a]);
    for (int i = 0; i < out.domain.psh.fib[a]; ++i) {
      auto [x, f] = out.domain.elems[a][i];  // x encodes (b, e) with f: a→b
      int b = st.family.anchor[x];
      int e = x - st.offset[b];
      m.comp[a][i] = y.restrict(e, f);
    }
  }
  out.map = std::move(m);
  out.surjective = componentwise_surjective(out.map);
  out.max_fiber = max_fiber_size(out.map);
  out.small = cls.admits(out.max_fiber);
  return out;
}

ShriekMap shriek_map(const FiniteCategory& cat, const FamilyOverC0& b,
                     const FamilyOverC0& a, const std::vector<int>& r,
                     const std::vector<int>& s, const SmallnessClass& cls) {
  if (static_cast<int>(r.size()) != b.size() || static_cast<int>(s.size()) != b.size())
    throw Error("ShapeMismatch", "(r, s) must be defined on all of B");
  for (int i = 0; i < b.size(); ++i) {
    if (r[i] < 0 || r[i] >= a.size())
      throw Error("ShapeMismatch", "r(" + std::to_string(i) + ") outside A");
    int arr = s[i];
    if (arr < 0 || arr >= cat.n_arrows())
      throw Error("ShapeMismatch", "s(" + std::to_string(i) + ") is not an arrow");
    if (cat.dom(arr) != b.anchor[i] || cat.cod(arr) != a.anchor[r[i]])
      throw Error("ShapeMismatch",
                  "s(" + std::to_string(i) + ") must run σ_B(b) → σ_A(rb)");
  }
  ShriekMap out;
  out.domain = pi_shriek(cat, b);
  out.codomain = pi_shriek(cat, a);
  out.r = r;
  out.s = s;
  PresheafMorphism m{out.domain.psh, out.codomain.psh, {}};
  m.comp.resize(cat.n_objects());
  for (int c = 0; c < cat.n_objects(); ++c) {
    m.comp[c].resize(out.domain.psh.fib[c]);
    for (int i = 0; i < out.domain.psh.fib[c]; ++i) {
      auto [x, f] = out.domain.elems[c][i];
      m.comp[c][i] = out.codomain.index_of(c, r[x], cat.table[s[x]][f]);
    }
  }
  out.map = std::move(m);
  std::vector<int> cnt(a.size(), 0);
  int worst = 0;
  for (int v : r) worst = std::max(worst, ++cnt[v]);
  out.r_small = cls.admits(worst);
  return out;
}

std::vector<int> transpose_to_family(const PiShriek& b, const PresheafMorphism& m) {
  const auto& cat = *m.src.cat;
  std::vector<int> u(b.base.size(), -1);
  for (int x = 0; x < b.base.size(); ++x) {
    int a = b.base.anchor[x];
    u[x] = m.comp[a][b.index_of(a, x, cat.identity[a])];
  }
  return u;
}

PresheafMorphism transpose_to_morphism(const PiShriek& b, const Presheaf& y,
                                       const std::vector<int>& u) {
  const auto& cat = *y.cat;
  PresheafMorphism m{b.psh, y, {}};
  m.comp.resize(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) {
    m.comp[a].resize(b.psh.fib[a]);
    for (int i = 0; i < b.psh.fib[a]; ++i) {
      auto [x, f] = b.elems[a][i];
      m.comp[a][i] = y.restrict(u[x], f);
    }
  }
  return m;
}

std::vector<std::vector<int>> maps_over_c0(const FamilyOverC0& b, const Presheaf& y) {
  std::vector<std::vector<int>> out;
  std::vector<int> u(b.size(), 0);
  for (int x = 0; x < b.size(); ++x)
    if (y.fib[b.anchor[x]] == 0) return out;  // no map
  while (true) {
    out.push_back(u);
    int i = 0;
    while (i < b.size() && u[i] == y.fib[b.anchor[i]] - 1) u[i++] = 0;
    if (i == b.size()) break;
    ++u[i];
  }
  if (b.size() == 0 && out.empty()) out.push_back({});
  return out;
}

QuasiPullback cover_by_shriek(const PresheafMorphism& f, const PiShriek& b,
                              const PresheafMorphism& l, const SmallnessClass& cls) {
  if (!pointwise_small(f, cls)) throw Error("NotSmall", "cover_by_shriek needs a small map");
  const auto& cat = *f.src.cat;
  const Presheaf& z = f.src;
  // S = Z ×_Y π_!B, then C = π*S anchored by the object of each element.
  struct SElem {
    int at, z, e;  // e indexes π_!B(at)
  };
  std::vector<SElem> selems;
  for (int a = 0; a < cat.n_objects(); ++a)
    for (int zi = 0; zi < z.fib[a]; ++zi)
      for (int e = 0; e < b.psh.fib[a]; ++e)
        if (f.comp[a][zi] == l.comp[a][e]) selems.push_back({a, zi, e});

  FamilyOverC0 c;
  for (auto& s : selems) c.anchor.push_back(s.at);
  std::vector<int> k(selems.size()), sarr(selems.size());
  for (std::size_t i = 0; i < selems.size(); ++i) {
    auto [x, arr] = b.elems[selems[i].at][selems[i].e];
    k[i] = x;
    sarr[i] = arr;
  }

  QuasiPullback out;
  out.left = shriek_map(cat, c, b.base, k, sarr, cls);
  out.corner = out.left.domain;
  out.k_small = out.left.r_small;

  PresheafMorphism top{out.corner.psh, z, {}};
  top.comp.resize(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) {
    top.comp[a].resize(out.corner.psh.fib[a]);
    for (int i = 0; i < out.corner.psh.fib[a]; ++i) {
      auto [ci, g] = out.corner.elems[a][i];
      top.comp[a][i] = z.restrict(selems[ci].z, g);
    }
  }
  out.top = std::move(top);

  // commutation: L ∘ (k,l)_! = F ∘ top
  out.commutes = true;
  for (int a = 0; a < cat.n_objects() && out.commutes; ++a)
    for (int i = 0; i < out.corner.psh.fib[a]; ++i)
      if (l.comp[a][out.left.map.comp[a][i]] != f.comp[a][out.top.comp[a][i]]) {
        out.commutes = false;
        break;
      }

  // comparison onto the pullback: every (e, z') with L(e) = F(z') is hit
  out.comparison_surjective = true;
  for (int a = 0; a < cat.n_objects() && out.comparison_surjective; ++a)
    for (int e = 0; e < b.psh.fib[a] && out.comparison_surjective; ++e)
      for (int zi = 0; zi < z.fib[a]; ++zi) {
        if (l.comp[a][e] != f.comp[a][zi]) continue;
        bool hit = false;
        for (int i = 0; i < out.corner.psh.fib[a] && !hit; ++i)
          hit = out.left.map.comp[a][i] == e && out.top.comp[a][i] == zi;
        if (!hit) {
          out.comparison_surjective = false;
          break;
        }
      }
  return out;
}

}  // namespace sheafkit
