#include "sheafkit/heyting.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace sheafkit {

int SievedFiber::index_of(int b, int f, int y) const {
  const auto& v = elems[b];
  auto it = std::find(v.begin(), v.end(), std::make_pair(f, y));
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

SievedFiber sieved_fiber(const PresheafMorphism& f, int a, int x, const Bitset& sieve) {
  const auto& cat = *f.src.cat;
  if (x < 0 || x >= f.dst.fib[a])
    throw Error("ElementNotInFiber", "x not in X(" + cat.objects[a] + ")");
  SievedFiber out;
  out.at = a;
  out.x = x;
  out.elems.assign(cat.n_objects(), {});
  for (int b = 0; b < cat.n_objects(); ++b)
    for (int arr : cat.arrows_into[a]) {
      if (cat.dom(arr) != b || !sieve.test(arr)) continue;
      for (int y = 0; y < f.src.fib[b]; ++y)
        if (f.comp[b][y] == f.dst.restrict(x, arr)) out.elems[b].emplace_back(arr, y);
    }
  return out;
}

SievedFiber m_fiber(const PresheafMorphism& f, int a, int x) {
  return sieved_fiber(f, a, x, max_sieve(*f.src.cat, a).arrows);
}

Presheaf fiber_presheaf(const PresheafMorphism& f, int a, int x) {
  const auto& cat = *f.src.cat;
  SievedFiber fib = m_fiber(f, a, x);
  Presheaf p;
  p.cat = &cat;
  p.fib.assign(cat.n_objects(), 0);
  for (int b = 0; b < cat.n_objects(); ++b)
    p.fib[b] = static_cast<int>(fib.elems[b].size());
  p.act.assign(cat.n_arrows(), {});
  for (int g = 0; g < cat.n_arrows(); ++g) {
    int b = cat.cod(g);
    p.act[g].resize(p.fib[b]);
    for (int i = 0; i < p.fib[b]; ++i) {
      auto [arr, y] = fib.elems[b][i];
      p.act[g][i] =
          fib.index_of(cat.dom(g), cat.table[arr][g], f.src.restrict(y, g));
    }
  }
  p.labels.assign(cat.n_objects(), {});
  for (int b = 0; b < cat.n_objects(); ++b)
    for (auto [arr, y] : fib.elems[b])
      p.labels[b].push_back("(" + cat.arrows[arr].name + "," + f.src.label(b, y) + ")");
  return p;
}

Subpresheaf forall_along(const PresheafMorphism& f, const Subpresheaf& a) {
  const auto& cat = *f.src.cat;
  Subpresheaf out = empty_subpresheaf(f.dst);
  for (int c = 0; c < cat.n_objects(); ++c)
    for (int x = 0; x < f.dst.fib[c]; ++x) {
      SievedFiber fib = m_fiber(f, c, x);
      bool all = true;
      for (int b = 0; b < cat.n_objects() && all; ++b)
        for (auto [arr, y] : fib.elems[b])
          if (!a.contains(b, y)) {
            all = false;
            break;
          }
      if (all) out.member[c].set(x);
    }
  return out;
}

Subpresheaf pullback_sub(const PresheafMorphism& f, const Subpresheaf& c) {
  Subpresheaf out = empty_subpresheaf(f.src);
  for (int a = 0; a < f.src.cat->n_objects(); ++a)
    for (int y = 0; y < f.src.fib[a]; ++y)
      if (c.contains(a, f.comp[a][y])) out.member[a].set(y);
  return out;
}

ImageFactorization image_factorization(const PresheafMorphism& f) {
  const auto& cat = *f.src.cat;
  ImageFactorization out;
  out.image = empty_subpresheaf(f.dst);
  for (int a = 0; a < cat.n_objects(); ++a)
    for (int y = 0; y < f.src.fib[a]; ++y) out.image.member[a].set(f.comp[a][y]);

  // dense reindexing of the image
  std::vector<std::vector<int>> pos(cat.n_objects());
  Presheaf im;
  im.cat = &cat;
  im.fib.assign(cat.n_objects(), 0);
  im.labels.assign(cat.n_objects(), {});
  for (int a = 0; a < cat.n_objects(); ++a) {
    pos[a].assign(f.dst.fib[a], -1);
    for (int x = 0; x < f.dst.fib[a]; ++x)
      if (out.image.member[a].test(x)) {
        pos[a][x] = im.fib[a]++;
        im.labels[a].push_back(f.dst.label(a, x));
      }
  }
  im.act.assign(cat.n_arrows(), {});
  for (int g = 0; g < cat.n_arrows(); ++g) {
    int a = cat.cod(g);
    im.act[g].resize(im.fib[a]);
    for (int x = 0; x < f.dst.fib[a]; ++x)
      if (pos[a][x] >= 0) im.act[g][pos[a][x]] = pos[cat.dom(g)][f.dst.restrict(x, g)];
  }
  out.image_presheaf = im;

  PresheafMorphism cover{f.src, im, {}};
  cover.comp.resize(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) {
    cover.comp[a].resize(f.src.fib[a]);
    for (int y = 0; y < f.src.fib[a]; ++y) cover.comp[a][y] = pos[a][f.comp[a][y]];
  }
  out.cover = std::move(cover);

  PresheafMorphism incl{im, f.dst, {}};
  incl.comp.resize(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) {
    incl.comp[a].resize(im.fib[a]);
    for (int x = 0; x < f.dst.fib[a]; ++x)
      if (pos[a][x] >= 0) incl.comp[a][pos[a][x]] = x;
  }
  out.incl = std::move(incl);
  return out;
}

PiFunctorResult pi_functor(const PresheafMorphism& f, const PresheafMorphism& g,
                           const SmallnessClass& cls) {
  if (!pointwise_small(f, cls)) throw Error("NotSmall", "pi_functor needs a small map");
  const auto& cat = *f.src.cat;
  const Presheaf& x = f.dst;
  const Presheaf& b = g.src;

  // Enumerate, for every x ∈ X(a), the natural sections s of G over Y^M_x.
  std::vector<std::vector<SievedFiber>> fibers(cat.n_objects());
  PiFunctorResult out;
  out.decode.assign(cat.n_objects(), {});
  for (int a = 0; a < cat.n_objects(); ++a) {
    fibers[a].reserve(x.fib[a]);
    for (int xi = 0; xi < x.fib[a]; ++xi) {
      SievedFiber fib = m_fiber(f, a, xi);
      fibers[a].push_back(fib);
      // flatten the pairs in (object, position) order
      std::vector<std::tuple<int, int, int>> flat;  // (b, arrow, y)
      for (int bb = 0; bb < cat.n_objects(); ++bb)
        for (auto [arr, y] : fib.elems[bb]) flat.emplace_back(bb, arr, y);
      std::vector<int> sec(flat.size(), -1);
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == flat.size()) {
          out.decode[a].emplace_back(xi, sec);
          return;
        }
        auto [bb, arr, y] = flat[i];
        for (int v = 0; v < b.fib[bb]; ++v) {
          if (g.comp[bb][v] != y) continue;
          sec[i] = v;
          // naturality s(f,y)·h = s(fh, y·h) against all chosen values,
          // including v itself (endo-arrows constrain a slot on its own)
          bool ok = true;
          for (std::size_t j = 0; j <= i && ok; ++j) {
            auto [bj, arrj, yj] = flat[j];
            for (int h : cat.arrows_into[bj]) {
              if (cat.dom(h) != bb) continue;
              if (cat.table[arrj][h] == arr && f.src.restrict(yj, h) == y &&
                  b.restrict(sec[j], h) != v) {
                ok = false;
                break;
              }
            }
            if (!ok) break;
            for (int h : cat.arrows_into[bb]) {
              if (cat.dom(h) != bj) continue;
              if (cat.table[arr][h] == arrj && f.src.restrict(y, h) == yj &&
                  b.restrict(v, h) != sec[j]) {
                ok = false;
                break;
              }
            }
          }
          if (ok) rec(i + 1);
          sec[i] = -1;
        }
      };
      rec(0);
    }
  }

  Presheaf total;
  total.cat = &cat;
  total.fib.assign(cat.n_objects(), 0);
  for (int a = 0; a < cat.n_objects(); ++a)
    total.fib[a] = static_cast<int>(out.decode[a].size());
  total.act.assign(cat.n_arrows(), {});
  auto find_elem = [&](int a, int xi, const std::vector<int>& sec) {
    for (int i = 0; i < total.fib[a]; ++i)
      if (out.decode[a][i].first == xi && out.decode[a][i].second == sec) return i;
    throw Error("ShapeMismatch", "restricted section not found (naturality broken)");
  };
  for (int arr = 0; arr < cat.n_arrows(); ++arr) {
    int a = cat.cod(arr), d = cat.dom(arr);
    total.act[arr].resize(total.fib[a]);
    for (int i = 0; i < total.fib[a]; ++i) {
      auto& [xi, sec] = out.decode[a][i];
      int xd = x.restrict(xi, arr);
      const SievedFiber& fsrc = fibers[a][xi];
      const SievedFiber& fdst = fibers[d][xd];
      // (f*s)(g, y) = s(arr∘g, y)
      std::vector<int> rsec(fdst.total());
      int idx = 0;
      for (int bb = 0; bb < cat.n_objects(); ++bb)
        for (auto [gg, y] : fdst.elems[bb]) {
          int src_pos = 0;  // flat position of (arr∘gg, y) in fsrc
          bool found = false;
          for (int b2 = 0; b2 < cat.n_objects() && !found; ++b2)
            for (auto [aa, yy] : fsrc.elems[b2]) {
              if (b2 == bb && aa == cat.table[arr][gg] && yy == y) {
                found = true;
                break;
              }
              ++src_pos;
            }
          if (!found) throw Error("ShapeMismatch", "fiber reindexing failed");
          rsec[idx++] = sec[src_pos];
        }
      total.act[arr][i] = find_elem(d, xd, rsec);
    }
  }
  out.total = total;

  PresheafMorphism to_base{total, x, {}};
  to_base.comp.resize(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) {
    to_base.comp[a].resize(total.fib[a]);
    for (int i = 0; i < total.fib[a]; ++i) to_base.comp[a][i] = out.decode[a][i].first;
  }
  out.to_base = std::move(to_base);
  return out;
}

}  // namespace sheafkit
