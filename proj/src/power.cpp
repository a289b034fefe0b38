#include "sheafkit/power.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace sheafkit {

namespace {

// position of (g, x) inside pairs[c][d]
int pair_pos(const std::vector<std::pair<int, int>>& v, int g, int x) {
  auto it = std::find(v.begin(), v.end(), std::make_pair(g, x));
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

// smallness of A ⊆ yc × X: for every d and every g: d→c, the slice
// { x : (g, x) ∈ A(d) } must fit the class bound.
bool small_enough(const PowerObject& pw, int c, const std::vector<Bitset>& a,
                  const SmallnessClass& cls) {
  if (!cls.bound) return true;
  const auto& cat = *pw.base.cat;
  for (int d = 0; d < cat.n_objects(); ++d) {
    std::map<int, int> per_arrow;
    for (std::size_t i = 0; i < pw.pairs[c][d].size(); ++i)
      if (a[d].test(static_cast<int>(i))) ++per_arrow[pw.pairs[c][d][i].first];
    for (auto& [g, n] : per_arrow)
      if (!cls.admits(n)) return false;
  }
  return true;
}

}  // namespace

bool PowerObject::elem_of(int c, int x, int powelem) const {
  int idc = base.cat->identity[c];
  int p = pair_pos(pairs[c][c], idc, x);
  return p >= 0 && decode[c][powelem][c].test(p);
}

int PowerObject::index_of(int c, const std::vector<Bitset>& a) const {
  for (std::size_t i = 0; i < decode[c].size(); ++i)
    if (decode[c][i] == a) return static_cast<int>(i);
  return -1;
}

PowerObject power_object(const Presheaf& x, const SmallnessClass& cls) {
  const auto& cat = *x.cat;
  PowerObject pw;
  pw.base = x;
  pw.pairs.assign(cat.n_objects(), {});
  pw.decode.assign(cat.n_objects(), {});

  // yc × X pair fibers and per-c subpresheaf enumeration
  std::vector<Presheaf> yc_times_x;
  for (int c = 0; c < cat.n_objects(); ++c) {
    Presheaf yc = representable(cat, c);
    Presheaf prod = product_presheaf(yc, x);
    yc_times_x.push_back(prod);
    pw.pairs[c].assign(cat.n_objects(), {});
    auto homs_by_obj = std::vector<std::vector<int>>(cat.n_objects());
    for (int d = 0; d < cat.n_objects(); ++d) {
      homs_by_obj[d] = hom_arrows(cat, d, c);
      for (int i = 0; i < prod.fib[d]; ++i) {
        auto [gi, xi] = unpair_index(x, d, i);
        pw.pairs[c][d].emplace_back(homs_by_obj[d][gi], xi);
      }
    }
    for (const auto& sub : all_subpresheaves(prod)) {
      if (small_enough(pw, c, sub.member, cls)) pw.decode[c].push_back(sub.member);
    }
    std::sort(pw.decode[c].begin(), pw.decode[c].end());
  }

  Presheaf p;
  p.cat = &cat;
  p.fib.assign(cat.n_objects(), 0);
  for (int c = 0; c < cat.n_objects(); ++c)
    p.fib[c] = static_cast<int>(pw.decode[c].size());
  p.act.assign(cat.n_arrows(), {});
  for (int f = 0; f < cat.n_arrows(); ++f) {
    int c = cat.cod(f), d = cat.dom(f);
    p.act[f].resize(p.fib[c]);
    for (int i = 0; i < p.fib[c]; ++i) {
      // (A·f)(e) = { (g: e→d, x) : (fg, x) ∈ A(e) }
      std::vector<Bitset> restricted;
      for (int e = 0; e < cat.n_objects(); ++e) {
        Bitset b(static_cast<int>(pw.pairs[d][e].size()));
        for (std::size_t j = 0; j < pw.pairs[d][e].size(); ++j) {
          auto [g, xe] = pw.pairs[d][e][j];
          int fg = cat.table[f][g];
          int p0 = pair_pos(pw.pairs[c][e], fg, xe);
          if (p0 >= 0 && pw.decode[c][i][e].test(p0)) b.set(static_cast<int>(j));
        }
        restricted.push_back(b);
      }
      int target = pw.index_of(d, restricted);
      if (target < 0)
        throw Error("ShapeMismatch", "power object restriction left the class");
      p.act[f][i] = target;
    }
  }
  pw.psh = std::move(p);

  pw.membership_product = product_presheaf(x, pw.psh);
  pw.membership = empty_subpresheaf(pw.membership_product);
  for (int c = 0; c < cat.n_objects(); ++c)
    for (int xi = 0; xi < x.fib[c]; ++xi)
      for (int ai = 0; ai < pw.psh.fib[c]; ++ai)
        if (pw.elem_of(c, xi, ai))
          pw.membership.member[c].set(pair_index(pw.psh, c, xi, ai));
  return pw;
}

std::optional<PresheafMorphism> classify(const PowerObject& pw, const Presheaf& y,
                                         const Subpresheaf& r, const SmallnessClass& cls) {
  const auto& cat = *pw.base.cat;
  const Presheaf& x = pw.base;
  // fibers over Y must be small
  if (cls.bound)
    for (int c = 0; c < cat.n_objects(); ++c)
      for (int yi = 0; yi < y.fib[c]; ++yi) {
        int n = 0;
        for (int xi = 0; xi < x.fib[c]; ++xi)
          if (r.contains(c, pair_index(y, c, xi, yi))) ++n;
        if (!cls.admits(n)) return std::nullopt;
      }

  // ρ(y) at c must be the subpresheaf A_y ⊆ yc × X with
  // (g: d→c, x) ∈ A_y ⇔ (x, y·g) ∈ R(d).
  PresheafMorphism rho{y, pw.psh, {}};
  rho.comp.resize(cat.n_objects());
  for (int c = 0; c < cat.n_objects(); ++c) {
    rho.comp[c].resize(y.fib[c]);
    for (int yi = 0; yi < y.fib[c]; ++yi) {
      std::vector<Bitset> a;
      for (int d = 0; d < cat.n_objects(); ++d) {
        Bitset b(static_cast<int>(pw.pairs[c][d].size()));
        for (std::size_t j = 0; j < pw.pairs[c][d].size(); ++j) {
          auto [g, xd] = pw.pairs[c][d][j];
          if (r.contains(d, pair_index(y, d, xd, y.restrict(yi, g))))
            b.set(static_cast<int>(j));
        }
        a.push_back(b);
      }
      int idx = pw.index_of(c, a);
      if (idx < 0) return std::nullopt;  // slice not small
      rho.comp[c][yi] = idx;
    }
  }
  return rho;
}

Subpresheaf classified_relation(const PowerObject& pw, const Presheaf& y,
                                const PresheafMorphism& rho) {
  const auto& cat = *pw.base.cat;
  Presheaf prod = product_presheaf(pw.base, y);
  Subpresheaf r = empty_subpresheaf(prod);
  for (int c = 0; c < cat.n_objects(); ++c)
    for (int xi = 0; xi < pw.base.fib[c]; ++xi)
      for (int yi = 0; yi < y.fib[c]; ++yi)
        if (pw.elem_of(c, xi, rho.comp[c][yi]))
          r.member[c].set(pair_index(y, c, xi, yi));
  return r;
}

SheafPowerObject sheaf_power_object(const Presheaf& x, const Topology& top,
                                    const SmallnessClass& cls) {
  const auto& cat = *x.cat;
  SheafPowerObject out;
  out.underlying = power_object(x, cls);
  const PowerObject& pw = out.underlying;

  // A ≲ A' ⇔ every (f, x) ∈ A is matched by A' on a cover
  auto below = [&](int c, int i, int j) {
    for (int b = 0; b < cat.n_objects(); ++b)
      for (std::size_t p = 0; p < pw.pairs[c][b].size(); ++p) {
        if (!pw.decode[c][i][b].test(static_cast<int>(p))) continue;
        auto [f, xe] = pw.pairs[c][b][p];
        Bitset sieve(cat.n_arrows());
        for (int g : cat.arrows_into[b]) {
          int fg = cat.table[f][g];
          int pos = pair_pos(pw.pairs[c][cat.dom(g)], fg, x.restrict(xe, g));
          if (pos >= 0 && pw.decode[c][j][cat.dom(g)].test(pos)) sieve.set(g);
        }
        if (!top.covers(b, sieve)) return false;
      }
    return true;
  };

  out.class_of.assign(cat.n_objects(), {});
  out.class_rep.assign(cat.n_objects(), {});
  for (int c = 0; c < cat.n_objects(); ++c) {
    int n = pw.psh.fib[c];
    std::vector<std::vector<bool>> sim(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        sim[i][j] = sim[j][i] = below(c, i, j) && below(c, j, i);
    out.class_of[c].assign(n, -1);
    for (int i = 0; i < n; ++i) {
      if (out.class_of[c][i] >= 0) continue;
      int cls_id = static_cast<int>(out.class_rep[c].size());
      out.class_of[c][i] = cls_id;
      out.class_rep[c].push_back(i);
      for (int j = i + 1; j < n; ++j)
        if (out.class_of[c][j] < 0 && sim[i][j]) out.class_of[c][j] = cls_id;
    }
    // the relation must be transitive for the partition to be well defined
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (sim[i][j] != (out.class_of[c][i] == out.class_of[c][j]))
          throw Error("ShapeMismatch", "power-object bisimulation is not transitive");
  }

  Presheaf q;
  q.cat = &cat;
  q.fib.assign(cat.n_objects(), 0);
  for (int c = 0; c < cat.n_objects(); ++c)
    q.fib[c] = static_cast<int>(out.class_rep[c].size());
  q.act.assign(cat.n_arrows(), {});
  for (int f = 0; f < cat.n_arrows(); ++f) {
    int c = cat.cod(f), d = cat.dom(f);
    q.act[f].resize(q.fib[c]);
    for (int k = 0; k < q.fib[c]; ++k)
      q.act[f][k] = out.class_of[d][pw.psh.act[f][out.class_rep[c][k]]];
    // the quotient respects restriction; verify on all members
    for (int i = 0; i < pw.psh.fib[c]; ++i)
      if (q.act[f][out.class_of[c][i]] != out.class_of[d][pw.psh.act[f][i]])
        throw Error("ShapeMismatch", "bisimulation is not a congruence for restriction");
  }
  out.psh = std::move(q);

  // membership on the quotient: x ∈ [A] ⇔ { f : (f, x·f) ∈ A } covers c.
  // Verified to be independent of the representative.
  auto mem = [&](int c, int xi, int i) {
    Bitset sieve(cat.n_arrows());
    for (int f : cat.arrows_into[c]) {
      int pos = pair_pos(pw.pairs[c][cat.dom(f)], f, x.restrict(xi, f));
      if (pos >= 0 && pw.decode[c][i][cat.dom(f)].test(pos)) sieve.set(f);
    }
    return top.covers(c, sieve);
  };
  out.membership_product = product_presheaf(x, out.psh);
  out.membership = empty_subpresheaf(out.membership_product);
  for (int c = 0; c < cat.n_objects(); ++c)
    for (int xi = 0; xi < x.fib[c]; ++xi)
      for (int k = 0; k < out.psh.fib[c]; ++k) {
        bool m = mem(c, xi, out.class_rep[c][k]);
        for (int i = 0; i < pw.psh.fib[c]; ++i)
          if (out.class_of[c][i] == k && mem(c, xi, i) != m)
            throw Error("ShapeMismatch", "membership depends on the representative");
        if (m) out.membership.member[c].set(pair_index(out.psh, c, xi, k));
      }
  return out;
}

}  // namespace sheafkit
