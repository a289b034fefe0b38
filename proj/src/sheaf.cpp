#include "sheafkit/sheaf.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace sheafkit {

int CompatibleFamily::value_at(const Bitset& s, int arrow) const {
  int pos = 0;
  for (int f = 0; f < s.universe(); ++f) {
    if (!s.test(f)) continue;
    if (f == arrow) return choice[pos];
    ++pos;
  }
  throw Error("ElementNotInFiber", "arrow not in the family's sieve");
}

std::vector<CompatibleFamily> compatible_families(const Presheaf& p, const Topology& top,
                                                  int at) {
  const auto& cat = *p.cat;
  std::vector<CompatibleFamily> out;
  for (const auto& sieve : top.cov[at]) {
    std::vector<int> arrows = sieve.elements();
    std::vector<int> choice(arrows.size(), -1);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == arrows.size()) {
        out.push_back(CompatibleFamily{at, sieve, choice});
        return;
      }
      int f = arrows[i];
      int b = cat.dom(f);
      for (int v = 0; v < p.fib[b]; ++v) {
        choice[i] = v;
        // compatibility against all assigned slots (x_f)·g = x_{fg}
        bool ok = true;
        for (std::size_t j = 0; j <= i && ok; ++j) {
          int fj = arrows[j];
          for (int g : cat.arrows_into[cat.dom(fj)]) {
            int fjg = cat.table[fj][g];
            if (fjg > f) continue;  // slot not assigned yet
            auto pos = std::lower_bound(arrows.begin(), arrows.end(), fjg);
            std::size_t k = static_cast<std::size_t>(pos - arrows.begin());
            if (k > i) continue;
            if (p.restrict(choice[j], g) != choice[k]) {
              ok = false;
              break;
            }
          }
        }
        if (ok) rec(i + 1);
        choice[i] = -1;
      }
    };
    rec(0);
  }
  return out;
}

namespace {

// restriction of a compatible family: (R, x)·f = (f*R, x·f), (x·f)_g = x_{fg}
CompatibleFamily restrict_family(const FiniteCategory& cat, const CompatibleFamily& fam,
                                 int f) {
  CompatibleFamily out;
  out.at = cat.dom(f);
  out.sieve = Bitset(cat.n_arrows());
  std::vector<int> arrows;
  for (int g : cat.arrows_into[cat.dom(f)])
    if (fam.sieve.test(cat.table[f][g])) {
      out.sieve.set(g);
      arrows.push_back(g);
    }
  std::sort(arrows.begin(), arrows.end());
  for (int g : arrows) out.choice.push_back(fam.value_at(fam.sieve, cat.table[f][g]));
  return out;
}

// (R, x) ~ (T, y): some covering sieve S ⊆ R ∩ T with x = y on S
bool families_equivalent(const FiniteCategory& cat, const Topology& top,
                         const CompatibleFamily& a, const CompatibleFamily& b) {
  Bitset agree(cat.n_arrows());
  for (int f = 0; f < cat.n_arrows(); ++f)
    if (a.sieve.test(f) && b.sieve.test(f) &&
        a.value_at(a.sieve, f) == b.value_at(b.sieve, f))
      agree.set(f);
  // `agree` is itself a sieve (agreement is stable under precomposition), so
  // a covering S ⊆ agree exists iff agree is covering.
  for (const auto& s : top.cov[a.at])
    if (s.subset_of(agree)) return true;
  return false;
}

}  // namespace

int PlusConstruction::class_of_family(int at, const CompatibleFamily& fam) const {
  const auto& v = families[at];
  auto it = std::find(v.begin(), v.end(), fam);
  if (it == v.end()) throw Error("ElementNotInFiber", "unknown compatible family");
  return class_of[at][it - v.begin()];
}

PlusConstruction plus(const Presheaf& p, const Topology& top) {
  const auto& cat = *p.cat;
  PlusConstruction out;
  out.families.resize(cat.n_objects());
  out.class_of.resize(cat.n_objects());

  for (int a = 0; a < cat.n_objects(); ++a) {
    out.families[a] = compatible_families(p, top, a);
    int n = static_cast<int>(out.families[a].size());
    // union-find over the one-step common-refinement relation
    std::vector<int> uf(n);
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> find = [&](int i) {
      while (uf[i] != i) i = uf[i] = uf[uf[i]];
      return i;
    };
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (families_equivalent(cat, top, out.families[a][i], out.families[a][j])) {
          uf[find(i)] = find(j);
        }
    // dense class ids in order of least member
    out.class_of[a].assign(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i)
      if (find(i) == i) {
        out.class_of[a][i] = next++;
      }
    for (int i = 0; i < n; ++i) out.class_of[a][i] = out.class_of[a][find(i)];
  }

  Presheaf q;
  q.cat = &cat;
  q.fib.assign(cat.n_objects(), 0);
  for (int a = 0; a < cat.n_objects(); ++a) {
    int classes = 0;
    for (int c : out.class_of[a]) classes = std::max(classes, c + 1);
    q.fib[a] = classes;
  }
  q.act.assign(cat.n_arrows(), {});
  for (int f = 0; f < cat.n_arrows(); ++f) {
    int a = cat.cod(f), d = cat.dom(f);
    q.act[f].assign(q.fib[a], -1);
    for (std::size_t i = 0; i < out.families[a].size(); ++i) {
      int cls = out.class_of[a][i];
      CompatibleFamily r = restrict_family(cat, out.families[a][i], f);
      int target = out.class_of_family(d, r);
      if (q.act[f][cls] >= 0 && q.act[f][cls] != target)
        throw Error("ShapeMismatch", "plus-construction restriction not well defined");
      q.act[f][cls] = target;
    }
  }
  out.plus = std::move(q);

  // unit P → P⁺: p ↦ [M_a, (p·f)_f]
  PresheafMorphism unit{p, out.plus, {}};
  unit.comp.resize(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) {
    unit.comp[a].resize(p.fib[a]);
    Bitset m = max_sieve(cat, a).arrows;
    for (int e = 0; e < p.fib[a]; ++e) {
      CompatibleFamily fam;
      fam.at = a;
      fam.sieve = m;
      for (int f : m.elements()) fam.choice.push_back(p.restrict(e, f));
      unit.comp[a][e] = out.class_of_family(a, fam);
    }
  }
  out.unit = std::move(unit);
  return out;
}

Sheafification sheafify(const Presheaf& p, const Topology& top) {
  Sheafification out;
  out.first = plus(p, top);
  out.second = plus(out.first.plus, top);
  out.sheaf = out.second.plus;
  out.unit = compose_morphisms(out.second.unit, out.first.unit);
  return out;
}

bool unique_factorization(const Sheafification& sh, const Presheaf& g) {
  auto candidates = hom_set(sh.sheaf, g);
  for (const auto& h : hom_set(sh.unit.src, g)) {
    int count = 0;
    for (const auto& hbar : candidates)
      if (compose_morphisms(hbar, sh.unit).comp == h.comp) ++count;
    if (count != 1) return false;
  }
  return true;
}

std::optional<SeparatedFailure> separated_witness(const Presheaf& p, const Topology& top) {
  const auto& cat = *p.cat;
  for (int a = 0; a < cat.n_objects(); ++a)
    for (const auto& s : top.cov[a])
      for (int x = 0; x < p.fib[a]; ++x)
        for (int y = x + 1; y < p.fib[a]; ++y) {
          bool agree = true;
          for (int f : cat.arrows_into[a])
            if (s.test(f) && p.restrict(x, f) != p.restrict(y, f)) {
              agree = false;
              break;
            }
          if (agree) return SeparatedFailure{a, s, x, y};
        }
  return std::nullopt;
}

std::optional<SheafFailure> sheaf_witness(const Presheaf& p, const Topology& top) {
  if (auto w = separated_witness(p, top)) {
    SheafFailure f;
    f.separation_failed = true;
    f.separation = w;
    return f;
  }
  const auto& cat = *p.cat;
  for (int a = 0; a < cat.n_objects(); ++a)
    for (const auto& fam : compatible_families(p, top, a)) {
      bool glued = false;
      for (int e = 0; e < p.fib[a] && !glued; ++e) {
        bool match = true;
        int pos = 0;
        for (int f : fam.sieve.elements()) {
          if (p.restrict(e, f) != fam.choice[pos++]) {
            match = false;
            break;
          }
        }
        glued = match;
      }
      if (!glued) {
        SheafFailure f;
        f.unglued = fam;
        return f;
      }
    }
  return std::nullopt;
}

std::optional<LocalSurjFailure> locally_surjective_witness(const PresheafMorphism& f,
                                                           const Topology& top) {
  const auto& cat = *f.src.cat;
  for (int a = 0; a < cat.n_objects(); ++a)
    for (int x = 0; x < f.dst.fib[a]; ++x) {
      // the set of arrows along which x is hit is a sieve
      Bitset hit(cat.n_arrows());
      for (int g : cat.arrows_into[a]) {
        int xd = f.dst.restrict(x, g);
        for (int y = 0; y < f.src.fib[cat.dom(g)]; ++y)
          if (f.comp[cat.dom(g)][y] == xd) {
            hit.set(g);
            break;
          }
      }
      if (!top.covers(a, hit)) return LocalSurjFailure{a, x, hit};
    }
  return std::nullopt;
}

}  // namespace sheafkit
