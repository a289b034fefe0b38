#include "sheafkit/mvs.hpp"

#include <algorithm>

#include "sheafkit/sheaf.hpp"

namespace sheafkit {

namespace {

// the composite P ⊆ B → A as a standalone morphism on the sub-carrier
bool composite_is_cover(const PresheafMorphism& phi, const Subpresheaf& p, CoverMode mode,
                        const Topology& top) {
  const auto& cat = *phi.src.cat;
  const Presheaf& a = phi.dst;
  if (mode == CoverMode::Pointwise) {
    for (int c = 0; c < cat.n_objects(); ++c) {
      std::vector<bool> hit(a.fib[c], false);
      for (int y = 0; y < phi.src.fib[c]; ++y)
        if (p.contains(c, y)) hit[phi.comp[c][y]] = true;
      for (bool h : hit)
        if (!h) return false;
    }
    return true;
  }
  // local: every x ∈ A(c) is hit after restriction along a covering sieve
  for (int c = 0; c < cat.n_objects(); ++c)
    for (int x = 0; x < a.fib[c]; ++x) {
      Bitset sieve(cat.n_arrows());
      for (int f : cat.arrows_into[c]) {
        int xd = a.restrict(x, f);
        for (int y = 0; y < phi.src.fib[cat.dom(f)]; ++y)
          if (p.contains(cat.dom(f), y) && phi.comp[cat.dom(f)][y] == xd) {
            sieve.set(f);
            break;
          }
      }
      if (!top.covers(c, sieve)) return false;
    }
  return true;
}

bool composite_is_small(const PresheafMorphism& phi, const Subpresheaf& p,
                        const SmallnessClass& cls) {
  if (!cls.bound) return true;
  const auto& cat = *phi.src.cat;
  for (int c = 0; c < cat.n_objects(); ++c) {
    std::vector<int> cnt(phi.dst.fib[c], 0);
    for (int y = 0; y < phi.src.fib[c]; ++y)
      if (p.contains(c, y) && !cls.admits(++cnt[phi.comp[c][y]])) return false;
  }
  return true;
}

}  // namespace

bool is_mvs(const PresheafMorphism& phi, const Subpresheaf& p, CoverMode mode,
            const Topology& top, const SmallnessClass& cls) {
  if (subpresheaf_closure_witness(p)) return false;
  return composite_is_cover(phi, p, mode, top) && composite_is_small(phi, p, cls);
}

std::vector<Mvs> enumerate_mvs(const PresheafMorphism& phi, CoverMode mode,
                               const Topology& top, const SmallnessClass& cls) {
  if (!pointwise_small(phi, cls)) throw Error("NotSmall", "enumerate_mvs needs a small map");
  std::vector<Mvs> out;
  for (const auto& sub : all_subpresheaves(phi.src))
    if (is_mvs(phi, sub, mode, top, cls)) out.push_back(Mvs{sub});
  std::sort(out.begin(), out.end(), [](const Mvs& x, const Mvs& y) {
    int cx = 0, cy = 0;
    for (const auto& b : x.carrier.member) cx += b.count();
    for (const auto& b : y.carrier.member) cy += b.count();
    if (cx != cy) return cx < cy;
    return x.carrier.member < y.carrier.member;
  });
  return out;
}

std::vector<Mvs> minimal_mvs(const PresheafMorphism& phi, CoverMode mode,
                             const Topology& top, const SmallnessClass& cls) {
  std::vector<Mvs> all = enumerate_mvs(phi, mode, top, cls);
  std::vector<Mvs> out;
  for (const auto& p : all) {
    bool minimal = true;
    for (const auto& q : all) {
      if (q.carrier == p.carrier) continue;
      if (subpresheaf_leq(q.carrier, p.carrier)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(p);
  }
  return out;
}

std::vector<Presheaf> default_test_objects(const FiniteCategory& cat) {
  std::vector<Presheaf> out;
  out.push_back(terminal_presheaf(cat));
  std::vector<Presheaf> reps;
  for (int c = 0; c < cat.n_objects(); ++c) reps.push_back(representable(cat, c));
  for (const auto& r : reps) out.push_back(r);
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i; j < reps.size(); ++j)
      out.push_back(product_presheaf(reps[i], reps[j]));
  return out;
}

PresheafMorphism morphism_times(const PresheafMorphism& phi, const Presheaf& z) {
  const auto& cat = *phi.src.cat;
  Presheaf bz = product_presheaf(phi.src, z);
  Presheaf az = product_presheaf(phi.dst, z);
  PresheafMorphism m{bz, az, {}};
  m.comp.resize(cat.n_objects());
  for (int c = 0; c < cat.n_objects(); ++c) {
    m.comp[c].resize(bz.fib[c]);
    for (int i = 0; i < bz.fib[c]; ++i) {
      auto [y, zi] = unpair_index(z, c, i);
      m.comp[c][i] = pair_index(z, c, phi.comp[c][y], zi);
    }
  }
  return m;
}

Subpresheaf mvs_pullback(const PresheafMorphism& phi, const Mvs& q, const Presheaf& z) {
  const auto& cat = *phi.src.cat;
  Presheaf bz = product_presheaf(phi.src, z);
  Subpresheaf out = empty_subpresheaf(bz);
  for (int c = 0; c < cat.n_objects(); ++c)
    for (int i = 0; i < bz.fib[c]; ++i) {
      auto [y, zi] = unpair_index(z, c, i);
      (void)zi;
      if (q.carrier.contains(c, y)) out.member[c].set(i);
    }
  return out;
}

GenericityResult check_generic(const std::vector<Mvs>& family, const PresheafMorphism& phi,
                               const std::vector<Presheaf>& test_objects, CoverMode mode,
                               const Topology& top, const SmallnessClass& cls) {
  const auto& cat = *phi.src.cat;
  for (const auto& p : family)
    if (!is_mvs(phi, p.carrier, mode, top, cls))
      throw Error("ShapeMismatch", "family member is not an mvs of φ");

  GenericityResult result;
  std::vector<Mvs> all = enumerate_mvs(phi, mode, top, cls);

  for (const auto& q : all) {
    // objects over which member i refines q hereditarily:
    // H_i = { c : ∀f: d→c, P_i(d) ⊆ Q(d) }
    std::vector<std::vector<bool>> h(family.size(),
                                     std::vector<bool>(cat.n_objects(), false));
    for (std::size_t i = 0; i < family.size(); ++i)
      for (int c = 0; c < cat.n_objects(); ++c) {
        bool ok = true;
        for (int f : cat.arrows_into[c]) {
          int d = cat.dom(f);
          if (!family[i].carrier.member[d].subset_of(q.carrier.member[d])) {
            ok = false;
            break;
          }
        }
        h[i][c] = ok;
      }

    for (std::size_t t = 0; t < test_objects.size(); ++t) {
      const Presheaf& z = test_objects[t];
      // l: Σ_i (Z restricted to H_i) → Z must be a cover in the active mode
      bool cover = true;
      if (mode == CoverMode::Pointwise) {
        for (int c = 0; c < cat.n_objects() && cover; ++c) {
          if (z.fib[c] == 0) continue;
          bool some = false;
          for (std::size_t i = 0; i < family.size(); ++i) some |= h[i][c];
          cover = some;
        }
      } else {
        for (int c = 0; c < cat.n_objects() && cover; ++c) {
          if (z.fib[c] == 0) continue;
          Bitset sieve(cat.n_arrows());
          for (int f : cat.arrows_into[c]) {
            bool some = false;
            for (std::size_t i = 0; i < family.size(); ++i) some |= h[i][cat.dom(f)];
            if (some) sieve.set(f);
          }
          cover = top.covers(c, sieve);
        }
      }

      RefinementWitness w;
      w.test_index = static_cast<int>(t);
      w.l_is_cover = cover;
      for (std::size_t i = 0; i < family.size(); ++i) w.part_object.push_back(h[i]);
      result.witnesses.push_back(std::move(w));

      if (!cover) {
        result.generic = false;
        result.counter_q = q;
        result.counter_test = static_cast<int>(t);
        return result;
      }
      // re-verify k*P ≤ l*Q on the constructed witness: on every object of
      // H_i the member is contained in q (this is what the parts encode)
      for (std::size_t i = 0; i < family.size(); ++i)
        for (int c = 0; c < cat.n_objects(); ++c)
          if (h[i][c] &&
              !family[i].carrier.member[c].subset_of(q.carrier.member[c]))
            throw Error("ShapeMismatch", "refinement witness failed re-verification");
    }
  }
  return result;
}

}  // namespace sheafkit
