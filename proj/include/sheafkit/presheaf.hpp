#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sheafkit/bitset.hpp"
#include "sheafkit/category.hpp"

namespace sheafkit {

// A finite-set-valued presheaf on a finite category. Fibers are dense index
// sets 0..fib[a]-1; act[f] maps the fiber at cod(f) into the fiber at dom(f).
// Values are immutable after validation and carry optional element labels
// for I/O.
struct Presheaf {
  const FiniteCategory* cat = nullptr;
  std::vector<int> fib;
  std::vector<std::vector<int>> act;
  std::vector<std::vector<std::string>> labels;  // empty = default "a.i" labels

  int fiber(int a) const { return fib[a]; }
  // x · f for x in the fiber at cod(f).
  int restrict(int x, int f) const { return act[f][x]; }

  std::string label(int a, int x) const {
    if (!labels.empty() && !labels[a].empty()) return labels[a][x];
    return cat->objects[a] + "." + std::to_string(x);
  }

  friend bool operator==(const Presheaf& x, const Presheaf& y) {
    return x.cat == y.cat && x.fib == y.fib && x.act == y.act;
  }
};

// Functoriality check: x·id = x and (x·f)·g = x·(fg).
std::vector<Issue> validate_presheaf(const Presheaf& x);

Presheaf empty_presheaf(const FiniteCategory& cat);
Presheaf terminal_presheaf(const FiniteCategory& cat);
Presheaf constant_presheaf(const FiniteCategory& cat, int size);
// y(c): fiber at d is Hom(d, c) with restriction by precomposition. Element i
// of the fiber at d is the i-th arrow of arrows_into_local(d, c).
Presheaf representable(const FiniteCategory& cat, int c);
// Arrows d→c in index order (the element order of representable fibers).
std::vector<int> hom_arrows(const FiniteCategory& cat, int d, int c);

// Binary product with lexicographic pair indexing ix * |Y(a)| + iy.
Presheaf product_presheaf(const Presheaf& x, const Presheaf& y);
inline int pair_index(const Presheaf& y, int a, int ix, int iy) { return ix * y.fib[a] + iy; }
inline std::pair<int, int> unpair_index(const Presheaf& y, int a, int i) {
  return {y.fib[a] == 0 ? 0 : i / y.fib[a], y.fib[a] == 0 ? 0 : i % y.fib[a]};
}

// A natural transformation, stored with its endpoints by value (presheaves
// are small; value semantics keeps everything safely immutable).
struct PresheafMorphism {
  Presheaf src, dst;
  std::vector<std::vector<int>> comp;  // comp[a] : src.fib[a] → dst.fib[a]

  int apply(int a, int x) const { return comp[a][x]; }
};

std::vector<Issue> validate_morphism(const PresheafMorphism& f);
PresheafMorphism identity_morphism(const Presheaf& x);
PresheafMorphism compose_morphisms(const PresheafMorphism& g, const PresheafMorphism& f);
bool componentwise_surjective(const PresheafMorphism& f);
bool componentwise_injective(const PresheafMorphism& f);

// All natural transformations src → dst, in lexicographic order of their
// component tables.
std::vector<PresheafMorphism> hom_set(const Presheaf& src, const Presheaf& dst);

// A subpresheaf: per-object subsets closed under restriction.
struct Subpresheaf {
  Presheaf of;
  std::vector<Bitset> member;

  bool contains(int a, int x) const { return member[a].test(x); }
  friend bool operator==(const Subpresheaf& a, const Subpresheaf& b) {
    return a.of == b.of && a.member == b.member;
  }
  friend bool operator<(const Subpresheaf& a, const Subpresheaf& b) {
    return a.member < b.member;
  }
};

// Returns an offending (a, x, f) if not closed under restriction.
std::optional<std::tuple<int, int, int>> subpresheaf_closure_witness(const Subpresheaf& s);
Subpresheaf full_subpresheaf(const Presheaf& x);
Subpresheaf empty_subpresheaf(const Presheaf& x);
// Least subpresheaf containing (a, x).
Subpresheaf principal_subpresheaf(const Presheaf& x, int a, int elem);
bool subpresheaf_leq(const Subpresheaf& a, const Subpresheaf& b);

// The full lattice of subpresheaves (unions of principal ones), sorted.
std::vector<Subpresheaf> all_subpresheaves(const Presheaf& x);

// Smallness: the pointwise fiber-cardinality class. `bound` empty means the
// unbounded class (every finite-fiber map is small).
struct SmallnessClass {
  std::optional<int> bound;

  bool admits(int fiber_size) const { return !bound || fiber_size <= *bound; }
};

int max_fiber_size(const PresheafMorphism& f);
bool pointwise_small(const PresheafMorphism& f, const SmallnessClass& cls);

// All presheaves on `cat` with every fiber ≤ max_fiber (functorial action
// tables enumerated exhaustively), deterministic order. Intended for desk
// scale sites only.
std::vector<Presheaf> all_presheaves(const FiniteCategory& cat, int max_fiber);

}  // namespace sheafkit
