#pragma once

#include "sheafkit/presheaf.hpp"

namespace sheafkit {

// An object of E/C₀: a finite set anchored over the objects of the category.
struct FamilyOverC0 {
  std::vector<int> anchor;  // anchor[i] = object of element i

  int size() const { return static_cast<int>(anchor.size()); }
};

// π_!B: the presheaf with π_!B(a) = { (x, f: a→b) : anchor(x) = b }. Elements
// at a are indexed in (x, f) lexicographic order; `elems` keeps the decoding.
struct PiShriek {
  Presheaf psh;
  FamilyOverC0 base;
  std::vector<std::vector<std::pair<int, int>>> elems;  // per object: (x, arrow)

  int index_of(int a, int x, int f) const;
};

PiShriek pi_shriek(const FiniteCategory& cat, const FamilyOverC0& base);

// π*Y: the underlying family Σ_a Y(a) with its anchor; `offset[a]` locates
// the block of Y(a) inside the total set.
struct PiStar {
  FamilyOverC0 family;
  std::vector<int> offset;

  int index_of(int a, int y) const { return offset[a] + y; }
};

PiStar pi_star(const Presheaf& y);

// The counit π_!π*Y → Y, (y ∈ Y(b), f: a→b) ↦ y·f. Componentwise
// surjectivity always holds (split by identities); smallness w.r.t. the
// active class is recorded.
struct Counit {
  PiShriek domain;
  PresheafMorphism map;  // π_!π*Y → Y
  bool surjective = false;
  int max_fiber = 0;
  bool small = false;
};

Counit counit(const Presheaf& y, const SmallnessClass& cls);

// A map (r, s): B → π*π_!A — r: B→A in E, s_b: σ_B(b) → σ_A(rb) in C — and
// the induced natural transformation (r,s)_! : π_!B → π_!A, which acts by
// (b, f) ↦ (rb, s_b ∘ f). Validates the dom/cod commutation conditions.
struct ShriekMap {
  PiShriek domain, codomain;
  std::vector<int> r, s;
  PresheafMorphism map;
  bool r_small = false;  // w.r.t. the class passed at construction
};

ShriekMap shriek_map(const FiniteCategory& cat, const FamilyOverC0& b,
                     const FamilyOverC0& a, const std::vector<int>& r,
                     const std::vector<int>& s, const SmallnessClass& cls);

// Transposition along π_! ⊣ π*: morphisms π_!B → Y correspond to maps
// B → π*Y over C₀ (functions assigning to b an element of Y(σ_B(b))).
std::vector<int> transpose_to_family(const PiShriek& b, const PresheafMorphism& m);
PresheafMorphism transpose_to_morphism(const PiShriek& b, const Presheaf& y,
                                       const std::vector<int>& u);
// All maps B → π*Y over C₀, lexicographic.
std::vector<std::vector<int>> maps_over_c0(const FamilyOverC0& b, const Presheaf& y);

// Lemma-style covering of a pointwise small map by a shriek map: given small
// F: Z→Y and L: π_!B → Y, produces the quasi-pullback square
//
//     π_!C ──top──▶ Z
//   (k,l)_!│          │F
//     π_!B ──L──▶ Y
//
// with C = π*(Z ×_Y π_!B) and k small. The returned flags record the
// verified properties (square commutes, comparison map onto, k small).
struct QuasiPullback {
  PiShriek corner;  // π_!C
  ShriekMap left;   // (k,l)_!
  PresheafMorphism top;
  bool commutes = false;
  bool comparison_surjective = false;
  bool k_small = false;

  bool valid() const { return commutes && comparison_surjective && k_small; }
};

QuasiPullback cover_by_shriek(const PresheafMorphism& f, const PiShriek& b,
                              const PresheafMorphism& l, const SmallnessClass& cls);

}  // namespace sheafkit
