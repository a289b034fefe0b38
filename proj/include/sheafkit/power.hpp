#pragma once

#include "sheafkit/presheaf.hpp"
#include "sheafkit/topology.hpp"

namespace sheafkit {

// The small-subobject classifier in presheaves:
//   ℙs(X)(c) = { A ⊆ yc × X : A a small subpresheaf },
//   (A·f)(e) = { (g: e→d, x) : (fg, x) ∈ A },  x ∈_X A ⇔ (id_c, x) ∈ A.
// Elements of ℙs(X)(c) are encoded as per-object bitsets over the pair
// fibers (yc × X)(d); pairs are ordered (arrow position, x) lexicographically.
struct PowerObject {
  Presheaf base;  // X
  Presheaf psh;   // ℙs(X)
  // pair fibers of yc × X: for each c, each object d, the list of (g, x)
  std::vector<std::vector<std::vector<std::pair<int, int>>>> pairs;  // [c][d]
  // decode[c][i] = per-object bitsets over pairs[c][d]
  std::vector<std::vector<std::vector<Bitset>>> decode;

  Presheaf membership_product;  // X × ℙs(X)
  Subpresheaf membership;       // ∈_X ⊆ X × ℙs(X)

  bool elem_of(int c, int x, int powelem) const;
  int index_of(int c, const std::vector<Bitset>& a) const;  // -1 if absent
};

PowerObject power_object(const Presheaf& x, const SmallnessClass& cls);

// The classifying morphism of an Y-indexed family of small subobjects
// R ⊆ X × Y (fibers over Y small), i.e. the unique ρ: Y → ℙs(X) with
// (id × ρ)*(∈_X) = R. Returns nullopt when R's fibers violate the class.
std::optional<PresheafMorphism> classify(const PowerObject& pw, const Presheaf& y,
                                         const Subpresheaf& r, const SmallnessClass& cls);

// Pullback of ∈_X along id × ρ — the relation classified by ρ.
Subpresheaf classified_relation(const PowerObject& pw, const Presheaf& y,
                                const PresheafMorphism& rho);

// The sheaf power object: ℙs(X) quotiented by cover-relative bisimulation
//   A ~ A' ⇔ ∀(f: b→c, x) ∈ A the sieve {g : (fg, x·g) ∈ A'} covers b,
//            and symmetrically;
// membership x ∈ [A] ⇔ the sieve {f : (f, x·f) ∈ A} covers c.
struct SheafPowerObject {
  PowerObject underlying;
  Presheaf psh;                             // the quotient
  std::vector<std::vector<int>> class_of;   // [c][elem of ℙs(X)(c)] → class
  std::vector<std::vector<int>> class_rep;  // [c][class] → least element
  Presheaf membership_product;              // X × quotient
  Subpresheaf membership;
};

SheafPowerObject sheaf_power_object(const Presheaf& x, const Topology& top,
                                    const SmallnessClass& cls);

}  // namespace sheafkit
