#pragma once

#include "sheafkit/presheaf.hpp"
#include "sheafkit/topology.hpp"

namespace sheafkit {

// The matching-pair fiber of F: Y→X at x ∈ X(a), cut down to a sieve S on a:
// pairs (f: b→a ∈ S, y ∈ Y(b)) with F(y) = x·f. With S maximal this is the
// fiber used by the Π- and polynomial-functor constructions; restriction is
// (f, y)·g = (fg, y·g).
struct SievedFiber {
  int at = -1, x = -1;
  std::vector<std::vector<std::pair<int, int>>> elems;  // per object b: (f, y)

  int total() const {
    int n = 0;
    for (auto& v : elems) n += static_cast<int>(v.size());
    return n;
  }
  int index_of(int b, int f, int y) const;  // -1 if absent
};

SievedFiber sieved_fiber(const PresheafMorphism& f, int a, int x, const Bitset& sieve);
SievedFiber m_fiber(const PresheafMorphism& f, int a, int x);

// The fiber in presheaf form (fibers = matching pairs, restriction as above);
// used by tests that treat Y^M_x as a presheaf.
Presheaf fiber_presheaf(const PresheafMorphism& f, int a, int x);

// ∀_F(A)(a) = { x ∈ X(a) : every (f, y) ∈ Y^M_x has y ∈ A }, the right
// adjoint to pullback on subobject lattices.
Subpresheaf forall_along(const PresheafMorphism& f, const Subpresheaf& a);

// F*(C) ⊆ Y for C ⊆ X.
Subpresheaf pullback_sub(const PresheafMorphism& f, const Subpresheaf& c);

// Pointwise image factorization: F = (cover onto image) ∘ (inclusion).
struct ImageFactorization {
  Subpresheaf image;       // ⊆ codomain
  Presheaf image_presheaf; // the image with dense element indices
  PresheafMorphism cover;  // domain ↠ image_presheaf
  PresheafMorphism incl;   // image_presheaf ↪ codomain
};

ImageFactorization image_factorization(const PresheafMorphism& f);

// Π along a small F: Y→X applied to G: B→Y. The fiber over x ∈ X(a) is the
// set of natural sections s: Y^M_x → B with G(s(f,y)) = y; restriction acts
// by reindexing the fiber. Throws NotSmall if F violates the class.
struct PiFunctorResult {
  Presheaf total;           // Π_F(G)
  PresheafMorphism to_base; // Π_F(G) → X
  // decode: per object a, element i → (x, section values in the order of
  // m_fiber(F, a, x) pairs)
  std::vector<std::vector<std::pair<int, std::vector<int>>>> decode;
};

PiFunctorResult pi_functor(const PresheafMorphism& f, const PresheafMorphism& g,
                           const SmallnessClass& cls);

}  // namespace sheafkit
