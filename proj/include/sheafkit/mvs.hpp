#pragma once

#include <optional>

#include "sheafkit/presheaf.hpp"
#include "sheafkit/topology.hpp"

namespace sheafkit {

enum class CoverMode { Pointwise, Local };

// A multi-valued section of a small φ: B→A: a subpresheaf P ⊆ B whose
// composite to A is a small cover (componentwise or locally surjective,
// depending on the mode).
struct Mvs {
  Subpresheaf carrier;  // ⊆ B
};

// Validity of a candidate mvs under the given mode/class.
bool is_mvs(const PresheafMorphism& phi, const Subpresheaf& p, CoverMode mode,
            const Topology& top, const SmallnessClass& cls);

// All mvss of φ, ordered by a linear extension of the subobject order
// (size, then member bitsets). Throws NotSmall when φ violates the class.
std::vector<Mvs> enumerate_mvs(const PresheafMorphism& phi, CoverMode mode,
                               const Topology& top, const SmallnessClass& cls);

// Minimal elements of the mvs order (no proper sub-mvs).
std::vector<Mvs> minimal_mvs(const PresheafMorphism& phi, CoverMode mode,
                             const Topology& top, const SmallnessClass& cls);

// The default genericity probes: the terminal presheaf, every representable,
// and all binary products of representables.
std::vector<Presheaf> default_test_objects(const FiniteCategory& cat);

// The refinement pattern instantiated for one (Q, Z): a part U_i ⊆ Z per
// family member (the largest subpresheaf of Z over which P_i refines Q),
// k mapping the part to its member, l the inclusion-union U = Σ_i U_i → Z.
struct RefinementWitness {
  int test_index = -1;
  std::vector<std::vector<bool>> part_object;  // [member][object]: U_i nonzero there
  bool l_is_cover = false;
};

struct GenericityResult {
  bool generic = true;
  // on failure: the uncovered mvs (pulled over the failing test object)
  std::optional<Mvs> counter_q;
  int counter_test = -1;
  std::vector<RefinementWitness> witnesses;  // one per (Q, Z) pair checked
};

// Checks the fullness pattern for a family of mvss: for every mvs Q of φ and
// every test object Z there must be a map k: U → ΣI and a cover l: U ↠ Z
// with k*P ≤ l*Q over U. U is constructed maximally per member and the
// inclusion k*P ≤ l*Q is re-verified on the constructed witness.
GenericityResult check_generic(const std::vector<Mvs>& family, const PresheafMorphism& phi,
                               const std::vector<Presheaf>& test_objects, CoverMode mode,
                               const Topology& top, const SmallnessClass& cls);

// Pullback of a (global) mvs along Z → 1: the subpresheaf Q × Z of B × Z.
// Used to probe stability of the mvs property under base change.
Subpresheaf mvs_pullback(const PresheafMorphism& phi, const Mvs& q, const Presheaf& z);
// The pulled-back morphism φ × id_Z : B × Z → A × Z.
PresheafMorphism morphism_times(const PresheafMorphism& phi, const Presheaf& z);

}  // namespace sheafkit
